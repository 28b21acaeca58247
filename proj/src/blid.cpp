#include "blidkit/blid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blidkit/sampling.hpp"

namespace blidkit {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_values(const CqElement& x, const char* what) {
  if (x.q() != 0) throw WrongSpace(std::string(what) + ": expects a C^0 element (q = 0), got q = " + std::to_string(x.q()));
}

// Input smoothness a blid needs from random test elements.
int input_order(const BlidMap& h) {
  switch (h.kind()) {
    case BlidMap::Kind::Pointwise:
    case BlidMap::Kind::Segment:
    case BlidMap::Kind::Projected: return 0;
    default: return h.level();
  }
}

double max_table_error(const CqElement& a, const CqElement& b, int max_order) {
  const Eigen::MatrixXd ta = derivative_table(a);
  const Eigen::MatrixXd tb = derivative_table(b);
  return (ta.topRows(max_order + 1) - tb.topRows(max_order + 1)).cwiseAbs().maxCoeff();
}

}  // namespace

Projector Projector::identity() {
  return Projector("identity", [](const CqElement& x) { return x; }, 1.0);
}

Projector Projector::zero() {
  return Projector("zero", [](const CqElement& x) { return 0.0 * x; }, 0.0);
}

Projector Projector::even_part() {
  return Projector(
      "even_part",
      [](const CqElement& x) {
        require_values(x, "even_part projector");
        const double tol = 1e-12 * std::max(1.0, std::abs(x.grid().left()));
        if (std::abs(x.grid().left() + x.grid().right()) > tol)
          throw ShapeMismatch("even_part projector: grid must be symmetric about 0");
        return CqElement::from_values(x.grid(), 0.5 * (x.top() + x.top().reverse()));
      },
      1.0);
}

Projector Projector::from_matrix(Eigen::MatrixXd p, double tolerance) {
  const double norm = p.cwiseAbs().rowwise().sum().maxCoeff();
  return Projector(
      "matrix",
      [p = std::move(p)](const CqElement& x) {
        require_values(x, "matrix projector");
        if (p.cols() != x.top().size()) throw ShapeMismatch("matrix projector: size mismatch");
        return CqElement::from_values(x.grid(), p * x.top());
      },
      norm, tolerance);
}

double idempotency_defect(const Projector& pi, const GridInterval& grid, int samples, std::uint64_t seed) {
  Rng rng = make_stream(seed, "idempotency:" + pi.name());
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const CqElement x = random_rough_element(rng, grid, 0, 1.0);
    const CqElement once = pi(x);
    worst = std::max(worst, (pi(once).top() - once.top()).cwiseAbs().maxCoeff());
  }
  return worst;
}

CqElement blid_pointwise(const BumpFunction& h, const CqElement& x) {
  require_values(x, "blid_pointwise");
  return CqElement::from_values(x.grid(), x.top().unaryExpr([&h](double v) { return h.damp(v); }));
}

CqElement blid_taylor_integral(const BumpFunction& h, const CqElement& x, int k) {
  if (k < 0 || k > x.q())
    throw OrderOutOfRange("blid_taylor_integral: level " + std::to_string(k) + " exceeds q = " + std::to_string(x.q()));
  const Eigen::MatrixXd table = derivative_table(x);
  const auto a = static_cast<Eigen::Index>(x.anchor());
  Vector jet(k);
  for (int j = 0; j < k; ++j) jet[j] = h.damp(table(j, a));
  Vector top = table.row(k).transpose().unaryExpr([&h](double v) { return h.damp(v); });
  return CqElement(k, x.grid(), std::move(jet), std::move(top), x.anchor());
}

int minimal_scaled_level(double c) {
  if (!(c > 0.0)) throw ConfigurationError("blid_scaled: c must be positive");
  const double threshold = 1.0 - std::log2(c);
  return std::max(0, static_cast<int>(std::floor(threshold)) + 1);
}

BlidMap BlidMap::pointwise(BumpFunction bump) {
  return BlidMap(PointwiseBlid{}, bump, SeminormFamily::cq_interval(0), bump.r_inner());
}

BlidMap BlidMap::taylor_integral(BumpFunction bump, int level, SeminormFamily space) {
  if (level < 0) throw std::invalid_argument("taylor_integral: level must be nonnegative");
  return BlidMap(TaylorIntegralBlid{level}, bump, space, bump.r_inner());
}

BlidMap BlidMap::segment(CqElement anchor, PlaneBump band, BumpFunction bump) {
  require_values(anchor, "segment blid anchor");
  return BlidMap(SegmentBlid{std::move(anchor), std::move(band)}, bump, SeminormFamily::cq_interval(0), 0.0);
}

BlidMap BlidMap::projected(Projector pi, BlidMap inner, ProjectorSide side) {
  const BumpFunction bump = inner.bump();
  const SeminormFamily space = inner.space();
  const double radius = inner.local_radius();
  return BlidMap(ProjectedBlid{std::move(pi), side, std::make_shared<const BlidMap>(std::move(inner))}, bump, space,
                 radius);
}

BlidMap blid_scaled(double c, const BumpFunction& bump, const SeminormFamily& space, int max_level) {
  const int k = minimal_scaled_level(c);
  if (k > max_level)
    throw ConfigurationError("blid_scaled: c = " + std::to_string(c) + " needs level " + std::to_string(k) +
                             " beyond the representable maximum " + std::to_string(max_level));
  if (space.is_line() && k > max_level)
    throw ConfigurationError("blid_scaled: window [-k, k] exceeds the line representation");
  auto inner = std::make_shared<const BlidMap>(BlidMap::taylor_integral(bump, k, space));
  const double n_bound = inner->image_bound();
  const double radius = inner->local_radius() * c / (4.0 * n_bound);
  return BlidMap(ScaledBlid{c, k, n_bound, std::move(inner)}, bump, space, radius);
}

CqElement blid_segment(const CqElement& y, const PlaneBump& band, const CqElement& x) {
  require_values(x, "blid_segment");
  require_values(y, "blid_segment anchor");
  if (!(x.grid() == y.grid())) throw ShapeMismatch("blid_segment: x and y live on different grids");
  Vector out(x.top().size());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double t = x.grid().point(static_cast<std::size_t>(i));
    const double xi = x.top()[i];
    const double yi = y.top()[i];
    out[i] = yi + band(t, xi) * (xi - yi);
  }
  return CqElement::from_values(x.grid(), std::move(out));
}

CqElement blid_projected(const Projector& pi, const BlidMap& h, ProjectorSide side, const CqElement& x) {
  const CqElement px = pi(x);
  const double scale = std::max(1.0, x.top().cwiseAbs().maxCoeff());
  const double defect = side == ProjectorSide::Image ? (px.top() - x.top()).cwiseAbs().maxCoeff()
                                                     : px.top().cwiseAbs().maxCoeff();
  if (defect > pi.tolerance() * scale)
    throw SubspaceMembership(std::string("blid_projected: input is not in the ") +
                             (side == ProjectorSide::Image ? "image" : "kernel") + " of the projector (defect " +
                             std::to_string(defect) + ")");
  const CqElement hx = h(x);
  const CqElement phx = pi(hx);
  return side == ProjectorSide::Image ? phx : hx - phx;
}

CqElement BlidMap::operator()(const CqElement& x) const {
  return std::visit(
      Overloaded{
          [&](const PointwiseBlid&) { return blid_pointwise(bump_, x); },
          [&](const TaylorIntegralBlid& b) { return blid_taylor_integral(bump_, x, b.level); },
          [&](const ScaledBlid& b) {
            const double up = 4.0 * b.inner_bound / b.c;
            return (1.0 / up) * (*b.inner)(up * x);
          },
          [&](const SegmentBlid& b) { return blid_segment(b.anchor, b.band, x); },
          [&](const ProjectedBlid& b) { return blid_projected(b.projector, *b.inner, b.side, x); },
      },
      construction_);
}

BlidMap::Kind BlidMap::kind() const { return static_cast<Kind>(construction_.index()); }

int BlidMap::level() const {
  return std::visit(Overloaded{
                        [](const PointwiseBlid&) { return 0; },
                        [](const TaylorIntegralBlid& b) { return b.level; },
                        [](const ScaledBlid& b) { return b.level; },
                        [](const SegmentBlid&) { return 0; },
                        [](const ProjectedBlid& b) { return b.inner->level(); },
                    },
                    construction_);
}

double BlidMap::image_bound() const {
  const double a = bump_.sup_hu();
  return std::visit(
      Overloaded{
          [&](const PointwiseBlid&) { return a; },
          [&](const TaylorIntegralBlid& b) { return a * std::exp(static_cast<double>(b.level)); },
          [&](const ScaledBlid& b) { return b.c / 4.0; },
          [&](const SegmentBlid& b) {
            double bound = b.anchor.top().cwiseAbs().maxCoeff();
            for (std::size_t i = 0; i < b.anchor.grid().size(); ++i) {
              const double t = b.anchor.grid().point(i);
              bound = std::max(bound, std::max(std::abs(b.band.lower(t)), std::abs(b.band.upper(t))) + b.band.margin());
            }
            return bound;
          },
          [&](const ProjectedBlid& b) {
            const double p = b.projector.norm_bound();
            return (b.side == ProjectorSide::Image ? p : 1.0 + p) * b.inner->image_bound();
          },
      },
      construction_);
}

std::string to_string(BlidMap::Kind kind) {
  switch (kind) {
    case BlidMap::Kind::Pointwise: return "Pointwise";
    case BlidMap::Kind::TaylorIntegral: return "TaylorIntegral";
    case BlidMap::Kind::Scaled: return "Scaled";
    case BlidMap::Kind::Segment: return "Segment";
    case BlidMap::Kind::Projected: return "Projected";
  }
  return "unknown";
}

Vector blid_pointwise(const BumpFunction& h, const Vector& x) {
  return x.unaryExpr([&h](double v) { return h.damp(v); });
}

Vector blid_pointwise_derivative(const BumpFunction& h, const Vector& x) {
  return x.unaryExpr([&h](double v) { return h.damp_derivative(v); });
}

Vector blid_rescaled(const BumpFunction& h, double eps, const Vector& x) {
  return eps * blid_pointwise(h, Vector(x / eps));
}

nlohmann::json to_json(const BoundCertificate& c) {
  nlohmann::json j{{"kind", c.kind},       {"k", c.k},       {"bound", c.bound},
                   {"observed_max", c.observed_max}, {"samples", c.samples}, {"pass", c.pass}};
  if (c.witness) j["witness"] = to_json(*c.witness);
  return j;
}

BoundCertificate certify_bound(const BlidMap& h, const SeminormFamily& space, int k, double bound,
                               const GridInterval& grid, int sample_count, std::uint64_t seed) {
  BoundCertificate cert{to_string(h.kind()), k, bound, 0.0, sample_count, true, std::nullopt};
  Rng rng = make_stream(seed, "bound:" + cert.kind + ":" + std::to_string(k));
  const int q = input_order(h);
  const std::size_t anchor = space.is_line() ? grid.nearest_index(0.0) : 0;
  std::optional<CqElement> worst;
  for (int s = 0; s < sample_count; ++s) {
    const double radius = kStrata[s % std::size(kStrata)];
    const CqElement x = random_rough_element(rng, grid, q, radius, anchor);
    const double value = seminorm(h(x), k, space);
    if (!worst || value > cert.observed_max) {
      cert.observed_max = value;
      worst = x;
    }
  }
  cert.pass = cert.observed_max < bound;
  if (!cert.pass) cert.witness = worst;
  return cert;
}

BoundCertificate blid_bound_certificate(const BlidMap& h, int k, int sample_count, std::uint64_t seed,
                                        const GridInterval& grid) {
  if (h.kind() != BlidMap::Kind::TaylorIntegral && h.kind() != BlidMap::Kind::Pointwise)
    throw WrongSpace("blid_bound_certificate: expects a Taylor-integral or pointwise blid");
  if (h.level() != k)
    throw OrderOutOfRange("blid_bound_certificate: blid level " + std::to_string(h.level()) +
                          " differs from certificate level " + std::to_string(k));
  const SeminormFamily space = h.kind() == BlidMap::Kind::Pointwise ? SeminormFamily::cinf_interval() : h.space();
  return certify_bound(h, space, k, h.bump().sup_hu() * std::exp(static_cast<double>(k)), grid, sample_count, seed);
}

BoundCertificate certify_containment(const BlidMap& scaled, const FrechetMetric& m, const GridInterval& grid,
                                     int sample_count, std::uint64_t seed) {
  const auto* sb = std::get_if<ScaledBlid>(&scaled.construction());
  if (sb == nullptr) throw WrongSpace("certify_containment: expects a scaled blid");
  BoundCertificate cert{"Scaled", sb->level, sb->c, 0.0, sample_count, true, std::nullopt};
  Rng rng = make_stream(seed, "containment:" + std::to_string(sb->c));
  const std::size_t anchor = m.seminorms.is_line() ? grid.nearest_index(0.0) : 0;
  const CqElement origin = CqElement::zero(sb->level, grid, anchor);
  std::optional<CqElement> worst;
  for (int s = 0; s < sample_count; ++s) {
    const double radius = kStrata[s % std::size(kStrata)];
    const CqElement x = random_rough_element(rng, grid, sb->level, radius, anchor);
    const double d = metric(scaled(x), origin, m);
    if (!worst || d > cert.observed_max) {
      cert.observed_max = d;
      worst = x;
    }
  }
  cert.pass = cert.observed_max < sb->c;
  if (!cert.pass) cert.witness = worst;
  return cert;
}

IdentityReport certify_local_identity(const BlidMap& h, const GridInterval& grid, int sample_count,
                                      std::uint64_t seed, std::optional<double> radius) {
  IdentityReport report;
  report.radius = radius.value_or(h.local_radius());
  report.samples = sample_count;
  Rng rng = make_stream(seed, "identity:" + to_string(h.kind()));
  const int q = input_order(h);
  const auto* seg = std::get_if<SegmentBlid>(&h.construction());
  const auto* proj = std::get_if<ProjectedBlid>(&h.construction());
  for (int s = 0; s < sample_count; ++s) {
    CqElement x = CqElement::zero(q, grid);
    if (seg != nullptr) {
      Vector v(static_cast<Eigen::Index>(grid.size()));
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid.point(i);
        v[static_cast<Eigen::Index>(i)] = seg->band.lower(t) + uniform(rng, 0.0, 1.0) * (seg->band.upper(t) - seg->band.lower(t));
      }
      x = CqElement::from_values(grid, std::move(v));
    } else {
      x = random_rough_element(rng, grid, q, 1.0);
      if (proj != nullptr) x = proj->side == ProjectorSide::Image ? proj->projector(x) : x - proj->projector(x);
      const double n = sup_norm(x);
      if (n > 0.0) x *= report.radius * uniform(rng, 0.0, 1.0) / n;
    }
    report.max_error = std::max(report.max_error, max_table_error(h(x), x, h.level()));
  }
  report.pass = report.max_error <= 1e-12;
  return report;
}

}  // namespace blidkit
