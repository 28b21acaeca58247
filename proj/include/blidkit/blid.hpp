#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "blidkit/bump.hpp"
#include "blidkit/function_space.hpp"

namespace blidkit {

/// A blid construction was applied to an element of the wrong space.
struct WrongSpace : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Input lies outside the subspace a restricted blid acts on.
struct SubspaceMembership : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Parameters that cannot be realized by the discretization.
struct ConfigurationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Bounded projector on sampled (q = 0) functions.
class Projector {
 public:
  using Rule = std::function<CqElement(const CqElement&)>;

  Projector(std::string name, Rule rule, double norm_bound, double tolerance = 1e-10)
      : name_(std::move(name)), rule_(std::move(rule)), norm_bound_(norm_bound), tolerance_(tolerance) {}

  static Projector identity();
  static Projector zero();
  /// x -> (x(t) + x(-t)) / 2 on a grid symmetric about 0.
  static Projector even_part();
  /// Matrix acting on sample values.
  static Projector from_matrix(Eigen::MatrixXd p, double tolerance = 1e-10);

  CqElement operator()(const CqElement& x) const { return rule_(x); }
  const std::string& name() const { return name_; }
  double norm_bound() const { return norm_bound_; }
  double tolerance() const { return tolerance_; }

 private:
  std::string name_;
  Rule rule_;
  double norm_bound_;
  double tolerance_;
};

/// max over samples of ||pi(pi(x)) - pi(x)||_inf on random elements.
double idempotency_defect(const Projector& pi, const GridInterval& grid, int samples, std::uint64_t seed);

enum class ProjectorSide { Image, Kernel };

class BlidMap;

struct PointwiseBlid {};
struct TaylorIntegralBlid {
  int level;
};
struct ScaledBlid {
  double c;
  int level;
  double inner_bound;  // N with ||inner(x)||_level < N for all x
  std::shared_ptr<const BlidMap> inner;
};
struct SegmentBlid {
  CqElement anchor;
  PlaneBump band;
};
struct ProjectedBlid {
  Projector projector;
  ProjectorSide side;
  std::shared_ptr<const BlidMap> inner;
};

/// Globally defined, bounded map that equals the identity near zero.
class BlidMap {
 public:
  enum class Kind { Pointwise, TaylorIntegral, Scaled, Segment, Projected };
  using Construction = std::variant<PointwiseBlid, TaylorIntegralBlid, ScaledBlid, SegmentBlid, ProjectedBlid>;

  static BlidMap pointwise(BumpFunction bump);
  static BlidMap taylor_integral(BumpFunction bump, int level,
                                 SeminormFamily space = SeminormFamily::cinf_interval());
  static BlidMap segment(CqElement anchor, PlaneBump band, BumpFunction bump = {});
  static BlidMap projected(Projector pi, BlidMap inner, ProjectorSide side);

  CqElement operator()(const CqElement& x) const;

  Kind kind() const;
  const Construction& construction() const { return construction_; }
  const BumpFunction& bump() const { return bump_; }
  const SeminormFamily& space() const { return space_; }

  /// Elements with relevant norm <= local_radius() are fixed exactly. The
  /// norm is sup_norm restricted to derivative orders <= level(). Segment
  /// blids are the identity on the band itself and report 0.
  double local_radius() const { return local_radius_; }

  /// Derivative level the construction damps (0 for pointwise maps).
  int level() const;

  /// Analytic bound on ||H(x)||_level() in the blid's space.
  double image_bound() const;

 private:
  BlidMap(Construction c, BumpFunction bump, SeminormFamily space, double local_radius)
      : construction_(std::move(c)), bump_(bump), space_(space), local_radius_(local_radius) {}

  friend BlidMap blid_scaled(double c, const BumpFunction& bump, const SeminormFamily& space, int max_level);

  Construction construction_;
  BumpFunction bump_;
  SeminormFamily space_;
  double local_radius_;
};

std::string to_string(BlidMap::Kind kind);

/// t -> h(x(t)) x(t); requires q = 0.
CqElement blid_pointwise(const BumpFunction& h, const CqElement& x);

/// Damps the jet x^(j)(anchor), j < k, and the samples of x^(k), then
/// reconstructs: sum_j (t^j/j!) h(x^(j)) x^(j) plus the k-fold integral of
/// h(x^(k)) x^(k). The result has q = k.
CqElement blid_taylor_integral(const BumpFunction& h, const CqElement& x, int k);

/// Minimal level k with k > 1 - log2(c).
int minimal_scaled_level(double c);

/// H_c(x) = (c / 4N) H_k((4N / c) x) with H_k the Taylor-integral blid at the
/// minimal admissible level and N = a e^k.
BlidMap blid_scaled(double c, const BumpFunction& bump, const SeminormFamily& space = SeminormFamily::cinf_interval(),
                    int max_level = 40);

/// y(t) + h(t, x(t)) (x(t) - y(t)).
CqElement blid_segment(const CqElement& y, const PlaneBump& band, const CqElement& x);

/// pi(H(x)) on the image side, H(x) - pi(H(x)) on the kernel side.
CqElement blid_projected(const Projector& pi, const BlidMap& h, ProjectorSide side, const CqElement& x);

/// R^d viewed as functions on a finite set: H(x)_i = h(x_i) x_i.
Vector blid_pointwise(const BumpFunction& h, const Vector& x);
/// Jacobian of the coordinate blid (diagonal).
Vector blid_pointwise_derivative(const BumpFunction& h, const Vector& x);
/// eps H(x / eps); identity on ||x||_inf <= eps r_inner, image in eps a.
Vector blid_rescaled(const BumpFunction& h, double eps, const Vector& x);

struct BoundCertificate {
  std::string kind;
  int k = 0;
  double bound = 0.0;
  double observed_max = 0.0;
  int samples = 0;
  bool pass = false;
  std::optional<CqElement> witness;
};

nlohmann::json to_json(const BoundCertificate& c);

/// Samples `sample_count` rough elements over the magnitude strata and checks
/// ||H(x)||_k < bound in `space`.
BoundCertificate certify_bound(const BlidMap& h, const SeminormFamily& space, int k, double bound,
                               const GridInterval& grid, int sample_count, std::uint64_t seed);

/// certify_bound with the analytic bound a e^k of the Taylor-integral blid.
BoundCertificate blid_bound_certificate(const BlidMap& h, int k, int sample_count, std::uint64_t seed,
                                        const GridInterval& grid = GridInterval(0.0, 1.0, 1025));

/// Largest d(H_c(x), 0) over random x, compared against c.
BoundCertificate certify_containment(const BlidMap& scaled, const FrechetMetric& m, const GridInterval& grid,
                                     int sample_count, std::uint64_t seed);

struct IdentityReport {
  double radius = 0.0;
  int samples = 0;
  double max_error = 0.0;
  bool pass = false;
};

/// Checks H(x) == x on random x with norm <= radius (defaults to local_radius).
IdentityReport certify_local_identity(const BlidMap& h, const GridInterval& grid, int sample_count, std::uint64_t seed,
                                      std::optional<double> radius = std::nullopt);

}  // namespace blidkit
