#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "regula/vec.hpp"

namespace regula {

struct Ball {
  Vec center;
  double radius = 0.0;
};

/// Self-map of a convex subset of coordinate space together with a claimed
/// strictness constant kappa in [0,1). The domain is either the full space
/// or a ball; ball-restricted operators apply the metric projection onto
/// the ball before evaluating, which keeps the map total. An optional known
/// fixed point p must satisfy ||p - Tp|| <= 1e-12 * (1 + ||p||).
class Operator {
 public:
  using EvalFn = std::function<Vec(const Vec&)>;

  Operator(std::string id, std::size_t dim, double kappa, EvalFn raw,
           std::optional<Ball> domain = std::nullopt,
           std::optional<Vec> fixed_point = std::nullopt);

  /// Evaluate at x (projected into the ball first when ball-restricted).
  Vec operator()(const Vec& x) const;

  double kappa() const noexcept { return kappa_; }
  std::size_t dim() const noexcept { return dim_; }
  const std::optional<Ball>& domain() const noexcept { return domain_; }
  const std::optional<Vec>& known_fixed_point() const noexcept { return fixed_point_; }
  const std::string& id() const noexcept { return id_; }

  bool contains(const Vec& x) const;
  Vec project(const Vec& x) const;

 private:
  std::string id_;
  std::size_t dim_;
  double kappa_;
  EvalFn raw_;
  std::optional<Ball> domain_;
  std::optional<Vec> fixed_point_;
};

/// Declarative description of a catalog operator. `kappa` overrides the
/// derived constant (useful for validating wrong claims); affine maps
/// without a supplied constant get one estimated from sampled defect roots
/// and validated before the operator is accepted.
struct OperatorSpec {
  enum class Variant { Scaling, Rotation, Affine, Projected };

  Variant variant = Variant::Scaling;
  std::size_t dim = 1;
  std::optional<double> kappa;  // claimed strictness constant

  // scaling
  double a = 0.0;

  // rotation
  double angle = 0.0;
  std::size_t plane_p = 0, plane_q = 1;

  // affine: row-major square matrix plus offset
  std::vector<std::vector<double>> matrix;
  std::vector<double> offset;

  // projected
  std::shared_ptr<OperatorSpec> base;
  std::vector<double> ball_center;
  double ball_radius = 0.0;

  static OperatorSpec scaling(double a, std::size_t dim);
  static OperatorSpec rotation(double angle, std::size_t dim, std::size_t p = 0,
                               std::size_t q = 1);
  static OperatorSpec affine(std::vector<std::vector<double>> matrix,
                             std::vector<double> offset,
                             std::optional<double> kappa = std::nullopt);
  static OperatorSpec projected(OperatorSpec base_spec, std::vector<double> center,
                                double radius);

  std::string id() const;
};

/// Construct the operator described by the spec, deriving the minimal valid
/// strictness constant and the known fixed point where they are available
/// analytically. Specs whose constant would reach 1 are rejected, as are
/// projected specs whose base map fails to keep the ball invariant.
Operator build_operator(const OperatorSpec& spec);

/// ||Tx-Ty||^2 - ||x-y||^2 - kappa * ||(x-Tx)-(y-Ty)||^2. Nonpositive (up
/// to tolerance) exactly when the strictness inequality holds at (x,y).
double strictness_defect(const Operator& T, double kappa, const Vec& x, const Vec& y);

/// ||x - Tx||.
double residual(const Operator& T, const Vec& x);

struct PairSample {
  Vec x, y;
};
using PairSampler = std::function<PairSample()>;

/// Uniform pair sampler over the operator's domain: its own ball when
/// ball-restricted, otherwise a ball of the given radius about the origin.
PairSampler make_domain_sampler(const Operator& T, std::uint64_t seed,
                                double full_space_radius = 10.0);

struct StrictnessReport {
  bool holds = false;
  double worst_defect = 0.0;  // raw defect at the most violating pair
  double worst_excess = 0.0;  // defect minus the tolerance there; <= 0 iff holds
  PairSample worst_pair;
};

/// Sampling check of the strictness inequality for the claimed constant.
/// Each pair is allowed defect up to tol * (1 + ||x||^2 + ||y||^2).
StrictnessReport check_strict(const Operator& T, double kappa, const PairSampler& sampler,
                              int n_samples, double tol = 1e-9);

/// Search for y with ||x-y|| <= b and ||y-Ty|| < delta: the known fixed
/// point if it lies within reach, otherwise the first qualifying iterate of
/// the averaged iteration started at x (constant step at the midpoint of
/// (kappa,1)), up to `budget` steps. Absence of a result within the budget
/// is not a disproof of existence.
std::optional<Vec> approx_fixed_point(const Operator& T, const Vec& x, double b,
                                      double delta, long long budget);

}  // namespace regula
