#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "regula/iteration.hpp"
#include "regula/operators.hpp"
#include "regula/schedules.hpp"

namespace regula {

/// Result of one named inequality check. Defects are signed (LHS - RHS) so
/// tightness stays observable; ok means the worst defect stayed within the
/// check's tolerance.
struct CheckOutcome {
  std::string name;
  bool ok = false;
  double worst_defect = 0.0;
  std::string witness;
};

/// Defect of ||Tz-y||^2 <= ||z-y||^2 + kappa ||z-Tz||^2 + (kappa+1) ||y-Ty||^2
///                        + 2 (||z-y|| + kappa ||y-Ty||) ||y-Ty||.
double image_point_defect(const Operator& T, double kappa, const Vec& z, const Vec& y);

/// Defect of the per-step descent with an arbitrary reference point y:
/// ||x_{n+1}-y||^2 <= ||x_n-y||^2 - a_n r_n^2 + 2||y-Ty||(||x_n-y|| + 2||y-Ty||).
double step_descent_defect(const Operator& T, const IterationTrace& trace, const Vec& y,
                           long long n);

/// Growth-bounded variant of the step descent: the error term is
/// 2((n+1)b + 2c)||y-Ty|| with b >= max{r_0, ||x_0-y||} and c >= ||y-Ty||.
double step_descent_growth_defect(const Operator& T, const IterationTrace& trace,
                                  const Vec& y, long long n, double b, double c);

/// ||x_{n+1}-p||^2 <= ||x_n-p||^2 - a_n r_n^2 for a genuine fixed point p,
/// over every step with stored coordinates. Rejects p that is not fixed.
CheckOutcome check_fixed_point_descent(const Operator& T, const IterationTrace& trace,
                                       const Vec& p);

/// ||x_n-y|| <= (n+1) b and ||T x_n - y|| <= (n+2) b over stored points;
/// requires b >= max{r_0, ||x_0-y||}.
CheckOutcome check_growth_bounds(const Operator& T, const IterationTrace& trace,
                                 const Vec& y, double b);

/// Weighted residual sum bound: sum_{n<=m} a_n r_n^2 <= b^2 + 1e-8 (1+b^2).
CheckOutcome check_delta_bound(const IterationTrace& trace, long long m, double b);

/// Residual monotonicity as a named outcome.
CheckOutcome check_residual_monotone(const IterationTrace& trace, double tol = 1e-10);

struct SuiteOptions {
  int n_samples = 10000;
  std::uint64_t seed = 0x5eedULL;
  long long trace_len = 64;
  std::optional<double> b;  // defaults to max{r_0, distance to the reference point}
  long long afp_budget = 200000;
};

/// Full verification battery for one operator/schedule pair: space
/// identities, the strictness inequality, every descent and growth
/// inequality along a generated trace, and the weighted-sum bound.
/// Deterministic for a fixed seed.
std::vector<CheckOutcome> run_full_suite(const Operator& T, const StepSchedule& s,
                                         const Vec& x0, const SuiteOptions& opt);

}  // namespace regula
