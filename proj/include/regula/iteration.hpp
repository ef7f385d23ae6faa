#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "regula/operators.hpp"
#include "regula/schedules.hpp"
#include "regula/vec.hpp"

namespace regula {

/// Orbit of the averaged iteration x_{n+1} = lambda_n x_n + (1-lambda_n) T x_n
/// together with residuals r_n = ||x_n - T x_n|| and the schedule weights.
/// Residuals, lambdas and weights always cover 0..N; points may be truncated
/// to a prefix for long horizons (residuals-only mode).
struct IterationTrace {
  std::string operator_id;
  std::string schedule_id;
  long long horizon = 0;  // N

  std::vector<Vec> points;        // x_0 .. x_{min(N, cap-1)}
  std::vector<double> residuals;  // length N+1
  std::vector<double> lambdas;    // length N+1
  std::vector<double> weights;    // length N+1

  bool has_full_points() const {
    return static_cast<long long>(points.size()) == horizon + 1;
  }
  /// Number of leading iterates with stored coordinates.
  long long stored_points() const { return static_cast<long long>(points.size()); }
};

inline constexpr long long kStoreAllPoints = -1;

/// One averaged step lambda*x + (1-lambda)*Tx; lambda must lie in
/// (T.kappa(), 1).
Vec mann_step(const Vec& x, double lambda, const Operator& T);

/// Run the iteration for N steps from x0. T is evaluated once per step and
/// the value is reused for both the residual and the step, so stored
/// residuals match the orbit actually taken. `points_cap` bounds how many
/// iterates keep their coordinates (kStoreAllPoints keeps every one).
IterationTrace run_mann(const Operator& T, const StepSchedule& s, const Vec& x0,
                        long long N, long long points_cap = kStoreAllPoints);

/// Least n <= N with r_n < eps, if any.
std::optional<long long> empirical_index(const IterationTrace& trace, double eps);

struct MonotoneReport {
  bool ok = false;
  std::optional<long long> first_violation;  // index n with r_{n+1} > r_n + tol
};

MonotoneReport check_monotone_residuals(const IterationTrace& trace, double tol);

/// sum_{n=0}^{m} weight_n * r_n^2, accumulated left-to-right.
double delta_sum(const IterationTrace& trace, long long m);

/// CSV export: header `n,residual,weight,delta_partial` plus coordinate
/// columns `x_0..x_{d-1}` when requested (requires full point storage).
/// All numbers are written round-trip exact.
void write_trace_csv(std::ostream& os, const IterationTrace& trace, bool include_points);

}  // namespace regula
