#include "regula/iteration.hpp"

#include <cmath>
#include <stdexcept>

#include "regula/numeric.hpp"

namespace regula {

Vec mann_step(const Vec& x, double lambda, const Operator& T) {
  if (!(lambda > T.kappa() && lambda < 1.0)) {
    throw std::domain_error("step size must satisfy kappa < lambda < 1");
  }
  return convex_combination(lambda, x, T(x));
}

IterationTrace run_mann(const Operator& T, const StepSchedule& s, const Vec& x0,
                        long long N, long long points_cap) {
  if (N < 0) throw std::invalid_argument("horizon must be nonnegative");
  if (std::fabs(s.kappa() - T.kappa()) > 1e-12) {
    throw std::invalid_argument("schedule strictness context does not match the operator");
  }
  if (!T.contains(x0)) {
    throw std::invalid_argument("starting point lies outside the operator domain");
  }

  IterationTrace tr;
  tr.operator_id = T.id();
  tr.schedule_id = s.id();
  tr.horizon = N;
  const long long keep = points_cap == kStoreAllPoints ? N + 1 : std::min(points_cap, N + 1);
  tr.points.reserve(static_cast<std::size_t>(std::max<long long>(keep, 0)));
  tr.residuals.reserve(static_cast<std::size_t>(N + 1));
  tr.lambdas.reserve(static_cast<std::size_t>(N + 1));
  tr.weights.reserve(static_cast<std::size_t>(N + 1));

  Vec x = x0;
  for (long long n = 0; n <= N; ++n) {
    const Vec tx = T(x);
    const double lam = s.lambda_at(n);
    tr.lambdas.push_back(lam);
    tr.weights.push_back(s.weight_at(n));
    tr.residuals.push_back(dist(x, tx));
    if (static_cast<long long>(tr.points.size()) < keep) tr.points.push_back(x);
    if (n < N) x = convex_combination(lam, x, tx);
  }
  return tr;
}

std::optional<long long> empirical_index(const IterationTrace& trace, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  for (long long n = 0; n <= trace.horizon; ++n) {
    if (trace.residuals[static_cast<std::size_t>(n)] < eps) return n;
  }
  return std::nullopt;
}

MonotoneReport check_monotone_residuals(const IterationTrace& trace, double tol) {
  for (long long n = 0; n < trace.horizon; ++n) {
    const double r0 = trace.residuals[static_cast<std::size_t>(n)];
    const double r1 = trace.residuals[static_cast<std::size_t>(n + 1)];
    if (r1 > r0 + tol) return {false, n};
  }
  return {true, std::nullopt};
}

double delta_sum(const IterationTrace& trace, long long m) {
  if (m < 0 || m > trace.horizon) {
    throw std::out_of_range("delta_sum index exceeds the trace horizon");
  }
  double s = 0.0;
  for (long long n = 0; n <= m; ++n) {
    const double r = trace.residuals[static_cast<std::size_t>(n)];
    s += trace.weights[static_cast<std::size_t>(n)] * r * r;
  }
  return s;
}

void write_trace_csv(std::ostream& os, const IterationTrace& trace, bool include_points) {
  if (include_points && !trace.has_full_points()) {
    throw std::invalid_argument("coordinate export requires full point storage");
  }
  os << "n,residual,weight,delta_partial";
  if (include_points) {
    const std::size_t d = trace.points.empty() ? 0 : trace.points[0].dim();
    for (std::size_t i = 0; i < d; ++i) os << ",x_" << i;
  }
  os << "\n";
  double delta = 0.0;
  for (long long n = 0; n <= trace.horizon; ++n) {
    const double r = trace.residuals[static_cast<std::size_t>(n)];
    const double w = trace.weights[static_cast<std::size_t>(n)];
    delta += w * r * r;
    os << n << "," << fmt_g17(r) << "," << fmt_g17(w) << "," << fmt_g17(delta);
    if (include_points) {
      const Vec& x = trace.points[static_cast<std::size_t>(n)];
      for (std::size_t i = 0; i < x.dim(); ++i) os << "," << fmt_g17(x[i]);
    }
    os << "\n";
  }
}

}  // namespace regula
