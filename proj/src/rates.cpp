#include "regula/rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "regula/numeric.hpp"
#include "regula/rng.hpp"

namespace regula {

namespace {

void require_positive(double eps, double b) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (!(b > 0.0)) throw std::invalid_argument("b must be positive");
}

CheckOutcome named(const char* name, bool ok, double worst, std::string witness) {
  CheckOutcome c;
  c.name = name;
  c.ok = ok;
  c.worst_defect = worst;
  c.witness = std::move(witness);
  return c;
}

}  // namespace

long long phi(double eps, double b, const DivergenceRate& rate) {
  require_positive(eps, b);
  return rate.theta(ceil_guarded((b * b) / (eps * eps)));
}

long long phi_krasnoselskii(double eps, double b, double lambda, double kappa) {
  require_positive(eps, b);
  if (!(kappa >= 0.0 && kappa < 1.0 && lambda > kappa && lambda < 1.0)) {
    throw std::invalid_argument("need 0 <= kappa < lambda < 1");
  }
  const long long coeff = ceil_guarded(1.0 / ((lambda - kappa) * (1.0 - lambda)));
  const long long steps = ceil_guarded((b * b) / (eps * eps));
  if (coeff > 0 && steps > 0 && coeff > 9'000'000'000'000'000'000LL / steps) {
    throw std::out_of_range("bound overflows the supported range");
  }
  return coeff * steps;
}

QuadraticScalingReport quadratic_scaling_check(double b, double lambda, double kappa,
                                               double eps) {
  require_positive(eps, b);
  const double ratio = (b * b) / (eps * eps);
  const double snapped = std::nearbyint(ratio);
  if (!(snapped >= 1.0) || std::fabs(ratio - snapped) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument("b^2/eps^2 must be a positive integer");
  }
  QuadraticScalingReport rep;
  rep.phi_eps = phi_krasnoselskii(eps, b, lambda, kappa);
  rep.phi_half_eps = phi_krasnoselskii(eps / 2.0, b, lambda, kappa);
  rep.ok = rep.phi_half_eps == 4 * rep.phi_eps;
  return rep;
}

CertificationReport certify(const Operator& T, const StepSchedule& s,
                            const DivergenceRate& rate, const Vec& x0, double b,
                            double eps, const CertifyOptions& opt) {
  require_positive(eps, b);
  if (opt.horizon_extra < 0) throw std::invalid_argument("horizon_extra must be nonnegative");

  CertificationReport rep;
  rep.eps = eps;
  rep.b = b;

  SeededRng rng(opt.seed);

  // hypothesis: the starting residual fits in the neighborhood radius
  const double r0 = residual(T, x0);
  {
    const bool ok = r0 <= b * (1.0 + 1e-12) + 1e-15;
    rep.checks.push_back(named("hypothesis_initial_residual", ok, r0 - b,
                               "r0=" + fmt_g17(r0) + " b=" + fmt_g17(b)));
    rep.hypotheses_ok = rep.hypotheses_ok && ok;
  }

  // hypothesis: the rate genuinely witnesses divergence up to the level used
  const long long level = ceil_guarded((b * b) / (eps * eps));
  {
    const auto tv = verify_theta(s, rate, level);
    rep.checks.push_back(named("hypothesis_divergence_rate", tv.ok, tv.ok ? 0.0 : 1.0,
                               tv.first_failure
                                   ? "first failure at n=" + std::to_string(*tv.first_failure)
                                   : "verified to n=" + std::to_string(level)));
    rep.hypotheses_ok = rep.hypotheses_ok && tv.ok;
  }

  // hypothesis: approximate fixed points reachable at the probe ladder
  // (finitely many probes; a failure downgrades, it does not abort)
  std::optional<Vec> probe_point;
  {
    bool ok = true;
    std::string failed;
    for (double delta : opt.afp_deltas) {
      auto y = approx_fixed_point(T, x0, b, delta, opt.afp_budget);
      if (y) {
        probe_point = std::move(y);
      } else {
        ok = false;
        if (!failed.empty()) failed += ",";
        failed += fmt_g17(delta);
      }
    }
    rep.checks.push_back(named("hypothesis_approx_fixed_points", ok, ok ? 0.0 : 1.0,
                               ok ? "probes succeeded" : "failed at delta=" + failed));
    rep.hypotheses_ok = rep.hypotheses_ok && ok;
  }

  // the claimed strictness constant
  {
    const auto sc =
        check_strict(T, T.kappa(), make_domain_sampler(T, rng.next_u64()), opt.check_samples);
    rep.checks.push_back(named("strictness", sc.holds, sc.worst_defect,
                               "x=" + sc.worst_pair.x.str() + " y=" + sc.worst_pair.y.str()));
    rep.claim_ok = sc.holds;
  }

  rep.phi = phi(eps, b, rate);
  const long long N = rep.phi + opt.horizon_extra;
  const long long cap =
      N <= opt.full_points_limit ? kStoreAllPoints : std::min(opt.points_prefix, N + 1);
  const IterationTrace trace = run_mann(T, s, x0, N, cap);

  // the certified bound, in both forms
  {
    const bool at_phi = trace.residuals[static_cast<std::size_t>(rep.phi)] < eps;
    bool whole_tail = true;
    for (long long n = rep.phi; n <= N; ++n) {
      if (!(trace.residuals[static_cast<std::size_t>(n)] < eps)) {
        whole_tail = false;
        break;
      }
    }
    rep.bound_holds = whole_tail;
    rep.checks.push_back(named("bound_forms_agree", at_phi == whole_tail, 0.0,
                               at_phi == whole_tail ? "consistent" : "monotonicity violated"));
  }

  rep.empirical_idx = empirical_index(trace, eps);
  if (rep.empirical_idx && rep.phi > 0) {
    rep.tightness = static_cast<double>(*rep.empirical_idx) / static_cast<double>(rep.phi);
  }
  for (long long n = 0; n <= N && rep.near_boundary.size() < 32; ++n) {
    if (std::fabs(trace.residuals[static_cast<std::size_t>(n)] - eps) < 1e-12) {
      rep.near_boundary.push_back(n);
    }
  }

  rep.checks.push_back(check_residual_monotone(trace));
  rep.checks.push_back(check_delta_bound(trace, rep.phi, b));

  const std::optional<Vec>& y_ref =
      T.known_fixed_point() ? T.known_fixed_point() : probe_point;

  if (T.known_fixed_point()) {
    rep.checks.push_back(check_fixed_point_descent(T, trace, *T.known_fixed_point()));
  }

  if (y_ref) {
    const double b_growth = std::max(b, std::max(r0, dist(x0, *y_ref)));
    rep.checks.push_back(check_growth_bounds(T, trace, *y_ref, b_growth));

    if (residual(T, *y_ref) < 0.5) {
      const long long last = std::min(trace.horizon, trace.stored_points() - 1);
      bool ok = true;
      double worst = 0.0;
      long long worst_n = -1;
      for (long long n = 0; n < last; ++n) {
        const double d = step_descent_growth_defect(T, trace, *y_ref, n, b_growth, 0.5);
        if (worst_n < 0 || d > worst) {
          worst = d;
          worst_n = n;
        }
      }
      ok = worst_n < 0 || worst <= zero_tol(1.0 + b_growth * b_growth, 1e-9);
      rep.checks.push_back(named("step_descent_growth", ok, worst_n < 0 ? 0.0 : worst,
                                 worst_n < 0 ? "empty" : "n=" + std::to_string(worst_n)));
    }
  }

  // sampled checks against arbitrary reference points
  {
    const Vec center = T.domain() ? T.domain()->center : Vec::zero(T.dim());
    const double radius = T.domain() ? T.domain()->radius : 10.0;
    const long long last = std::min(trace.horizon, trace.stored_points() - 1);
    bool any = false;
    double worst_excess = 0.0, worst_defect = 0.0;
    std::string witness = "no samples";
    for (int i = 0; i < opt.check_samples && last > 0; ++i) {
      const Vec y = rng.in_ball(center, radius);
      const long long n = std::min(
          static_cast<long long>(rng.uniform01() * static_cast<double>(last)), last - 1);
      const double d = step_descent_defect(T, trace, y, n);
      const double scale = 1.0 + inner(trace.points[static_cast<std::size_t>(n)] - y,
                                       trace.points[static_cast<std::size_t>(n)] - y) +
                           inner(y, y);
      const double ex = d - zero_tol(scale, 1e-9);
      if (!any || ex > worst_excess) {
        any = true;
        worst_excess = ex;
        worst_defect = d;
        witness = "n=" + std::to_string(n) + " y=" + y.str();
      }
    }
    rep.checks.push_back(
        named("step_descent", !any || worst_excess <= 0.0, worst_defect, witness));
  }

  return rep;
}

}  // namespace regula
