#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "regula/operators.hpp"
#include "regula/schedules.hpp"
#include "regula/verify.hpp"

namespace regula {

/// Step index from which every residual is guaranteed below eps:
/// theta(ceil(b^2/eps^2)), with the guarded ceiling of numeric.hpp. The
/// bound depends only on eps, b and the rate — not on the operator, the
/// dimension or the starting point.
long long phi(double eps, double b, const DivergenceRate& rate);

/// Constant-step specialization
/// ceil(1/((lambda-kappa)(1-lambda))) * ceil(b^2/eps^2); agrees exactly
/// with phi(eps, b, theta_constant(lambda, kappa)).
long long phi_krasnoselskii(double eps, double b, double lambda, double kappa);

struct QuadraticScalingReport {
  bool ok = false;
  long long phi_eps = 0;
  long long phi_half_eps = 0;
};

/// For b^2/eps^2 a positive integer (so both ceilings are exact), halving
/// eps must quadruple the bound exactly.
QuadraticScalingReport quadratic_scaling_check(double b, double lambda, double kappa,
                                               double eps);

struct CertifyOptions {
  long long horizon_extra = 0;
  int check_samples = 256;             // sampled inequality checks inside certification
  std::uint64_t seed = 0x5eedULL;
  long long full_points_limit = 100000;  // keep the whole orbit up to this horizon
  long long points_prefix = 10000;       // stored prefix beyond it
  std::vector<double> afp_deltas = {1e-2, 1e-4, 1e-6};
  long long afp_budget = 200000;
};

struct CertificationReport {
  long long phi = 0;
  double eps = 0.0;
  double b = 0.0;
  std::optional<long long> empirical_idx;  // least n with r_n < eps, if reached
  bool bound_holds = false;                // r_n < eps for every n in [phi, N]
  std::optional<double> tightness;         // empirical_idx / phi
  std::vector<CheckOutcome> checks;
  std::vector<long long> near_boundary;    // indices with |r_n - eps| < 1e-12 (capped)
  bool hypotheses_ok = true;  // initial residual, divergence rate, fixed-point probes
  bool claim_ok = true;       // strictness inequality held for the claimed constant
};

/// End-to-end certification: verify the hypotheses (||x0-Tx0|| <= b, the
/// rate witnesses divergence up to ceil(b^2/eps^2), approximate fixed
/// points reachable at the probe ladder), run the iteration to
/// N = phi + horizon_extra, evaluate the bound in both forms (r_phi < eps
/// and all of [phi,N]), and attach every inequality check to the report.
/// Hypothesis violations are reported as distinct outcomes, never silently.
CertificationReport certify(const Operator& T, const StepSchedule& s,
                            const DivergenceRate& rate, const Vec& x0, double b,
                            double eps, const CertifyOptions& opt = {});

}  // namespace regula
