#include "regula/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "regula/numeric.hpp"
#include "regula/rng.hpp"

namespace regula {

namespace {

struct Defect {
  double value = 0.0;
  double scale = 1.0;  // 1 + squared magnitudes entering the inequality
};

// The cross term is grouped through the averaged map kappa*I + (1-kappa)*T,
// which is nonexpansive exactly when T satisfies the strictness inequality;
// that yields the (||z-y|| + kappa ||y-Ty||) ||y-Ty|| error term.
Defect image_point(const Operator& T, double kappa, const Vec& z, const Vec& y) {
  const Vec tz = T(z);
  const Vec ty = T(y);
  const double lhs = inner(tz - y, tz - y);
  const double dzy2 = inner(z - y, z - y);
  const double rz2 = inner(z - tz, z - tz);
  const double ry2 = inner(y - ty, y - ty);
  const double yres = std::sqrt(ry2);
  const double cross = (std::sqrt(dzy2) + kappa * yres) * yres;
  const double rhs = dzy2 + kappa * rz2 + (kappa + 1.0) * ry2 + 2.0 * cross;
  return {lhs - rhs, 1.0 + lhs + dzy2 + rz2 + ry2 + cross};
}

Defect step_descent(const Operator& T, const IterationTrace& tr, const Vec& y,
                    long long n) {
  const Vec& xn = tr.points[static_cast<std::size_t>(n)];
  const Vec& xn1 = tr.points[static_cast<std::size_t>(n + 1)];
  const Vec ty = T(y);
  const double yres = dist(y, ty);
  const double dn = dist(xn, y);
  const double r = tr.residuals[static_cast<std::size_t>(n)];
  const double lhs = inner(xn1 - y, xn1 - y);
  const double rhs = dn * dn - tr.weights[static_cast<std::size_t>(n)] * r * r +
                     2.0 * yres * (dn + 2.0 * yres);
  return {lhs - rhs, 1.0 + lhs + dn * dn + r * r + yres * yres};
}

Defect step_descent_growth(const Operator& T, const IterationTrace& tr, const Vec& y,
                           long long n, double b, double c) {
  const Vec& xn = tr.points[static_cast<std::size_t>(n)];
  const Vec& xn1 = tr.points[static_cast<std::size_t>(n + 1)];
  const Vec ty = T(y);
  const double yres = dist(y, ty);
  const double dn = dist(xn, y);
  const double r = tr.residuals[static_cast<std::size_t>(n)];
  const double lhs = inner(xn1 - y, xn1 - y);
  const double rhs = dn * dn - tr.weights[static_cast<std::size_t>(n)] * r * r +
                     2.0 * (static_cast<double>(n + 1) * b + 2.0 * c) * yres;
  return {lhs - rhs, 1.0 + lhs + dn * dn + r * r +
                         (static_cast<double>(n + 1) * b + 2.0 * c) * yres};
}

void require_step_in_points(const IterationTrace& tr, long long n) {
  if (n < 0 || n >= tr.horizon || n + 1 >= tr.stored_points()) {
    throw std::out_of_range("step index outside the stored range of the trace");
  }
}

struct Worst {
  bool any = false;
  double excess = 0.0;
  double defect = 0.0;
  std::string witness;

  void offer(double ex, double d, std::string w) {
    if (!any || ex > excess) {
      any = true;
      excess = ex;
      defect = d;
      witness = std::move(w);
    }
  }

  CheckOutcome outcome(std::string name) const {
    CheckOutcome out;
    out.name = std::move(name);
    out.ok = !any || excess <= 0.0;
    out.worst_defect = any ? defect : 0.0;
    out.witness = any ? witness : "no samples";
    return out;
  }
};

}  // namespace

double image_point_defect(const Operator& T, double kappa, const Vec& z, const Vec& y) {
  return image_point(T, kappa, z, y).value;
}

double step_descent_defect(const Operator& T, const IterationTrace& trace, const Vec& y,
                           long long n) {
  require_step_in_points(trace, n);
  return step_descent(T, trace, y, n).value;
}

double step_descent_growth_defect(const Operator& T, const IterationTrace& trace,
                                  const Vec& y, long long n, double b, double c) {
  require_step_in_points(trace, n);
  if (trace.stored_points() < 1) throw std::invalid_argument("trace has no stored points");
  const double r0 = trace.residuals[0];
  const double d0 = dist(trace.points[0], y);
  if (b < std::max(r0, d0) * (1.0 - 1e-12)) {
    throw std::invalid_argument("b is below max{r_0, ||x_0 - y||}");
  }
  if (c < residual(T, y) * (1.0 - 1e-12)) {
    throw std::invalid_argument("c is below ||y - Ty||");
  }
  return step_descent_growth(T, trace, y, n, b, c).value;
}

CheckOutcome check_fixed_point_descent(const Operator& T, const IterationTrace& trace,
                                       const Vec& p) {
  if (residual(T, p) > 1e-12 * (1.0 + norm(p))) {
    throw std::invalid_argument("reference point is not a fixed point");
  }
  Worst worst;
  const long long last = std::min(trace.horizon, trace.stored_points() - 1);
  for (long long n = 0; n < last; ++n) {
    const Vec& xn = trace.points[static_cast<std::size_t>(n)];
    const Vec& xn1 = trace.points[static_cast<std::size_t>(n + 1)];
    const double dn2 = inner(xn - p, xn - p);
    const double dn12 = inner(xn1 - p, xn1 - p);
    const double r = trace.residuals[static_cast<std::size_t>(n)];
    const double defect = dn12 - dn2 + trace.weights[static_cast<std::size_t>(n)] * r * r;
    const double scale = 1.0 + dn2 + dn12 + r * r;
    worst.offer(defect - zero_tol(scale, 1e-9), defect, "n=" + std::to_string(n));
  }
  return worst.outcome("fixed_point_descent");
}

CheckOutcome check_growth_bounds(const Operator& T, const IterationTrace& trace,
                                 const Vec& y, double b) {
  if (trace.stored_points() < 1) throw std::invalid_argument("trace has no stored points");
  const double r0 = trace.residuals[0];
  const double d0 = dist(trace.points[0], y);
  if (b < std::max(r0, d0) * (1.0 - 1e-12)) {
    throw std::invalid_argument("b is below max{r_0, ||x_0 - y||}");
  }
  Worst worst;
  for (long long n = 0; n < trace.stored_points(); ++n) {
    const Vec& xn = trace.points[static_cast<std::size_t>(n)];
    const double dn = dist(xn, y);
    const double dtn = dist(T(xn), y);
    const double bound1 = static_cast<double>(n + 1) * b;
    const double bound2 = static_cast<double>(n + 2) * b;
    const double tol = zero_tol(1.0 + bound2 + dn, 1e-9);
    worst.offer(dn - bound1 - tol, dn - bound1, "n=" + std::to_string(n) + " (orbit)");
    worst.offer(dtn - bound2 - tol, dtn - bound2, "n=" + std::to_string(n) + " (image)");
  }
  return worst.outcome("orbit_growth");
}

CheckOutcome check_delta_bound(const IterationTrace& trace, long long m, double b) {
  const double delta = delta_sum(trace, m);
  const double limit = b * b + 1e-8 * (1.0 + b * b);
  CheckOutcome out;
  out.name = "delta_sum_bound";
  out.ok = delta <= limit;
  out.worst_defect = delta - b * b;
  out.witness = "m=" + std::to_string(m) + " delta=" + fmt_g17(delta);
  return out;
}

CheckOutcome check_residual_monotone(const IterationTrace& trace, double tol) {
  const MonotoneReport rep = check_monotone_residuals(trace, tol);
  double worst = 0.0;
  long long worst_n = -1;
  for (long long n = 0; n < trace.horizon; ++n) {
    const double rise = trace.residuals[static_cast<std::size_t>(n + 1)] -
                        trace.residuals[static_cast<std::size_t>(n)];
    if (worst_n < 0 || rise > worst) {
      worst = rise;
      worst_n = n;
    }
  }
  CheckOutcome out;
  out.name = "residual_monotone";
  out.ok = rep.ok;
  out.worst_defect = worst_n < 0 ? 0.0 : worst;
  out.witness = rep.first_violation ? "n=" + std::to_string(*rep.first_violation)
                                    : "none";
  return out;
}

std::vector<CheckOutcome> run_full_suite(const Operator& T, const StepSchedule& s,
                                         const Vec& x0, const SuiteOptions& opt) {
  if (opt.n_samples < 1) throw std::invalid_argument("need at least one sample");
  if (opt.trace_len < 1) throw std::invalid_argument("trace length must be positive");
  std::vector<CheckOutcome> out;
  SeededRng rng(opt.seed);
  const Vec center = T.domain() ? T.domain()->center : Vec::zero(T.dim());
  const double radius = T.domain() ? T.domain()->radius : 10.0;
  auto draw = [&] { return rng.in_ball(center, radius); };

  // space identities
  {
    Worst sum_worst, convex_worst;
    for (int i = 0; i < opt.n_samples; ++i) {
      const Vec x = draw();
      const Vec y = draw();
      const double t = rng.uniform01();
      const double scale = 1.0 + inner(x, x) + inner(y, y);
      const double ds = std::fabs(identity_defect_sum(x, y));
      const double dc = std::fabs(identity_defect_convex(t, x, y));
      sum_worst.offer(ds - zero_tol(scale), ds, "x=" + x.str() + " y=" + y.str());
      convex_worst.offer(dc - zero_tol(scale), dc, "t=" + fmt_g17(t));
    }
    out.push_back(sum_worst.outcome("inner_expansion_identity"));
    out.push_back(convex_worst.outcome("convex_identity"));
  }

  // strictness inequality for the claimed constant
  {
    const auto rep =
        check_strict(T, T.kappa(), make_domain_sampler(T, rng.next_u64()), opt.n_samples);
    CheckOutcome c;
    c.name = "strictness";
    c.ok = rep.holds;
    c.worst_defect = rep.worst_defect;
    c.witness = "x=" + rep.worst_pair.x.str() + " y=" + rep.worst_pair.y.str();
    out.push_back(c);
  }

  if (T.kappa() == 0.0) {
    Worst worst;
    for (int i = 0; i < opt.n_samples; ++i) {
      const Vec x = draw();
      const Vec y = draw();
      const double gap = dist(T(x), T(y)) - dist(x, y);
      const double scale = 1.0 + inner(x, x) + inner(y, y);
      worst.offer(gap - zero_tol(scale), gap, "x=" + x.str() + " y=" + y.str());
    }
    out.push_back(worst.outcome("nonexpansive_specialization"));
  }

  {
    Worst worst;
    for (int i = 0; i < opt.n_samples; ++i) {
      const Vec z = draw();
      const Vec y = draw();
      const Defect d = image_point(T, T.kappa(), z, y);
      worst.offer(d.value - zero_tol(d.scale, 1e-9), d.value,
                  "z=" + z.str() + " y=" + y.str());
    }
    out.push_back(worst.outcome("image_point_bound"));
  }

  // trace-level inequalities
  const IterationTrace trace = run_mann(T, s, x0, opt.trace_len);
  const double r0 = trace.residuals[0];

  {
    Worst worst;
    for (int i = 0; i < opt.n_samples; ++i) {
      const Vec y = draw();
      const long long n =
          static_cast<long long>(rng.uniform01() * static_cast<double>(trace.horizon));
      const long long nn = std::min(n, trace.horizon - 1);
      const Defect d = step_descent(T, trace, y, nn);
      worst.offer(d.value - zero_tol(d.scale, 1e-9), d.value,
                  "n=" + std::to_string(nn) + " y=" + y.str());
    }
    out.push_back(worst.outcome("step_descent"));
  }

  if (T.known_fixed_point()) {
    out.push_back(check_fixed_point_descent(T, trace, *T.known_fixed_point()));
  }

  out.push_back(check_residual_monotone(trace));

  // reference point for the growth and weighted-sum checks: the known fixed
  // point when present, else an approximate one found by probing
  std::optional<Vec> y_ref = T.known_fixed_point();
  if (!y_ref) {
    const double reach = std::max(opt.b.value_or(0.0), std::max(r0, 1.0)) * 4.0;
    y_ref = approx_fixed_point(T, x0, reach, 1e-6, opt.afp_budget);
  }
  {
    CheckOutcome c;
    c.name = "approx_fixed_point_available";
    c.ok = y_ref.has_value();
    c.worst_defect = 0.0;
    c.witness = y_ref ? "y=" + y_ref->str() : "no approximate fixed point within budget";
    out.push_back(c);
  }

  const double d_ref = y_ref ? dist(x0, *y_ref) : 0.0;
  const double b_eff = std::max(opt.b.value_or(0.0), std::max(r0, d_ref));

  if (y_ref) {
    out.push_back(check_growth_bounds(T, trace, *y_ref, b_eff));

    if (residual(T, *y_ref) < 0.5) {
      Worst worst;
      for (long long n = 0; n < trace.horizon; ++n) {
        const Defect d = step_descent_growth(T, trace, *y_ref, n, b_eff, 0.5);
        worst.offer(d.value - zero_tol(d.scale, 1e-9), d.value, "n=" + std::to_string(n));
      }
      out.push_back(worst.outcome("step_descent_growth_c_half"));
    }
  }

  {
    // same inequality with the reference residual itself as c and a per-y b
    Worst worst;
    const int samples = std::max(1, opt.n_samples / 10);
    for (int i = 0; i < samples; ++i) {
      const Vec y = draw();
      const double c = residual(T, y);
      const double by = std::max(r0, dist(trace.points[0], y));
      const long long n =
          std::min(static_cast<long long>(rng.uniform01() * static_cast<double>(trace.horizon)),
                   trace.horizon - 1);
      const Defect d = step_descent_growth(T, trace, y, n, by, c);
      worst.offer(d.value - zero_tol(d.scale, 1e-9), d.value,
                  "n=" + std::to_string(n) + " y=" + y.str());
    }
    out.push_back(worst.outcome("step_descent_growth_c_residual"));
  }

  out.push_back(check_delta_bound(trace, trace.horizon, b_eff));

  return out;
}

}  // namespace regula
