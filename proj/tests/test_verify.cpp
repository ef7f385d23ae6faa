#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "regula/catalog.hpp"
#include "regula/numeric.hpp"
#include "regula/verify.hpp"

using namespace regula;

namespace {

const double kHalfPi = std::numbers::pi_v<double> / 2.0;

const CheckOutcome* find_check(const std::vector<CheckOutcome>& checks,
                               const std::string& name) {
  const auto it = std::find_if(checks.begin(), checks.end(),
                               [&](const CheckOutcome& c) { return c.name == name; });
  return it == checks.end() ? nullptr : &*it;
}

}  // namespace

TEST_CASE("image point bound") {
  const Operator sc = build_operator(OperatorSpec::scaling(-2.0, 1));
  // direct evaluation: LHS 6.25, RHS 0.25 + 3 + 3 + 3
  CHECK(image_point_defect(sc, sc.kappa(), Vec{1.0}, Vec{0.5}) ==
        doctest::Approx(-3.0).epsilon(1e-12));
  // a fixed reference point removes every error term
  CHECK(image_point_defect(sc, sc.kappa(), Vec{1.0}, Vec{0.0}) <= 1e-12);
  // z = y collapses to a strictly negative multiple of the residual
  CHECK(image_point_defect(sc, sc.kappa(), Vec{0.7}, Vec{0.7}) <= 0.0);
}

TEST_CASE("step descent with an arbitrary reference point") {
  const Operator sc = build_operator(OperatorSpec::scaling(-2.0, 1));
  const StepSchedule s = StepSchedule::constant(2.0 / 3.0, sc.kappa());
  const IterationTrace tr = run_mann(sc, s, Vec{1.0}, 3);

  // LHS 0.01 versus 0.81 - 1 + 0.6 * (0.9 + 0.6)
  CHECK(step_descent_defect(sc, tr, Vec{0.1}, 0) == doctest::Approx(-0.7).epsilon(1e-12));

  // with the fixed point as reference it matches the descent inequality
  const Vec p = *sc.known_fixed_point();
  const double dn = dist(tr.points[0], p);
  const double dn1 = dist(tr.points[1], p);
  const double direct = dn1 * dn1 - dn * dn + tr.weights[0] * tr.residuals[0] * tr.residuals[0];
  CHECK(std::fabs(step_descent_defect(sc, tr, p, 0) - direct) <= 1e-12);

  CHECK_THROWS_AS(step_descent_defect(sc, tr, Vec{0.1}, 3), std::out_of_range);
}

TEST_CASE("growth-bounded step descent") {
  const Operator sc = build_operator(OperatorSpec::scaling(-2.0, 1));
  const StepSchedule s = StepSchedule::constant(2.0 / 3.0, sc.kappa());
  const IterationTrace tr = run_mann(sc, s, Vec{1.0}, 3);
  const Vec p = *sc.known_fixed_point();

  // c = 1/2 is admissible for a (near-)fixed reference point
  CHECK(step_descent_growth_defect(sc, tr, p, 0, 3.0, 0.5) <= 1e-12);
  // c may also be the reference residual itself
  const Vec y{0.4};
  const double c = residual(sc, y);
  CHECK(step_descent_growth_defect(sc, tr, y, 0, 3.0, c) <= 0.0);

  CHECK_THROWS_AS(step_descent_growth_defect(sc, tr, y, 0, 0.1, c), std::invalid_argument);
  CHECK_THROWS_AS(step_descent_growth_defect(sc, tr, y, 0, 3.0, c / 2.0),
                  std::invalid_argument);
}

TEST_CASE("fixed point descent holds with equality on the anchors") {
  // scaling: 0 <= 1 - (1/9) * 9 at the first step
  const Operator sc = build_operator(OperatorSpec::scaling(-2.0, 1));
  const StepSchedule ss = StepSchedule::constant(2.0 / 3.0, sc.kappa());
  const IterationTrace str = run_mann(sc, ss, Vec{1.0}, 5);
  const auto sc_out = check_fixed_point_descent(sc, str, *sc.known_fixed_point());
  CHECK(sc_out.ok);
  CHECK(std::fabs(sc_out.worst_defect) <= 1e-10);

  // rotation with lambda = 1/2: both sides equal ||x_n||^2 / 2 at every step
  const Operator rot = build_operator(OperatorSpec::rotation(kHalfPi, 2));
  const StepSchedule rs = StepSchedule::constant(0.5, 0.0);
  const IterationTrace rtr = run_mann(rot, rs, Vec{1.0, 0.0}, 60);
  const auto rot_out = check_fixed_point_descent(rot, rtr, *rot.known_fixed_point());
  CHECK(rot_out.ok);
  CHECK(std::fabs(rot_out.worst_defect) <= 1e-10);

  // a non-fixed reference point is rejected
  CHECK_THROWS_AS(check_fixed_point_descent(sc, str, Vec{1.0}), std::invalid_argument);

  // a trace started at the fixed point stays at zero
  const IterationTrace fixed = run_mann(sc, ss, *sc.known_fixed_point(), 5);
  CHECK(check_fixed_point_descent(sc, fixed, *sc.known_fixed_point()).ok);
}

TEST_CASE("orbit growth bounds") {
  const Operator sc = build_operator(OperatorSpec::scaling(-2.0, 1));
  const StepSchedule ss = StepSchedule::constant(2.0 / 3.0, sc.kappa());
  const IterationTrace tr = run_mann(sc, ss, Vec{1.0}, 10);
  CHECK(check_growth_bounds(sc, tr, Vec{0.0}, 3.0).ok);

  const Operator rot = build_operator(OperatorSpec::rotation(kHalfPi, 2));
  const StepSchedule rs = StepSchedule::constant(0.5, 0.0);
  const IterationTrace rtr = run_mann(rot, rs, Vec{1.0, 0.0}, 40);
  CHECK(check_growth_bounds(rot, rtr, Vec{0.0, 0.0}, std::sqrt(2.0)).ok);

  CHECK_THROWS_AS(check_growth_bounds(sc, tr, Vec{0.0}, 0.5), std::invalid_argument);
}

TEST_CASE("weighted sum bound") {
  const Operator sc = build_operator(OperatorSpec::scaling(-2.0, 1));
  const StepSchedule ss = StepSchedule::constant(2.0 / 3.0, sc.kappa());
  const IterationTrace tr = run_mann(sc, ss, Vec{1.0}, 10);
  const auto out = check_delta_bound(tr, 10, 3.0);
  CHECK(out.ok);
  CHECK(out.worst_defect == doctest::Approx(1.0 - 9.0).epsilon(1e-12));

  const IterationTrace fixed = run_mann(sc, ss, *sc.known_fixed_point(), 10);
  CHECK(check_delta_bound(fixed, 10, 3.0).ok);

  // quarter-turn rotation: the series sums to 1, below b^2 = 2
  const Operator rot = build_operator(OperatorSpec::rotation(kHalfPi, 2));
  const StepSchedule rs = StepSchedule::constant(0.5, 0.0);
  const IterationTrace rtr = run_mann(rot, rs, Vec{1.0, 0.0}, 80);
  const auto rout = check_delta_bound(rtr, 80, std::sqrt(2.0));
  CHECK(rout.ok);
  CHECK(delta_sum(rtr, 80) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("monotone outcome flags hand-edited traces") {
  const Operator sc = build_operator(OperatorSpec::scaling(-2.0, 1));
  const StepSchedule ss = StepSchedule::constant(2.0 / 3.0, sc.kappa());
  IterationTrace tr = run_mann(sc, ss, Vec{1.0}, 5);
  CHECK(check_residual_monotone(tr).ok);

  tr.residuals[2] = tr.residuals[1] + 1.0;
  const auto out = check_residual_monotone(tr);
  CHECK_FALSE(out.ok);
  CHECK(out.worst_defect >= 1.0);
  CHECK(out.witness == "n=1");
}

TEST_CASE("full suite passes on catalog operators") {
  for (const auto& entry : standard_catalog()) {
    CAPTURE(entry.name);
    const Operator t = build_operator(entry.spec);
    const StepSchedule s = StepSchedule::constant((t.kappa() + 1.0) / 2.0, t.kappa());
    SuiteOptions opt;
    opt.n_samples = 400;  // smoke level; the acceptance suite runs 1e4
    opt.seed = 31337;
    const auto checks = run_full_suite(t, s, entry.x0, opt);
    for (const auto& c : checks) {
      CAPTURE(c.name);
      CAPTURE(c.witness);
      CHECK(c.ok);
    }
    CHECK(find_check(checks, "strictness"));
    CHECK(find_check(checks, "image_point_bound"));
    CHECK(find_check(checks, "step_descent"));
    CHECK(find_check(checks, "residual_monotone"));
    CHECK(find_check(checks, "delta_sum_bound"));
  }
}

TEST_CASE("the suite detects a corrupted constant") {
  auto spec = OperatorSpec::scaling(-2.0, 1);
  spec.kappa = 1.0 / 3.0 - 0.1;
  const Operator t = build_operator(spec);
  const StepSchedule s = StepSchedule::constant(0.7, t.kappa());
  SuiteOptions opt;
  opt.n_samples = 400;
  opt.seed = 31337;
  const auto checks = run_full_suite(t, s, Vec{1.0}, opt);
  const auto* strict = find_check(checks, "strictness");
  REQUIRE(strict);
  CHECK_FALSE(strict->ok);
  CHECK(strict->worst_defect > 0.0);
}

TEST_CASE("suite results are deterministic for a fixed seed") {
  const Operator t = build_operator(OperatorSpec::scaling(-2.0, 2));
  const StepSchedule s = StepSchedule::constant(2.0 / 3.0, t.kappa());
  SuiteOptions opt;
  opt.n_samples = 200;
  opt.seed = 4242;
  const auto a = run_full_suite(t, s, Vec{0.8, -0.6}, opt);
  const auto b = run_full_suite(t, s, Vec{0.8, -0.6}, opt);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].name == b[i].name);
    CHECK(a[i].ok == b[i].ok);
    CHECK(a[i].worst_defect == b[i].worst_defect);
    CHECK(a[i].witness == b[i].witness);
  }
}
