#include "regula/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "regula/numeric.hpp"

namespace regula {

namespace {

constexpr long long kPartialSumCap = 100'000'000;

using FormulaFn = double (*)(long long, double);

const std::map<std::string, FormulaFn>& formula_registry() {
  static const std::map<std::string, FormulaFn> reg = {
      // 1/2 + 1/(4(n+2)): weights tend to 1/4 - o(1), briskly divergent
      {"half-plus-harmonic",
       [](long long n, double) { return 0.5 + 1.0 / (4.0 * static_cast<double>(n + 2)); }},
      // 1 - 1/(n+2): weights ~ (1-kappa)/n, harmonically divergent
      {"one-minus-harmonic",
       [](long long n, double) { return 1.0 - 1.0 / static_cast<double>(n + 2); }},
      // kappa + (1-kappa)/(n+2): approaches the lower endpoint
      {"kappa-plus-harmonic",
       [](long long n, double kappa) {
         return kappa + (1.0 - kappa) / static_cast<double>(n + 2);
       }},
  };
  return reg;
}

void require_kappa(double kappa) {
  if (!(kappa >= 0.0 && kappa < 1.0)) {
    throw std::invalid_argument("strictness constant must lie in [0,1)");
  }
}

}  // namespace

struct StepSchedule::Memo {
  std::mutex mu;
  std::vector<long long> crossing;  // crossing[j]: least m with partial sum >= j
  long long next = 0;               // next term index to accumulate
  double partial = 0.0;             // sum of weights through next-1
};

StepSchedule::StepSchedule(double kappa, std::string id,
                           std::function<double(long long)> rule)
    : kappa_(kappa), id_(std::move(id)), rule_(std::move(rule)),
      memo_(std::make_shared<Memo>()) {}

StepSchedule StepSchedule::constant(double lambda, double kappa) {
  require_kappa(kappa);
  if (!(lambda > kappa && lambda < 1.0)) {
    throw std::domain_error("step size must satisfy kappa < lambda < 1 (lambda=" +
                            fmt_g17(lambda) + ", kappa=" + fmt_g17(kappa) + ")");
  }
  return StepSchedule(kappa,
                      "constant(lambda=" + fmt_g17(lambda) + ",kappa=" + fmt_g17(kappa) + ")",
                      [lambda](long long) { return lambda; });
}

StepSchedule StepSchedule::formula(const std::string& name, double kappa) {
  require_kappa(kappa);
  const auto& reg = formula_registry();
  const auto it = reg.find(name);
  if (it == reg.end()) throw std::invalid_argument("unknown schedule formula: " + name);
  FormulaFn fn = it->second;
  return StepSchedule(kappa, "formula(name=" + name + ",kappa=" + fmt_g17(kappa) + ")",
                      [fn, kappa](long long n) { return fn(n, kappa); });
}

StepSchedule StepSchedule::table(std::vector<double> prefix, StepSchedule tail) {
  const double kappa = tail.kappa();
  auto tail_rule = tail.rule_;
  const long long len = static_cast<long long>(prefix.size());
  std::string id = "table(prefix=[";
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (i) id += ",";
    id += fmt_g17(prefix[i]);
  }
  id += "],tail=" + tail.id() + ")";
  auto values = std::make_shared<std::vector<double>>(std::move(prefix));
  return StepSchedule(kappa, std::move(id), [values, tail_rule, len](long long n) {
    return n < len ? (*values)[static_cast<std::size_t>(n)] : tail_rule(n);
  });
}

std::vector<std::string> StepSchedule::formula_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : formula_registry()) names.push_back(k);
  return names;
}

double StepSchedule::lambda_at(long long n) const {
  if (n < 0) throw std::invalid_argument("schedule index must be nonnegative");
  const double v = rule_(n);
  if (!(v > kappa_ && v < 1.0)) {
    throw std::domain_error("schedule violates kappa < lambda < 1 at index " +
                            std::to_string(n) + " (lambda=" + fmt_g17(v) +
                            ", kappa=" + fmt_g17(kappa_) + ")");
  }
  return v;
}

double StepSchedule::weight_at(long long n) const {
  const double lam = lambda_at(n);
  return (lam - kappa_) * (1.0 - lam);
}

long long compute_theta(const StepSchedule& s, long long n) {
  if (n < 0) throw std::invalid_argument("theta argument must be nonnegative");
  StepSchedule::Memo& memo = *s.memo_;
  std::scoped_lock lock(memo.mu);
  while (static_cast<long long>(memo.crossing.size()) <= n) {
    if (memo.next >= kPartialSumCap) {
      throw std::runtime_error("divergence not witnessed within cap (1e8 terms) at level " +
                               std::to_string(memo.crossing.size()));
    }
    const long long m = memo.next++;
    memo.partial += s.weight_at(m);
    // record every integer level crossed by this prefix
    for (;;) {
      const double level = static_cast<double>(memo.crossing.size());
      if (memo.partial + 1e-12 * std::max(1.0, level) >= level) {
        memo.crossing.push_back(m);
      } else {
        break;
      }
    }
  }
  return memo.crossing[static_cast<std::size_t>(n)];
}

long long DivergenceRate::theta(long long n) const {
  if (n < 0) throw std::invalid_argument("theta argument must be nonnegative");
  switch (source_) {
    case Source::ClosedForm:
    case Source::Explicit: {
      if (coeff_ > 0 && n > 0 && coeff_ > (9'000'000'000'000'000'000LL / n)) {
        throw std::out_of_range("divergence rate overflows the supported range");
      }
      return coeff_ * n;
    }
    case Source::Computed:
      return compute_theta(*schedule_, n);
  }
  throw std::logic_error("unreachable rate source");
}

DivergenceRate DivergenceRate::closed_form(double lambda, double kappa) {
  require_kappa(kappa);
  if (!(lambda > kappa && lambda < 1.0)) {
    throw std::domain_error("step size must satisfy kappa < lambda < 1");
  }
  DivergenceRate r;
  r.source_ = Source::ClosedForm;
  r.coeff_ = ceil_guarded(1.0 / ((lambda - kappa) * (1.0 - lambda)));
  r.id_ = "closed-form(coefficient=" + std::to_string(r.coeff_) + ")";
  return r;
}

DivergenceRate DivergenceRate::computed(StepSchedule s) {
  DivergenceRate r;
  r.source_ = Source::Computed;
  r.id_ = "computed(" + s.id() + ")";
  r.schedule_ = std::move(s);
  return r;
}

DivergenceRate DivergenceRate::linear(long long coefficient) {
  if (coefficient < 0) throw std::invalid_argument("rate coefficient must be nonnegative");
  DivergenceRate r;
  r.source_ = Source::Explicit;
  r.coeff_ = coefficient;
  r.id_ = "explicit(coefficient=" + std::to_string(coefficient) + ")";
  return r;
}

DivergenceRate theta_constant(double lambda, double kappa) {
  return DivergenceRate::closed_form(lambda, kappa);
}

ThetaVerifyReport verify_theta(const StepSchedule& s, const DivergenceRate& rate,
                               long long n_max, double tol) {
  if (n_max < 0) throw std::invalid_argument("n_max must be nonnegative");
  double partial = 0.0;
  long long next = 0;
  long long prev = -1;
  for (long long n = 0; n <= n_max; ++n) {
    const long long m = rate.theta(n);
    if (m < prev) return {false, n};  // a rate must be nondecreasing
    prev = m;
    while (next <= m) {
      if (next >= kPartialSumCap) return {false, n};
      partial += s.weight_at(next++);
    }
    if (!(partial >= static_cast<double>(n) - tol)) return {false, n};
  }
  return {true, std::nullopt};
}

}  // namespace regula
