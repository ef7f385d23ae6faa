#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace regula {

/// Step-size sequence (lambda_n) in (kappa,1) with its strictness context.
/// Each queried step yields the weight (lambda_n - kappa)(1 - lambda_n) > 0.
/// Formula and table schedules are validated lazily at query time; reaching
/// a value outside (kappa,1) raises with the offending index.
class StepSchedule {
 public:
  static StepSchedule constant(double lambda, double kappa);
  static StepSchedule formula(const std::string& name, double kappa);
  static StepSchedule table(std::vector<double> prefix, StepSchedule tail);

  double kappa() const noexcept { return kappa_; }
  double lambda_at(long long n) const;
  double weight_at(long long n) const;
  const std::string& id() const noexcept { return id_; }

  static std::vector<std::string> formula_names();

 private:
  struct Memo;

  StepSchedule(double kappa, std::string id, std::function<double(long long)> rule);

  double kappa_ = 0.0;
  std::string id_;
  std::function<double(long long)> rule_;
  std::shared_ptr<Memo> memo_;

  friend long long compute_theta(const StepSchedule& s, long long n);
};

/// Witness that partial sums of the schedule's weights diverge:
/// sum_{k=0}^{theta(n)} a_k >= n. Carries its provenance, since experiments
/// may inject deliberately loose rates and certify against them.
class DivergenceRate {
 public:
  enum class Source { ClosedForm, Computed, Explicit };

  long long theta(long long n) const;
  Source source() const noexcept { return source_; }
  const std::string& id() const noexcept { return id_; }

  /// theta(n) = ceil(1/((lambda-kappa)(1-lambda))) * n.
  static DivergenceRate closed_form(double lambda, double kappa);
  /// Least-index witness computed from the schedule's own partial sums.
  static DivergenceRate computed(StepSchedule s);
  /// theta(n) = coefficient * n with a user-supplied coefficient.
  static DivergenceRate linear(long long coefficient);

 private:
  DivergenceRate() = default;
  Source source_ = Source::Explicit;
  long long coeff_ = 0;
  std::optional<StepSchedule> schedule_;
  std::string id_;
};

DivergenceRate theta_constant(double lambda, double kappa);

/// Least m with sum_{k=0}^{m} a_k >= n, partial sums accumulated
/// left-to-right with a 1e-12 relative slack on the comparison. Memoized on
/// the schedule, so repeated queries are monotone-consistent and safe under
/// concurrent callers. Throws once 1e8 terms fail to reach the target.
long long compute_theta(const StepSchedule& s, long long n);

struct ThetaVerifyReport {
  bool ok = false;
  std::optional<long long> first_failure;
};

/// Checks sum_{k=0}^{theta(n)} a_k >= n - tol for every n <= n_max.
/// Failures are reported, not thrown.
ThetaVerifyReport verify_theta(const StepSchedule& s, const DivergenceRate& rate,
                               long long n_max, double tol = 1e-9);

}  // namespace regula
