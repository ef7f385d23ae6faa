#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "regula/operators.hpp"
#include "regula/schedules.hpp"
#include "regula/vec.hpp"

namespace regula {

/// Schedule description as it appears in the experiment config; the
/// strictness context comes from the operator when the schedule is built.
struct ScheduleSpec {
  enum class Kind { Constant, Formula, Table };
  Kind kind = Kind::Constant;
  double lambda = 0.5;
  std::string name;
  std::vector<double> prefix;
  std::shared_ptr<ScheduleSpec> tail;

  StepSchedule build(double kappa) const;
};

struct ThetaSpec {
  enum class Kind { ClosedForm, Computed, Explicit };
  Kind kind = Kind::ClosedForm;
  long long coefficient = 0;

  /// ClosedForm requires a constant schedule; Computed derives the witness
  /// from the schedule's own partial sums.
  DivergenceRate build(const ScheduleSpec& sched, const StepSchedule& s) const;
};

/// Starting point: a coordinate literal or a named seeded rule
/// ("basis", "ones", "seeded-ball").
struct X0Spec {
  std::variant<std::vector<double>, std::string> value = std::string("basis");
  double scale = 1.0;   // basis/ones
  double radius = 1.0;  // seeded-ball

  Vec resolve(std::size_t dim, std::uint64_t seed) const;
};

/// Neighborhood radius: explicit, or "auto" = max{||x0-Tx0||, ||x0-p||}
/// when a fixed point p is known, else ||x0-Tx0|| (probe-checked only).
struct BSpec {
  bool auto_mode = true;
  double value = 0.0;

  double resolve(const Operator& T, const Vec& x0, bool* probe_only = nullptr) const;
};

struct OutputSpec {
  std::string trace = "trace.csv";
  std::string summary = "summary.json";
  std::string report = "report.json";
  std::string suite = "suite.json";
  std::string sweep = "sweep.csv";
};

struct ExperimentConfig {
  OperatorSpec op;
  ScheduleSpec schedule;
  ThetaSpec theta;
  X0Spec x0;
  BSpec b;
  std::vector<double> eps = {0.1};
  long long horizon_extra = 0;
  std::optional<std::uint64_t> seed;
  std::optional<long long> horizon;  // run subcommand
  int samples = 10000;               // verify subcommand
  std::vector<double> lambda_grid;   // sweep subcommand
  bool export_points = false;
  OutputSpec output;

  nlohmann::json provenance;  // original operator/schedule documents
};

/// Strict parse: unknown keys anywhere in the document are rejected.
ExperimentConfig parse_config(const nlohmann::json& doc);

OperatorSpec parse_operator_spec(const nlohmann::json& j);
nlohmann::json operator_spec_json(const OperatorSpec& spec);

}  // namespace regula
