#include "regula/config.hpp"

#include <algorithm>
#include <stdexcept>

#include "regula/rng.hpp"

namespace regula {

using nlohmann::json;

namespace {

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const std::string& ctx) {
  if (!j.is_object()) throw std::invalid_argument(ctx + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const bool known =
        std::any_of(allowed.begin(), allowed.end(),
                    [&](const char* k) { return it.key() == k; });
    if (!known) {
      throw std::invalid_argument("unknown key '" + it.key() + "' in " + ctx);
    }
  }
}

double as_double(const json& j, const std::string& ctx) {
  if (!j.is_number()) throw std::invalid_argument(ctx + " must be a number");
  return j.get<double>();
}

long long as_int(const json& j, const std::string& ctx) {
  if (!j.is_number_integer()) throw std::invalid_argument(ctx + " must be an integer");
  return j.get<long long>();
}

std::vector<double> as_vector(const json& j, const std::string& ctx) {
  if (!j.is_array()) throw std::invalid_argument(ctx + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(as_double(v, ctx + " entry"));
  return out;
}

ScheduleSpec parse_schedule_spec(const json& j) {
  require_keys(j, {"kind", "lambda", "name", "prefix", "tail"}, "schedule");
  if (!j.contains("kind")) throw std::invalid_argument("schedule needs a 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  ScheduleSpec s;
  if (kind == "constant") {
    s.kind = ScheduleSpec::Kind::Constant;
    s.lambda = as_double(j.at("lambda"), "schedule.lambda");
  } else if (kind == "formula") {
    s.kind = ScheduleSpec::Kind::Formula;
    s.name = j.at("name").get<std::string>();
  } else if (kind == "table") {
    s.kind = ScheduleSpec::Kind::Table;
    s.prefix = as_vector(j.at("prefix"), "schedule.prefix");
    s.tail = std::make_shared<ScheduleSpec>(parse_schedule_spec(j.at("tail")));
  } else {
    throw std::invalid_argument("unknown schedule kind: " + kind);
  }
  return s;
}

ThetaSpec parse_theta_spec(const json& j) {
  ThetaSpec t;
  if (j.is_string()) {
    const std::string v = j.get<std::string>();
    if (v == "closed-form") {
      t.kind = ThetaSpec::Kind::ClosedForm;
    } else if (v == "computed") {
      t.kind = ThetaSpec::Kind::Computed;
    } else {
      throw std::invalid_argument("theta must be 'closed-form', 'computed' or an object");
    }
  } else if (j.is_object()) {
    require_keys(j, {"coefficient"}, "theta");
    t.kind = ThetaSpec::Kind::Explicit;
    t.coefficient = as_int(j.at("coefficient"), "theta.coefficient");
  } else {
    throw std::invalid_argument("theta must be 'closed-form', 'computed' or an object");
  }
  return t;
}

X0Spec parse_x0_spec(const json& j) {
  X0Spec x;
  if (j.is_array()) {
    x.value = as_vector(j, "x0");
  } else if (j.is_object()) {
    require_keys(j, {"rule", "scale", "radius"}, "x0");
    x.value = j.at("rule").get<std::string>();
    if (j.contains("scale")) x.scale = as_double(j.at("scale"), "x0.scale");
    if (j.contains("radius")) x.radius = as_double(j.at("radius"), "x0.radius");
  } else {
    throw std::invalid_argument("x0 must be an array or a rule object");
  }
  return x;
}

}  // namespace

OperatorSpec parse_operator_spec(const json& j) {
  if (!j.is_object() || !j.contains("variant")) {
    throw std::invalid_argument("operator needs a 'variant'");
  }
  const std::string variant = j.at("variant").get<std::string>();
  std::optional<double> kappa;
  if (j.contains("kappa")) kappa = as_double(j.at("kappa"), "operator.kappa");

  if (variant == "scaling") {
    require_keys(j, {"variant", "a", "dim", "kappa"}, "operator(scaling)");
    auto s = OperatorSpec::scaling(as_double(j.at("a"), "operator.a"),
                                   static_cast<std::size_t>(as_int(j.at("dim"), "operator.dim")));
    s.kappa = kappa;
    return s;
  }
  if (variant == "rotation") {
    require_keys(j, {"variant", "angle", "dim", "plane", "kappa"}, "operator(rotation)");
    std::size_t p = 0, q = 1;
    if (j.contains("plane")) {
      const auto plane = j.at("plane");
      if (!plane.is_array() || plane.size() != 2) {
        throw std::invalid_argument("operator.plane must be a pair of indices");
      }
      p = static_cast<std::size_t>(as_int(plane[0], "operator.plane"));
      q = static_cast<std::size_t>(as_int(plane[1], "operator.plane"));
    }
    auto s = OperatorSpec::rotation(as_double(j.at("angle"), "operator.angle"),
                                    static_cast<std::size_t>(as_int(j.at("dim"), "operator.dim")),
                                    p, q);
    s.kappa = kappa;
    return s;
  }
  if (variant == "affine") {
    require_keys(j, {"variant", "matrix", "offset", "dim", "kappa"}, "operator(affine)");
    const auto& mj = j.at("matrix");
    if (!mj.is_array()) throw std::invalid_argument("operator.matrix must be an array of rows");
    std::vector<std::vector<double>> matrix;
    for (const auto& row : mj) matrix.push_back(as_vector(row, "operator.matrix row"));
    auto offset = as_vector(j.at("offset"), "operator.offset");
    if (j.contains("dim") &&
        static_cast<std::size_t>(as_int(j.at("dim"), "operator.dim")) != offset.size()) {
      throw std::invalid_argument("operator.dim disagrees with the offset length");
    }
    return OperatorSpec::affine(std::move(matrix), std::move(offset), kappa);
  }
  if (variant == "projected") {
    require_keys(j, {"variant", "base", "center", "radius", "kappa"}, "operator(projected)");
    auto s = OperatorSpec::projected(parse_operator_spec(j.at("base")),
                                     as_vector(j.at("center"), "operator.center"),
                                     as_double(j.at("radius"), "operator.radius"));
    s.kappa = kappa;
    return s;
  }
  throw std::invalid_argument("unknown operator variant: " + variant);
}

json operator_spec_json(const OperatorSpec& spec) {
  json j;
  switch (spec.variant) {
    case OperatorSpec::Variant::Scaling:
      j["variant"] = "scaling";
      j["a"] = spec.a;
      j["dim"] = spec.dim;
      break;
    case OperatorSpec::Variant::Rotation:
      j["variant"] = "rotation";
      j["angle"] = spec.angle;
      j["dim"] = spec.dim;
      j["plane"] = {spec.plane_p, spec.plane_q};
      break;
    case OperatorSpec::Variant::Affine:
      j["variant"] = "affine";
      j["matrix"] = spec.matrix;
      j["offset"] = spec.offset;
      break;
    case OperatorSpec::Variant::Projected:
      j["variant"] = "projected";
      j["base"] = operator_spec_json(*spec.base);
      j["center"] = spec.ball_center;
      j["radius"] = spec.ball_radius;
      break;
  }
  if (spec.kappa) j["kappa"] = *spec.kappa;
  return j;
}

StepSchedule ScheduleSpec::build(double kappa) const {
  switch (kind) {
    case Kind::Constant:
      return StepSchedule::constant(lambda, kappa);
    case Kind::Formula:
      return StepSchedule::formula(name, kappa);
    case Kind::Table:
      return StepSchedule::table(prefix, tail->build(kappa));
  }
  throw std::logic_error("unreachable schedule kind");
}

DivergenceRate ThetaSpec::build(const ScheduleSpec& sched, const StepSchedule& s) const {
  switch (kind) {
    case Kind::ClosedForm:
      if (sched.kind != ScheduleSpec::Kind::Constant) {
        throw std::invalid_argument("closed-form rate requires a constant schedule");
      }
      return DivergenceRate::closed_form(sched.lambda, s.kappa());
    case Kind::Computed:
      return DivergenceRate::computed(s);
    case Kind::Explicit:
      return DivergenceRate::linear(coefficient);
  }
  throw std::logic_error("unreachable theta kind");
}

Vec X0Spec::resolve(std::size_t dim, std::uint64_t seed) const {
  if (std::holds_alternative<std::vector<double>>(value)) {
    const auto& lit = std::get<std::vector<double>>(value);
    if (lit.size() != dim) {
      throw std::invalid_argument("x0 literal has the wrong dimension");
    }
    return Vec(lit);
  }
  const std::string& rule = std::get<std::string>(value);
  if (rule == "basis") {
    std::vector<double> c(dim, 0.0);
    c[0] = scale;
    return Vec(std::move(c));
  }
  if (rule == "ones") {
    return Vec(std::vector<double>(dim, scale));
  }
  if (rule == "seeded-ball") {
    SeededRng rng(seed ^ 0x9e3779b97f4a7c15ull);
    return rng.in_ball(Vec::zero(dim), radius);
  }
  throw std::invalid_argument("unknown x0 rule: " + rule);
}

double BSpec::resolve(const Operator& T, const Vec& x0, bool* probe_only) const {
  if (probe_only) *probe_only = false;
  if (!auto_mode) return value;
  const double r0 = residual(T, x0);
  if (T.known_fixed_point()) {
    return std::max(r0, dist(x0, *T.known_fixed_point()));
  }
  if (probe_only) *probe_only = true;
  return r0;
}

ExperimentConfig parse_config(const json& doc) {
  require_keys(doc,
               {"operator", "schedule", "theta", "x0", "b", "eps", "horizon_extra",
                "seed", "n", "samples", "lambda_grid", "export_points", "output"},
               "config");
  if (!doc.contains("operator") || !doc.contains("schedule")) {
    throw std::invalid_argument("config needs 'operator' and 'schedule'");
  }

  ExperimentConfig cfg;
  cfg.op = parse_operator_spec(doc.at("operator"));
  cfg.schedule = parse_schedule_spec(doc.at("schedule"));
  if (doc.contains("theta")) {
    cfg.theta = parse_theta_spec(doc.at("theta"));
  } else {
    cfg.theta.kind = cfg.schedule.kind == ScheduleSpec::Kind::Constant
                         ? ThetaSpec::Kind::ClosedForm
                         : ThetaSpec::Kind::Computed;
  }
  if (doc.contains("x0")) cfg.x0 = parse_x0_spec(doc.at("x0"));

  if (doc.contains("b")) {
    const auto& bj = doc.at("b");
    if (bj.is_string()) {
      if (bj.get<std::string>() != "auto") {
        throw std::invalid_argument("b must be a positive number or \"auto\"");
      }
      cfg.b.auto_mode = true;
    } else {
      cfg.b.auto_mode = false;
      cfg.b.value = as_double(bj, "b");
      if (!(cfg.b.value > 0.0)) throw std::invalid_argument("b must be positive");
    }
  }

  if (doc.contains("eps")) {
    const auto& ej = doc.at("eps");
    cfg.eps = ej.is_array() ? as_vector(ej, "eps") : std::vector<double>{as_double(ej, "eps")};
    if (cfg.eps.empty()) throw std::invalid_argument("eps list must be nonempty");
    for (double e : cfg.eps) {
      if (!(e > 0.0)) throw std::invalid_argument("eps values must be positive");
    }
  }

  if (doc.contains("horizon_extra")) {
    cfg.horizon_extra = as_int(doc.at("horizon_extra"), "horizon_extra");
    if (cfg.horizon_extra < 0) throw std::invalid_argument("horizon_extra must be nonnegative");
  }
  if (doc.contains("seed")) {
    cfg.seed = static_cast<std::uint64_t>(as_int(doc.at("seed"), "seed"));
  }
  if (doc.contains("n")) {
    cfg.horizon = as_int(doc.at("n"), "n");
    if (*cfg.horizon < 0) throw std::invalid_argument("n must be nonnegative");
  }
  if (doc.contains("samples")) {
    cfg.samples = static_cast<int>(as_int(doc.at("samples"), "samples"));
    if (cfg.samples < 1) throw std::invalid_argument("samples must be positive");
  }
  if (doc.contains("lambda_grid")) {
    cfg.lambda_grid = as_vector(doc.at("lambda_grid"), "lambda_grid");
  }
  if (doc.contains("export_points")) {
    if (!doc.at("export_points").is_boolean()) {
      throw std::invalid_argument("export_points must be a boolean");
    }
    cfg.export_points = doc.at("export_points").get<bool>();
  }
  if (doc.contains("output")) {
    const auto& oj = doc.at("output");
    require_keys(oj, {"trace", "summary", "report", "suite", "sweep"}, "output");
    if (oj.contains("trace")) cfg.output.trace = oj.at("trace").get<std::string>();
    if (oj.contains("summary")) cfg.output.summary = oj.at("summary").get<std::string>();
    if (oj.contains("report")) cfg.output.report = oj.at("report").get<std::string>();
    if (oj.contains("suite")) cfg.output.suite = oj.at("suite").get<std::string>();
    if (oj.contains("sweep")) cfg.output.sweep = oj.at("sweep").get<std::string>();
  }

  cfg.provenance["operator"] = doc.at("operator");
  cfg.provenance["schedule"] = doc.at("schedule");
  return cfg;
}

}  // namespace regula
