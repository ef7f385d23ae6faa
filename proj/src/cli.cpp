#include "regula/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "regula/catalog.hpp"
#include "regula/iteration.hpp"
#include "regula/numeric.hpp"
#include "regula/rates.hpp"
#include "regula/verify.hpp"

namespace regula {

using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 0x5eed0001ull;

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << text;
}

void write_json(const std::filesystem::path& path, const json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

json check_json(const CheckOutcome& c) {
  return json{{"name", c.name}, {"ok", c.ok}, {"worst_defect", c.worst_defect},
              {"witness", c.witness}};
}

json provenance_json(const ExperimentConfig& cfg, std::uint64_t seed) {
  json p = cfg.provenance;
  p["seed"] = seed;
  return p;
}

json report_json(const CertificationReport& rep, const ExperimentConfig& cfg,
                 std::uint64_t seed) {
  json j;
  j["phi"] = rep.phi;
  j["eps"] = rep.eps;
  j["b"] = rep.b;
  j["empirical_idx"] = rep.empirical_idx ? json(*rep.empirical_idx) : json(nullptr);
  j["bound_holds"] = rep.bound_holds;
  j["tightness"] = rep.tightness ? json(*rep.tightness) : json(nullptr);
  json checks = json::array();
  for (const auto& c : rep.checks) checks.push_back(check_json(c));
  j["checks"] = std::move(checks);
  j["near_boundary"] = rep.near_boundary;
  j["provenance"] = provenance_json(cfg, seed);
  return j;
}

int report_exit_code(const CertificationReport& rep) {
  if (!rep.claim_ok) return kExitClaimFailed;
  if (!rep.hypotheses_ok) return kExitHypothesisUnverified;
  bool all_ok = rep.bound_holds;
  for (const auto& c : rep.checks) all_ok = all_ok && c.ok;
  return all_ok ? kExitOk : kExitBoundFailed;
}

int worst_exit(int a, int b) {
  // severity order: claim failure > hypothesis > bound/check > ok
  auto rank = [](int code) {
    switch (code) {
      case kExitClaimFailed: return 3;
      case kExitHypothesisUnverified: return 2;
      case kExitBoundFailed: return 1;
      default: return 0;
    }
  };
  return rank(a) >= rank(b) ? a : b;
}

struct BuiltExperiment {
  Operator op;
  StepSchedule schedule;
  Vec x0;
  double b;
  bool b_probe_only;
  std::uint64_t seed;
};

BuiltExperiment build_experiment(const ExperimentConfig& cfg) {
  Operator op = build_operator(cfg.op);
  StepSchedule schedule = cfg.schedule.build(op.kappa());
  const std::uint64_t seed = resolve_seed(cfg);
  Vec x0 = cfg.x0.resolve(op.dim(), seed);
  if (!op.contains(x0)) {
    throw std::invalid_argument("x0 lies outside the operator domain");
  }
  bool probe_only = false;
  const double b = cfg.b.resolve(op, x0, &probe_only);
  if (!(b > 0.0)) {
    throw std::invalid_argument("resolved b is not positive (x0 is already fixed?)");
  }
  return {std::move(op), std::move(schedule), std::move(x0), b, probe_only, seed};
}

CertifyOptions certify_options(const ExperimentConfig& cfg, std::uint64_t seed) {
  CertifyOptions opt;
  opt.horizon_extra = cfg.horizon_extra;
  opt.seed = seed;
  return opt;
}

}  // namespace

std::uint64_t resolve_seed(const ExperimentConfig& cfg) {
  if (cfg.seed) return *cfg.seed;
  if (const char* env = std::getenv("REGULA_SEED")) {
    return static_cast<std::uint64_t>(std::strtoull(env, nullptr, 10));
  }
  return kDefaultSeed;
}

int cmd_run(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  try {
    auto ex = build_experiment(cfg);
    const long long N = cfg.horizon.value_or(100);
    const long long cap = cfg.export_points ? kStoreAllPoints : 1;
    const IterationTrace trace = run_mann(ex.op, ex.schedule, ex.x0, N, cap);

    std::filesystem::create_directories(out_dir);
    {
      std::ostringstream csv;
      write_trace_csv(csv, trace, cfg.export_points);
      write_text(out_dir / cfg.output.trace, csv.str());
    }

    json summary;
    summary["operator"] = ex.op.id();
    summary["schedule"] = ex.schedule.id();
    summary["n"] = N;
    summary["final_residual"] = trace.residuals.back();
    json emp = json::array();
    for (double eps : cfg.eps) {
      const auto idx = empirical_index(trace, eps);
      emp.push_back(json{{"eps", eps}, {"index", idx ? json(*idx) : json(nullptr)}});
    }
    summary["empirical"] = std::move(emp);
    summary["provenance"] = provenance_json(cfg, ex.seed);
    write_json(out_dir / cfg.output.summary, summary);
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  }
}

int cmd_certify(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  try {
    auto ex = build_experiment(cfg);
    if (ex.b_probe_only) {
      std::cerr << "note: b resolved from the starting residual only; the "
                   "fixed-point neighborhood hypothesis is probe-checked\n";
    }
    std::filesystem::create_directories(out_dir);

    int exit_code = kExitOk;
    json out_doc;
    json reports = json::array();
    for (double eps : cfg.eps) {
      const DivergenceRate rate = cfg.theta.build(cfg.schedule, ex.schedule);
      const CertificationReport rep =
          certify(ex.op, ex.schedule, rate, ex.x0, ex.b, eps, certify_options(cfg, ex.seed));
      exit_code = worst_exit(exit_code, report_exit_code(rep));
      reports.push_back(report_json(rep, cfg, ex.seed));
    }
    out_doc = cfg.eps.size() == 1 ? reports[0] : reports;
    write_json(out_dir / cfg.output.report, out_doc);
    return exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  }
}

int cmd_sweep(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  try {
    Operator op = build_operator(cfg.op);
    const std::uint64_t seed = resolve_seed(cfg);
    const Vec x0 = cfg.x0.resolve(op.dim(), seed);
    if (!op.contains(x0)) throw std::invalid_argument("x0 lies outside the operator domain");

    std::vector<double> lambdas = cfg.lambda_grid;
    if (lambdas.empty()) {
      if (cfg.schedule.kind != ScheduleSpec::Kind::Constant) {
        throw std::invalid_argument("sweep needs a lambda_grid or a constant schedule");
      }
      lambdas.push_back(cfg.schedule.lambda);
    }
    if (cfg.eps.empty()) throw std::invalid_argument("sweep needs a nonempty eps list");

    struct Cell {
      double eps, lambda;
      std::optional<CertificationReport> rep;
      std::string note;
    };

    // independent cells fan out to workers; rows are emitted in grid order
    std::vector<std::future<Cell>> futures;
    for (double eps : cfg.eps) {
      for (double lam : lambdas) {
        futures.push_back(std::async(std::launch::async, [&, eps, lam]() {
          Cell cell{eps, lam, std::nullopt, ""};
          try {
            const StepSchedule sched = StepSchedule::constant(lam, op.kappa());
            ScheduleSpec sched_spec;
            sched_spec.kind = ScheduleSpec::Kind::Constant;
            sched_spec.lambda = lam;
            const DivergenceRate rate = cfg.theta.build(sched_spec, sched);
            bool probe_only = false;
            const double b = cfg.b.resolve(op, x0, &probe_only);
            cell.rep = certify(op, sched, rate, x0, b, eps, certify_options(cfg, seed));
          } catch (const std::exception& e) {
            cell.note = std::string("error: ") + e.what();
          }
          return cell;
        }));
      }
    }

    std::ostringstream csv;
    csv << "eps,lambda,phi,empirical_idx,tightness,bound_holds,note\n";
    bool all_ok = true;
    for (auto& f : futures) {
      const Cell cell = f.get();
      csv << fmt_g17(cell.eps) << "," << fmt_g17(cell.lambda) << ",";
      if (cell.rep) {
        const auto& r = *cell.rep;
        csv << r.phi << ",";
        if (r.empirical_idx) csv << *r.empirical_idx;
        csv << ",";
        if (r.tightness) csv << fmt_g17(*r.tightness);
        csv << "," << (r.bound_holds ? "true" : "false") << "," << cell.note << "\n";
        all_ok = all_ok && report_exit_code(r) == kExitOk;
      } else {
        csv << ",,,," << cell.note << "\n";
        all_ok = false;
      }
    }
    std::filesystem::create_directories(out_dir);
    write_text(out_dir / cfg.output.sweep, csv.str());
    return all_ok ? kExitOk : kExitBoundFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  }
}

int cmd_verify(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  try {
    auto ex = build_experiment(cfg);
    SuiteOptions opt;
    opt.n_samples = cfg.samples;
    opt.seed = ex.seed;
    opt.b = ex.b;
    const auto checks = run_full_suite(ex.op, ex.schedule, ex.x0, opt);

    json doc;
    json arr = json::array();
    bool all_ok = true;
    for (const auto& c : checks) {
      arr.push_back(check_json(c));
      all_ok = all_ok && c.ok;
    }
    doc["checks"] = std::move(arr);
    doc["all_ok"] = all_ok;
    doc["provenance"] = provenance_json(cfg, ex.seed);
    std::filesystem::create_directories(out_dir);
    write_json(out_dir / cfg.output.suite, doc);
    return all_ok ? kExitOk : kExitSuiteFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  }
}

}  // namespace regula
