#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "cpnlab/bounds.hpp"
#include "cpnlab/constructions.hpp"
#include "cpnlab/flow.hpp"
#include "cpnlab/report.hpp"

using namespace cpnlab;

namespace {

void print_table(const std::vector<ExperimentReport>& reports) {
  for (const auto& r : reports)
    std::printf("%-4s %-58s est=%-14.8g ref=%-14.8g tol=%-8.3g %-8s %7.2fs\n", r.pass ? "ok" : "FAIL", r.name.c_str(),
                r.estimate, r.reference, r.tolerance, to_string(r.kind).c_str(), r.wall_time);
}

void emit(const std::vector<ExperimentReport>& reports, const std::string& out, const std::string& csv) {
  print_table(reports);
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw UsageError("cannot write '" + out + "'");
    write_reports_json(reports, f);
  }
  if (!csv.empty()) {
    std::ofstream f(csv);
    if (!f) throw UsageError("cannot write '" + csv + "'");
    write_reports_csv(reports, f);
  }
  const auto failed = std::count_if(reports.begin(), reports.end(), [](const auto& r) { return !r.pass; });
  std::printf("%zu records, %ld failed\n", reports.size(), static_cast<long>(failed));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy bounds and harmonic map checks on projective spaces"};
  app.require_subcommand(1);
  bool serial = false;
  app.add_flag("--serial", serial, "Run kernels on one thread");

  auto* verify = app.add_subcommand("verify", "Run a named experiment, or all of them");
  std::string experiment, out, csv;
  std::uint64_t seed = 7;
  std::optional<int> resolution;
  std::optional<double> p;
  verify->add_option("experiment", experiment, "Experiment name or 'all'")->required();
  verify->add_option("--seed", seed, "Random seed");
  verify->add_option("--resolution", resolution, "Sample count, mesh level or nodes per angle");
  verify->add_option("--p", p, "Restrict bounds-identity to one exponent");
  verify->add_option("--out", out, "Write the JSON report here");
  verify->add_option("--csv", csv, "Write the CSV report here");

  auto* corpus = app.add_subcommand("corpus", "Map corpus");
  corpus->require_subcommand(1);
  corpus->add_subcommand("list", "Print the corpus keys");
  auto* experiments = app.add_subcommand("experiments", "Print the experiment names");

  auto* flow = app.add_subcommand("flow", "Energy descent from the perturbed identity of S^2");
  int level = 4, steps = 2000;
  double step = 1e-3;
  std::string map_key = "perturbed(S2,0.2)", log_path, mesh_path;
  flow->add_option("--mesh-level", level, "Icosphere level")->check(CLI::Range(0, 7));
  flow->add_option("--steps", steps, "Iteration cap")->check(CLI::PositiveNumber);
  flow->add_option("--step", step, "Initial step size")->check(CLI::PositiveNumber);
  flow->add_option("--map", map_key, "Starting map (domain S2 or RP2)");
  flow->add_option("--log", log_path, "Write the flow log CSV here");
  flow->add_option("--mesh-out", mesh_path, "Write the final mesh map CSV here");

  auto* suite = app.add_subcommand("suite", "Run experiments from a JSON config");
  std::string suite_path;
  bool parallel = false;
  suite->add_option("config", suite_path, "JSON file mapping experiment names to parameters")->required();
  suite->add_flag("--parallel", parallel, "Run experiments concurrently");
  suite->add_option("--out", out, "Write the JSON report here");
  suite->add_option("--csv", csv, "Write the CSV report here");

  auto* bound = app.add_subcommand("bound", "Evaluate a bound, e.g. 'CPN_P(2,2,pi)'");
  std::string bound_text;
  bound->add_option("spec", bound_text, "Bound expression")->required();

  CLI11_PARSE(app, argc, argv);
  if (serial) set_default_exec(Exec::Serial);

  try {
    if (*verify) {
      ExperimentConfig cfg;
      cfg.seed = seed;
      cfg.resolution = resolution;
      cfg.p = p;
      std::vector<ExperimentReport> reports;
      if (experiment == "all") {
        for (const auto& name : experiment_names()) {
          auto r = run_experiment(name, cfg);
          reports.insert(reports.end(), r.begin(), r.end());
        }
      } else {
        reports = run_experiment(experiment, cfg);
      }
      emit(reports, out, csv);
      return all_pass(reports) ? 0 : 1;
    }
    if (*corpus) {
      for (const auto& k : corpus_keys()) {
        const MapObject F = standard_map(k);
        std::printf("%-34s %s -> %s\n", k.c_str(), F.domain().name().c_str(), F.codomain().name().c_str());
      }
      return 0;
    }
    if (*experiments) {
      for (const auto& n : experiment_names()) std::printf("%s\n", n.c_str());
      return 0;
    }
    if (*flow) {
      FlowOptions opt;
      opt.step = step;
      opt.iterations = steps;
      const MeshMap start = make_mesh_map(standard_map(map_key), level);
      const FlowResult r = flow_minimize(start, opt);
      const auto& first = r.log.front();
      const auto& last = r.log.back();
      std::printf("vertices %zu  iterations %d  converged %s\n", start.size(), r.iterations, r.converged ? "yes" : "no");
      std::printf("energy %.10g -> %.10g  (4 pi = %.10g)\n", first.energy, last.energy, 4.0 * kPi);
      std::printf("tension %.3e -> %.3e  defect %.3e -> %.3e\n", first.tension, r.final_tension, first.defect,
                  last.defect);
      if (!log_path.empty()) {
        std::ofstream f(log_path);
        write_flow_log_csv(r.log, f);
      }
      if (!mesh_path.empty()) {
        std::ofstream f(mesh_path);
        write_mesh_map_csv(r.map, f);
      }
      return 0;
    }
    if (*suite) {
      const auto reports = run_suite_file(suite_path, parallel);
      emit(reports, out, csv);
      return all_pass(reports) ? 0 : 1;
    }
    if (*bound) {
      const BoundSpec s = parse_bound(bound_text);
      const BoundValue v = eval_bound(s);
      if (v.interval)
        std::printf("%s [%.12g, %.12g]\n", to_string(s.kind).c_str(), v.lo, v.hi);
      else
        std::printf("%s %.12g%s\n", to_string(s.kind).c_str(), v.lo, v.strict ? " (strict)" : "");
      return 0;
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
