// alarms: command-line driver for inference, planning, export and serving.

#include <atomic>
#include <csignal>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "alarms/error.hpp"
#include "alarms/pipeline.hpp"
#include "alarms/service.hpp"

namespace {

using namespace alarms;

constexpr int kExitOk = 0;
constexpr int kExitDisagree = 1;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;
constexpr int kExitNoActiveHazard = 4;

struct Overrides {
  std::optional<double> delta;
  std::optional<double> deadline;
  std::optional<double> tau;
  std::optional<std::string> phase;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--delta", delta, "Grid step in seconds");
    cmd->add_option("--deadline", deadline, "Deadline in seconds");
    cmd->add_option("--tau", tau, "Activation threshold in (0, 1)");
    cmd->add_option("--phase", phase, "Takeoff, Enroute, Approach or Land");
  }

  void apply(Scenario& sc) const {
    if (delta) sc.solver.grid_step = *delta;
    if (deadline) sc.solver.deadline = *deadline;
    if (tau) {
      if (!(*tau > 0.0 && *tau < 1.0)) throw ValidationError("--tau: must lie in (0, 1)");
      sc.tau = *tau;
    }
    if (phase) sc.phase = make_phase(parse_phase(*phase));
    sc.solver.validate();
  }

  void apply(TmdpConfig& config, PhaseOfFlight& ph) const {
    if (delta) config.grid_step = *delta;
    if (deadline) config.deadline = *deadline;
    if (phase) ph = make_phase(parse_phase(*phase));
    config.validate();
  }
};

void print_run_summary(const RunResult& r) {
  for (const auto& h : r.hazards) {
    std::cout << h.id << ": " << alert_name(h.level) << " (reward " << h.reward << ")\n";
  }
  if (r.no_active_hazard) {
    std::cout << "no active hazard after thresholding; planner skipped\n";
    return;
  }
  const auto& sol = r.solution->initial_solution();
  std::cout << "state " << r.model->state_name(sol.state) << "  V(0) = "
            << sol.value[0] << "\n";
  for (const auto& seg : sol.policy.segments) {
    std::cout << "  [" << seg.start << ", " << seg.end << ") "
              << r.model->action_name(seg.action) << "\n";
  }
  std::cout << "inference " << r.inference_seconds << " s, solve "
            << r.solve_seconds << " s\n";
}

std::atomic<HttpServer*> g_server{nullptr};

void on_signal(int) {
  if (HttpServer* s = g_server.load()) s->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hazard inference and automation planning"};
  app.require_subcommand(1);

  Overrides ov;
  bool dump_model = false;
  std::string scenario_path, out_dir;

  auto* run_cmd = app.add_subcommand("run", "Infer, plan and write a result bundle");
  run_cmd->add_option("scenario", scenario_path, "Scenario JSON")->required();
  run_cmd->add_option("--out", out_dir, "Output directory")->required();
  run_cmd->add_flag("--dump-model", dump_model, "Print the instantiated model");
  ov.add_to(run_cmd);

  bool curves = false;
  auto* export_cmd = app.add_subcommand("export", "Write per-state curve CSVs");
  export_cmd->add_option("scenario", scenario_path, "Scenario JSON")->required();
  export_cmd->add_flag("--curves", curves, "Export Q/V curves")->required();
  export_cmd->add_option("--out", out_dir, "Output directory")->required();
  export_cmd->add_flag("--dump-model", dump_model, "Print the instantiated model");
  ov.add_to(export_cmd);

  std::string matrix_path, table_path;
  std::vector<std::string> hazards;
  std::vector<double> rewards;
  int max_hazards = kMaxLookupHazards;
  auto* pre_cmd = app.add_subcommand("precompute", "Solve every level combination");
  pre_cmd->add_option("matrix", matrix_path, "Hazard matrix JSON")->required();
  pre_cmd->add_option("--hazards", hazards, "Comma-separated hazard ids")
      ->delimiter(',')
      ->required();
  pre_cmd->add_option("--rewards", rewards, "Comma-separated hazard rewards")
      ->delimiter(',');
  pre_cmd->add_option("--out", table_path, "Lookup table output")->required();
  pre_cmd->add_option("--max-hazards", max_hazards, "Hazard cap");
  ov.add_to(pre_cmd);

  std::uint64_t seed = 1;
  std::int64_t samples = 100000;
  auto* val_cmd = app.add_subcommand("validate", "Check V(0) against a Monte Carlo rollout");
  val_cmd->add_option("scenario", scenario_path, "Scenario JSON")->required();
  val_cmd->add_option("--seed", seed, "Rollout seed");
  val_cmd->add_option("--samples", samples, "Rollout episodes");
  ov.add_to(val_cmd);

  ServerOptions server_opts;
  auto* serve_cmd = app.add_subcommand("serve", "Start the HTTP service");
  serve_cmd->add_option("--matrix", matrix_path, "Hazard matrix JSON")->required();
  serve_cmd->add_option("--host", server_opts.host, "Listen address");
  serve_cmd->add_option("--port", server_opts.port, "Listen port");
  serve_cmd->add_option("--cors-origin", server_opts.cors_origin,
                        "Allowed browser origin");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*run_cmd || *export_cmd || *val_cmd) {
      Scenario sc = load_scenario_file(scenario_path);
      ov.apply(sc);
      HazardMatrix matrix = load_matrix_file(sc.matrix_path);
      RunResult result = run(sc, matrix);
      if (dump_model && result.model) {
        std::cout << model_to_json(*result.model).dump(2) << "\n";
      }

      if (*run_cmd) {
        write_bundle(result, sc, out_dir);
        print_run_summary(result);
        return result.no_active_hazard ? kExitNoActiveHazard : kExitOk;
      }
      if (result.no_active_hazard) {
        std::cerr << "no active hazard after thresholding; planner skipped\n";
        return kExitNoActiveHazard;
      }
      if (*export_cmd) {
        for (const auto& f : export_curves(*result.model, *result.solution, out_dir)) {
          std::cout << f << "\n";
        }
        return kExitOk;
      }
      const auto& model = *result.model;
      const auto& solved = *result.solution;
      RolloutEstimate est = rollout(model, solved, solved.initial_solution().state,
                                    samples, seed);
      double v0 = solved.initial_value();
      double z = est.standard_error > 0 ? (est.mean - v0) / est.standard_error : 0.0;
      bool agree = std::abs(est.mean - v0) <= 3.0 * est.standard_error + 1e-12;
      std::cout << "V(0) " << v0 << "\nrollout mean " << est.mean << " +/- "
                << est.standard_error << " (n=" << est.samples << ", z=" << z << ")\n"
                << (agree ? "agree" : "DISAGREE") << "\n";
      return agree ? kExitOk : kExitDisagree;
    }

    if (*pre_cmd) {
      HazardMatrix matrix = load_matrix_file(matrix_path);
      if (rewards.empty()) {
        for (const auto& h : hazards) {
          rewards.push_back(hazard_reward(matrix, matrix.hazard_index(h), {}));
        }
      }
      TmdpConfig config;
      PhaseOfFlight phase = make_phase(Phase::kEnroute);
      ov.apply(config, phase);
      LookupTable table = precompute(matrix, hazards, rewards, phase, config, max_hazards);
      std::ofstream out(table_path);
      if (!out) throw IoError("cannot write '" + table_path + "'");
      out << to_json(table).dump(2) << "\n";
      if (!out) throw IoError("cannot write '" + table_path + "'");
      std::cout << table.entries.size() << " keys written to " << table_path << "\n";
      return kExitOk;
    }

    if (*serve_cmd) {
      AlarmsService service(load_matrix_file(matrix_path), matrix_path);
      HttpServer server(service, server_opts);
      int port = server.bind();
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "listening on http://" << server_opts.host << ":" << port << std::endl;
      server.serve();
      g_server = nullptr;
      return kExitOk;
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
