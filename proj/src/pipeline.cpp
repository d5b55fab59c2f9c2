#include "alarms/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <set>

#include "alarms/error.hpp"
#include "json_util.hpp"

namespace alarms {

namespace fs = std::filesystem;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

Json phase_json(const PhaseOfFlight& phase) {
  return Json{{"name", std::string(phase_name(phase.phase))},
              {"pilot_rate_factor", phase.pilot_rate_factor}};
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

void Scenario::validate_against(const HazardMatrix& matrix) const {
  for (const auto& [sensor, level] : evidence.observed) {
    if (!matrix.find_sensor(sensor)) {
      throw ValidationError("evidence: unknown sensor '" + sensor + "'");
    }
  }
  for (const auto& [sensor, value] : sensor_rewards) {
    if (!matrix.find_sensor(sensor)) {
      throw ValidationError("sensor_rewards: unknown sensor '" + sensor + "'");
    }
    if (!(value >= 0.0) || !std::isfinite(value)) {
      throw ValidationError("sensor_rewards." + sensor + ": must be >= 0");
    }
  }
}

Scenario parse_scenario(const Json& doc, const std::string& base_dir,
                        bool allow_missing_matrix) {
  if (!doc.is_object()) throw ValidationError("scenario: expected an object");
  Scenario sc;
  std::optional<double> deadline;
  std::optional<Json> phase_factors;

  for (const auto& [key, value] : doc.items()) {
    if (key == "matrix") {
      if (!value.is_string()) throw ValidationError("matrix: expected a path string");
      fs::path p = value.get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = fs::path(base_dir) / p;
      sc.matrix_path = p.lexically_normal().string();
    } else if (key == "evidence") {
      if (!value.is_object()) throw ValidationError("evidence: expected an object");
      for (const auto& [sensor, code] : value.items()) {
        if (!code.is_string()) {
          throw ValidationError("evidence." + sensor + ": expected an alert code");
        }
        try {
          sc.evidence.observed[sensor] = parse_alert_level(code.get<std::string>());
        } catch (const ValidationError&) {
          throw ValidationError("evidence." + sensor + ": unknown alert level '" +
                                code.get<std::string>() + "'");
        }
      }
    } else if (key == "sensor_rewards") {
      if (!value.is_object()) throw ValidationError("sensor_rewards: expected an object");
      for (const auto& [sensor, r] : value.items()) {
        if (!r.is_number()) {
          throw ValidationError("sensor_rewards." + sensor + ": expected a number");
        }
        sc.sensor_rewards[sensor] = r.get<double>();
      }
    } else if (key == "phase") {
      if (!value.is_string()) throw ValidationError("phase: expected a string");
      try {
        sc.phase = make_phase(parse_phase(value.get<std::string>()));
      } catch (const ValidationError& e) {
        throw ValidationError(std::string("phase: ") + e.what());
      }
    } else if (key == "phase_factors") {
      phase_factors = value;
    } else if (key == "deadline") {
      if (!value.is_number()) throw ValidationError("deadline: expected a number");
      deadline = value.get<double>();
    } else if (key == "tau") {
      if (!value.is_number()) throw ValidationError("tau: expected a number");
      sc.tau = value.get<double>();
      if (!(sc.tau > 0.0 && sc.tau < 1.0)) {
        throw ValidationError("tau: must lie in (0, 1)");
      }
    } else if (key == "unobserved") {
      std::string mode = value.is_string() ? value.get<std::string>() : "";
      if (mode == "nominal") {
        sc.unobserved = UnobservedSensors::kNominal;
      } else if (mode == "marginalize") {
        sc.unobserved = UnobservedSensors::kMarginalize;
      } else {
        throw ValidationError("unobserved: expected \"nominal\" or \"marginalize\"");
      }
    } else if (key == "noise") {
      sc.noise = noise_from_json(value);
    } else if (key == "solver") {
      sc.solver = config_from_json(value, sc.solver);
    } else {
      throw ValidationError("scenario: unknown field '" + key + "'");
    }
  }

  if (phase_factors) {
    if (!phase_factors->is_object()) {
      throw ValidationError("phase_factors: expected an object");
    }
    for (const auto& [name, factor] : phase_factors->items()) {
      Phase p = parse_phase(name);
      if (!factor.is_number() || !(factor.get<double>() > 0.0)) {
        throw ValidationError("phase_factors." + name + ": must be a positive number");
      }
      if (p == sc.phase.phase) sc.phase.pilot_rate_factor = factor.get<double>();
    }
  }
  if (deadline) {
    TmdpConfig c = sc.solver;
    c.deadline = *deadline;
    try {
      c.validate();
    } catch (const ValidationError& e) {
      throw ValidationError(std::string("deadline: ") + e.what());
    }
    sc.solver = c;
  }
  if (sc.matrix_path.empty() && !allow_missing_matrix) {
    throw ValidationError("scenario: missing field 'matrix'");
  }
  return sc;
}

Scenario load_scenario_file(const std::string& path) {
  std::string text = detail::read_text_file(path);
  return parse_scenario(detail::parse_json_text(text),
                        fs::path(path).parent_path().string());
}

Json scenario_to_json(const Scenario& sc) {
  Json evidence = Json::object();
  for (const auto& [sensor, level] : sc.evidence.observed) {
    evidence[sensor] = std::string(1, alert_code(level));
  }
  Json rewards = Json::object();
  for (const auto& [sensor, r] : sc.sensor_rewards) rewards[sensor] = r;
  Json j{{"evidence", std::move(evidence)},
         {"sensor_rewards", std::move(rewards)},
         {"phase", std::string(phase_name(sc.phase.phase))},
         {"phase_factors",
          {{std::string(phase_name(sc.phase.phase)), sc.phase.pilot_rate_factor}}},
         {"tau", sc.tau},
         {"unobserved",
          sc.unobserved == UnobservedSensors::kNominal ? "nominal" : "marginalize"},
         {"noise", to_json(sc.noise)},
         {"solver", to_json(sc.solver)}};
  if (!sc.matrix_path.empty()) j["matrix"] = sc.matrix_path;
  return j;
}

double hazard_reward(const HazardMatrix& matrix, int hazard,
                     const std::map<std::string, double>& sensor_rewards) {
  double best = 0.0;
  for (int s : matrix.sensors_of(hazard)) {
    auto it = sensor_rewards.find(matrix.sensors()[s].id);
    best = std::max(best, it == sensor_rewards.end() ? kDefaultSensorReward : it->second);
  }
  return best;
}

RunResult run(const Scenario& scenario, const HazardMatrix& matrix) {
  scenario.validate_against(matrix);
  RunResult out;

  auto started = std::chrono::steady_clock::now();
  BeliefNetwork network = build_network(matrix, scenario.noise);
  out.belief = posterior(network, scenario.evidence,
                         {scenario.unobserved, scenario.tau});
  out.inference_seconds = seconds_since(started);

  bool any_active = false;
  for (int h = 0; h < matrix.num_hazards(); ++h) {
    HazardInput in;
    in.id = matrix.hazards()[h].id;
    in.level = out.belief.thresholded[h];
    in.reward = hazard_reward(matrix, h, scenario.sensor_rewards);
    any_active = any_active || in.level != AlertLevel::kNominal;
    out.hazards.push_back(std::move(in));
  }
  if (!any_active) {
    out.no_active_hazard = true;
    return out;
  }

  started = std::chrono::steady_clock::now();
  out.model.emplace(build_tmdp(out.hazards, scenario.phase, scenario.solver));
  out.solution = solve(*out.model);
  out.solve_seconds = seconds_since(started);
  return out;
}

Json summary_json(const TmdpModel& model, const SolveResult& result) {
  Json crossovers = Json::object();
  for (int mask : result.order) {
    const auto& sol = result.states[static_cast<std::size_t>(mask)];
    Json list = Json::array();
    for (double c : sol.policy.crossovers()) list.push_back(detail::round6(c));
    crossovers[model.state_name(sol.state)] = std::move(list);
  }
  return Json{{"initial_state", model.state_name(result.initial_solution().state)},
              {"value_at_start", result.initial_value()},
              {"crossovers", std::move(crossovers)},
              {"policy", policy_to_json(model, result)}};
}

Json bundle_to_json(const RunResult& result, const Scenario& scenario) {
  Json hazards = Json::array();
  for (const auto& h : result.hazards) {
    hazards.push_back({{"id", h.id},
                       {"level", std::string(1, alert_code(h.level))},
                       {"reward", h.reward},
                       {"active", h.level != AlertLevel::kNominal}});
  }
  Json j{{"scenario", scenario_to_json(scenario)},
         {"posteriors", posteriors_to_json(result.belief)},
         {"hazards", std::move(hazards)},
         {"no_active_hazard", result.no_active_hazard}};
  if (result.no_active_hazard) {
    j["notice"] = "no active hazard after thresholding; planner skipped";
  } else {
    Json summary = summary_json(*result.model, *result.solution);
    for (auto& [key, value] : summary.items()) j[key] = value;
  }
  j["metadata"] = {{"generated_at", utc_timestamp()},
                   {"timings",
                    {{"inference_seconds", result.inference_seconds},
                     {"solve_seconds", result.solve_seconds}}}};
  return j;
}

std::string curves_csv(const TmdpModel& model, const StateSolution& sol) {
  std::string out = "t";
  for (const auto& a : sol.curves.actions) out += "," + model.action_name(a);
  out += ",V,policy\n";
  for (int i = 0; i < sol.curves.num_points(); ++i) {
    out += fixed6(model.time_at(i));
    for (Eigen::Index a = 0; a < sol.curves.q.cols(); ++a) {
      out += "," + fixed6(sol.curves.q(i, a));
    }
    out += "," + fixed6(sol.value[i]);
    out += "," + model.action_name(sol.curves.actions[sol.policy.choice[i]]) + "\n";
  }
  return out;
}

std::vector<std::string> export_curves(const TmdpModel& model,
                                       const SolveResult& result,
                                       const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir + "': " + ec.message());
  std::vector<std::string> written;
  for (int mask : result.order) {
    const auto& sol = result.states[static_cast<std::size_t>(mask)];
    std::string path =
        (fs::path(out_dir) / ("state_" + model.state_name(sol.state) + ".csv")).string();
    detail::write_text_file(path, curves_csv(model, sol));
    written.push_back(path);
  }
  std::string summary = (fs::path(out_dir) / "summary.json").string();
  detail::write_text_file(summary, summary_json(model, result).dump(2) + "\n");
  written.push_back(summary);
  return written;
}

std::vector<std::string> write_bundle(const RunResult& result,
                                      const Scenario& scenario,
                                      const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir + "': " + ec.message());
  std::vector<std::string> written;
  std::string bundle = (fs::path(out_dir) / "result.json").string();
  detail::write_text_file(bundle, bundle_to_json(result, scenario).dump(2) + "\n");
  written.push_back(bundle);
  if (!result.no_active_hazard) {
    std::string policy = (fs::path(out_dir) / "policy.json").string();
    detail::write_text_file(
        policy, policy_to_json(*result.model, *result.solution).dump(2) + "\n");
    written.push_back(policy);
    auto curves = export_curves(*result.model, *result.solution,
                                (fs::path(out_dir) / "curves").string());
    written.insert(written.end(), curves.begin(), curves.end());
  }
  return written;
}

std::string key_name(const std::vector<AlertLevel>& key) {
  std::string name;
  for (auto l : key) name += alert_code(l);
  return name;
}

const LookupEntry& LookupTable::lookup(const std::vector<AlertLevel>& key) const {
  if (key.size() != hazards.size()) {
    throw ValidationError("lookup key has wrong length");
  }
  // Entries are stored in odometer order over N<A<C<W<D.
  std::size_t index = 0;
  for (auto l : key) index = index * kNumAlertLevels + static_cast<std::size_t>(ordinal(l));
  if (index >= entries.size() || entries[index].key != key) {
    throw ValidationError("lookup table has no entry " + key_name(key));
  }
  return entries[index];
}

std::string config_hash(const std::vector<std::string>& hazards,
                        const std::vector<double>& rewards,
                        const PhaseOfFlight& phase, const TmdpConfig& config) {
  Json canonical{{"hazards", hazards},
                 {"rewards", rewards},
                 {"phase", phase_json(phase)},
                 {"config", to_json(config)}};
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(canonical.dump())));
  return buf;
}

LookupEntry solve_entry(const std::vector<std::string>& hazards,
                        const std::vector<double>& rewards,
                        const PhaseOfFlight& phase, const TmdpConfig& config,
                        const std::vector<AlertLevel>& key) {
  LookupEntry entry;
  entry.key = key;
  bool any = false;
  std::vector<HazardInput> frame;
  for (std::size_t i = 0; i < hazards.size(); ++i) {
    frame.push_back({hazards[i], key[i], rewards[i]});
    any = any || key[i] != AlertLevel::kNominal;
  }
  if (!any) return entry;
  TmdpModel model = build_tmdp(frame, phase, config);
  SolveResult result = solve(model);
  entry.value = result.initial_value();
  for (const auto& seg : result.initial_solution().policy.segments) {
    entry.policy.push_back({seg.start, seg.end, model.action_name(seg.action)});
  }
  return entry;
}

LookupTable precompute(const HazardMatrix& matrix,
                       const std::vector<std::string>& hazard_subset,
                       const std::vector<double>& rewards,
                       const PhaseOfFlight& phase, const TmdpConfig& config,
                       int max_hazards) {
  if (hazard_subset.empty()) throw ValidationError("no hazards to precompute");
  if (static_cast<int>(hazard_subset.size()) > max_hazards) {
    throw ValidationError("precompute is limited to " + std::to_string(max_hazards) +
                          " hazards");
  }
  if (rewards.size() != hazard_subset.size()) {
    throw ValidationError("one reward per hazard required");
  }
  std::set<std::string> seen;
  for (const auto& h : hazard_subset) {
    matrix.hazard_index(h);
    if (!seen.insert(h).second) throw ValidationError("duplicate hazard '" + h + "'");
  }
  for (double r : rewards) {
    if (!(r > 0.0)) throw ValidationError("hazard rewards must be positive");
  }
  config.validate();

  LookupTable table;
  table.hazards = hazard_subset;
  table.rewards = rewards;
  table.phase = phase;
  table.config = config;
  table.config_hash = config_hash(hazard_subset, rewards, phase, config);

  const std::size_t k = hazard_subset.size();
  std::vector<AlertLevel> key(k, AlertLevel::kNominal);
  while (true) {
    table.entries.push_back(solve_entry(hazard_subset, rewards, phase, config, key));
    std::size_t pos = k;
    while (pos > 0 && key[pos - 1] == AlertLevel::kDirective) {
      key[pos - 1] = AlertLevel::kNominal;
      --pos;
    }
    if (pos == 0) break;
    key[pos - 1] = static_cast<AlertLevel>(ordinal(key[pos - 1]) + 1);
  }
  return table;
}

Json to_json(const LookupTable& table) {
  Json entries = Json::array();
  for (const auto& e : table.entries) {
    Json policy = Json::array();
    for (const auto& seg : e.policy) {
      policy.push_back({{"start", seg.start}, {"end", seg.end}, {"action", seg.action}});
    }
    entries.push_back({{"key", key_name(e.key)}, {"value", e.value}, {"policy", std::move(policy)}});
  }
  return Json{{"hazards", table.hazards},
              {"rewards", table.rewards},
              {"phase", phase_json(table.phase)},
              {"config", to_json(table.config)},
              {"config_hash", table.config_hash},
              {"entries", std::move(entries)}};
}

LookupTable lookup_table_from_json(const Json& doc) {
  LookupTable table;
  const std::string where = "lookup table";
  const Json& hazards = detail::require(doc, "hazards", where);
  const Json& rewards = detail::require(doc, "rewards", where);
  if (!hazards.is_array() || !rewards.is_array()) {
    throw ValidationError(where + ": hazards and rewards must be lists");
  }
  for (const auto& h : hazards) table.hazards.push_back(h.get<std::string>());
  for (const auto& r : rewards) table.rewards.push_back(r.get<double>());
  const Json& phase = detail::require(doc, "phase", where);
  table.phase.phase = parse_phase(detail::require_string(phase, "name", "phase"));
  table.phase.pilot_rate_factor = detail::require_number(phase, "pilot_rate_factor", "phase");
  table.config = config_from_json(detail::require(doc, "config", where));
  table.config_hash = detail::require_string(doc, "config_hash", where);
  if (table.config_hash !=
      config_hash(table.hazards, table.rewards, table.phase, table.config)) {
    throw ValidationError(where + ": config hash mismatch");
  }
  for (const auto& e : detail::require(doc, "entries", where)) {
    LookupEntry entry;
    std::string key = detail::require_string(e, "key", "entry");
    for (char c : key) entry.key.push_back(parse_alert_level(std::string(1, c)));
    entry.value = detail::require_number(e, "value", "entry " + key);
    for (const auto& seg : detail::require(e, "policy", "entry " + key)) {
      entry.policy.push_back({detail::require_number(seg, "start", "segment"),
                              detail::require_number(seg, "end", "segment"),
                              detail::require_string(seg, "action", "segment")});
    }
    table.entries.push_back(std::move(entry));
  }
  return table;
}

}  // namespace alarms
