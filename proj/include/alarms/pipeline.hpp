#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "alarms/belief_net.hpp"
#include "alarms/hazard_matrix.hpp"
#include "alarms/json_io.hpp"
#include "alarms/solver.hpp"
#include "alarms/tmdp_model.hpp"

namespace alarms {

// One what-if configuration: sensor evidence, reward sliders, phase of
// flight and solver settings, against a hazard matrix.
struct Scenario {
  std::string matrix_path;  // resolved against the scenario file's directory
  Evidence evidence;
  std::map<std::string, double> sensor_rewards;  // absent sensors: 1.0
  PhaseOfFlight phase = make_phase(Phase::kEnroute);
  double tau = 0.5;
  UnobservedSensors unobserved = UnobservedSensors::kNominal;
  NoiseParams noise;
  TmdpConfig solver;

  // Throws ValidationError if evidence or rewards name unknown sensors or a
  // reward is negative.
  void validate_against(const HazardMatrix& matrix) const;
};

inline constexpr double kDefaultSensorReward = 1.0;

// Parses scenario JSON. `matrix` may be omitted when allow_missing_matrix
// (service requests carry none).
Scenario parse_scenario(const Json& doc, const std::string& base_dir,
                        bool allow_missing_matrix = false);
Scenario load_scenario_file(const std::string& path);
Json scenario_to_json(const Scenario& scenario);

struct RunResult {
  HazardBelief belief;
  std::vector<HazardInput> hazards;  // matrix order, thresholded levels
  bool no_active_hazard = false;
  std::optional<TmdpModel> model;
  std::optional<SolveResult> solution;
  double inference_seconds = 0.0;
  double solve_seconds = 0.0;
};

// Hazard reward: the max over the sensors wired to the hazard.
double hazard_reward(const HazardMatrix& matrix, int hazard,
                     const std::map<std::string, double>& sensor_rewards);

// infer -> threshold -> hazard rewards -> build_tmdp -> solve. When no
// hazard survives thresholding the planner is skipped and no_active_hazard
// is set.
RunResult run(const Scenario& scenario, const HazardMatrix& matrix);

// Result bundle. Wall-clock timings and the timestamp live under
// "metadata"; everything else is deterministic.
Json bundle_to_json(const RunResult& result, const Scenario& scenario);

// Per-state curve CSVs (t, one column per action, V, policy) plus
// summary.json. Returns written file paths.
std::vector<std::string> export_curves(const TmdpModel& model,
                                       const SolveResult& result,
                                       const std::string& out_dir);
std::string curves_csv(const TmdpModel& model, const StateSolution& solution);
Json summary_json(const TmdpModel& model, const SolveResult& result);

// Writes result.json, policy.json and (when solved) the curves.
std::vector<std::string> write_bundle(const RunResult& result,
                                      const Scenario& scenario,
                                      const std::string& out_dir);

struct LookupSegment {
  double start;
  double end;
  std::string action;  // L-notation over the table's hazards

  friend bool operator==(const LookupSegment&, const LookupSegment&) = default;
};

struct LookupEntry {
  std::vector<AlertLevel> key;
  double value = 0.0;                  // V(initial, 0)
  std::vector<LookupSegment> policy;   // initial state; empty for all-Nominal

  friend bool operator==(const LookupEntry&, const LookupEntry&) = default;
};

struct LookupTable {
  std::vector<std::string> hazards;
  std::vector<double> rewards;
  PhaseOfFlight phase;
  TmdpConfig config;
  std::string config_hash;
  std::vector<LookupEntry> entries;  // all 5^k keys, lexicographic

  const LookupEntry& lookup(const std::vector<AlertLevel>& key) const;
};

std::string key_name(const std::vector<AlertLevel>& key);

// Stable hash of the hazards, rewards, phase and solver config.
std::string config_hash(const std::vector<std::string>& hazards,
                        const std::vector<double>& rewards,
                        const PhaseOfFlight& phase, const TmdpConfig& config);

inline constexpr int kMaxLookupHazards = 3;

// Solves every initial level combination of the hazard subset.
LookupTable precompute(const HazardMatrix& matrix,
                       const std::vector<std::string>& hazard_subset,
                       const std::vector<double>& rewards,
                       const PhaseOfFlight& phase, const TmdpConfig& config,
                       int max_hazards = kMaxLookupHazards);

// The entry a direct solve would produce for one key.
LookupEntry solve_entry(const std::vector<std::string>& hazards,
                        const std::vector<double>& rewards,
                        const PhaseOfFlight& phase, const TmdpConfig& config,
                        const std::vector<AlertLevel>& key);

Json to_json(const LookupTable& table);
LookupTable lookup_table_from_json(const Json& doc);

}  // namespace alarms
