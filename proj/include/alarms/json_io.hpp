#pragma once

#include <string>

#include "json.hpp"

#include "alarms/belief_net.hpp"
#include "alarms/solver.hpp"
#include "alarms/tmdp_model.hpp"

namespace alarms {

using Json = nlohmann::ordered_json;

Json to_json(const LevelDistribution& dist);
LevelDistribution distribution_from_json(const Json& j, const std::string& where);

Json to_json(const NoiseParams& params);
// Fields absent from j keep the values in base.
NoiseParams noise_from_json(const Json& j, NoiseParams base = {});

// {hazard: {"levels": {"N": p, ...}, "thresholded": "C"}}
Json posteriors_to_json(const HazardBelief& belief);

Json to_json(const TmdpConfig& config);
// Accepts delta (or grid_step), deadline, autonomy_max, deadline_mode,
// automation_channel, action_coverage, rates, reward_multipliers,
// max_hazards.
TmdpConfig config_from_json(const Json& j, TmdpConfig base = {});

std::string to_string(DeadlineMode mode);
std::string to_string(AutomationChannel channel);
std::string to_string(ActionCoverage coverage);

// Policy of every solved state: [{state, segments: [{start, end, action}]}],
// times rounded to 6 decimals.
Json policy_to_json(const TmdpModel& model, const SolveResult& result);
Json segments_to_json(const TmdpModel& model, const PolicySchedule& policy,
                      bool round_times);

// Debug view of the instantiated model.
Json model_to_json(const TmdpModel& model);

// Every default constant: rates, multipliers, phase factors, tau, deadline,
// grid step, noise parameters.
Json defaults_json();

}  // namespace alarms
