#include "alarms/json_io.hpp"

#include "alarms/error.hpp"
#include "json_util.hpp"

namespace alarms {

namespace {

std::string level_key(AlertLevel level) { return std::string(1, alert_code(level)); }

template <typename Enum>
Enum enum_from_json(const Json& j, const std::string& where,
                    std::initializer_list<std::pair<const char*, Enum>> options) {
  if (!j.is_string()) throw ValidationError(where + ": expected a string");
  std::string text = j.get<std::string>();
  for (const auto& [name, value] : options) {
    if (text == name) return value;
  }
  throw ValidationError(where + ": unknown value '" + text + "'");
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ValidationError(where + ": expected a number");
  return j.get<double>();
}

// Autonomy-indexed table given as {"1": x, "2": y} or [x, y, z].
void autonomy_table(const Json& j, const std::string& where,
                    std::array<double, kMaxAutonomy + 1>& out) {
  if (j.is_array()) {
    if (j.size() > static_cast<std::size_t>(kMaxAutonomy)) {
      throw ValidationError(where + ": at most 3 entries");
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
      out[i + 1] = number(j[i], where + "[" + std::to_string(i) + "]");
    }
    return;
  }
  if (!j.is_object()) throw ValidationError(where + ": expected an object or list");
  for (const auto& [key, value] : j.items()) {
    int level = key.size() == 1 ? key[0] - '0' : -1;
    if (level < 1 || level > kMaxAutonomy) {
      throw ValidationError(where + ": bad autonomy level '" + key + "'");
    }
    out[level] = number(value, where + "." + key);
  }
}

Json autonomy_table_json(const std::array<double, kMaxAutonomy + 1>& table,
                         int autonomy_max) {
  Json j = Json::object();
  for (int w = 1; w <= autonomy_max; ++w) j[std::to_string(w)] = table[w];
  return j;
}

}  // namespace

Json to_json(const LevelDistribution& dist) {
  Json j = Json::object();
  for (auto level : kAllAlertLevels) j[level_key(level)] = dist[ordinal(level)];
  return j;
}

LevelDistribution distribution_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + ": expected an object");
  LevelDistribution dist{};
  for (const auto& [key, value] : j.items()) {
    AlertLevel level;
    try {
      level = parse_alert_level(key);
    } catch (const ValidationError&) {
      throw ValidationError(where + ": unknown alert level '" + key + "'");
    }
    dist[ordinal(level)] = number(value, where + "." + key);
  }
  return dist;
}

Json to_json(const NoiseParams& params) {
  return Json{{"faithful_prob", params.faithful_prob},
              {"leak_advisory", params.leak_advisory},
              {"prior", to_json(params.prior)}};
}

NoiseParams noise_from_json(const Json& j, NoiseParams base) {
  if (!j.is_object()) throw ValidationError("noise: expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "faithful_prob") {
      base.faithful_prob = number(value, "noise.faithful_prob");
    } else if (key == "leak_advisory") {
      base.leak_advisory = number(value, "noise.leak_advisory");
    } else if (key == "prior") {
      base.prior = distribution_from_json(value, "noise.prior");
    } else {
      throw ValidationError("noise: unknown field '" + key + "'");
    }
  }
  try {
    base.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("noise: ") + e.what());
  }
  return base;
}

Json posteriors_to_json(const HazardBelief& belief) {
  Json j = Json::object();
  for (std::size_t h = 0; h < belief.hazards.size(); ++h) {
    j[belief.hazards[h]] = {{"levels", to_json(belief.posterior[h])},
                            {"thresholded", level_key(belief.thresholded[h])}};
  }
  return j;
}

std::string to_string(DeadlineMode mode) {
  return mode == DeadlineMode::kGlobal ? "global" : "per_level";
}

std::string to_string(AutomationChannel channel) {
  return channel == AutomationChannel::kSerial ? "serial" : "parallel";
}

std::string to_string(ActionCoverage coverage) {
  return coverage == ActionCoverage::kFull ? "full" : "partial";
}

Json to_json(const TmdpConfig& config) {
  return Json{{"deadline", config.deadline},
              {"delta", config.grid_step},
              {"autonomy_max", config.autonomy_max},
              {"rates", autonomy_table_json(config.rates, kMaxAutonomy)},
              {"reward_multipliers",
               autonomy_table_json(config.reward_multiplier, kMaxAutonomy)},
              {"deadline_mode", to_string(config.deadline_mode)},
              {"automation_channel", to_string(config.automation)},
              {"action_coverage", to_string(config.coverage)},
              {"max_hazards", config.max_hazards}};
}

TmdpConfig config_from_json(const Json& j, TmdpConfig base) {
  if (!j.is_object()) throw ValidationError("solver: expected an object");
  for (const auto& [key, value] : j.items()) {
    const std::string where = "solver." + key;
    if (key == "delta" || key == "grid_step") {
      base.grid_step = number(value, where);
    } else if (key == "deadline") {
      base.deadline = number(value, where);
    } else if (key == "autonomy_max") {
      if (!value.is_number_integer()) throw ValidationError(where + ": expected an integer");
      base.autonomy_max = value.get<int>();
    } else if (key == "max_hazards") {
      if (!value.is_number_integer()) throw ValidationError(where + ": expected an integer");
      base.max_hazards = value.get<int>();
    } else if (key == "rates") {
      autonomy_table(value, where, base.rates);
    } else if (key == "reward_multipliers") {
      autonomy_table(value, where, base.reward_multiplier);
    } else if (key == "deadline_mode") {
      base.deadline_mode = enum_from_json<DeadlineMode>(
          value, where, {{"global", DeadlineMode::kGlobal},
                         {"per_level", DeadlineMode::kPerLevel}});
    } else if (key == "automation_channel") {
      base.automation = enum_from_json<AutomationChannel>(
          value, where, {{"serial", AutomationChannel::kSerial},
                         {"parallel", AutomationChannel::kParallel}});
    } else if (key == "action_coverage") {
      base.coverage = enum_from_json<ActionCoverage>(
          value, where, {{"full", ActionCoverage::kFull},
                         {"partial", ActionCoverage::kPartial}});
    } else {
      throw ValidationError("solver: unknown field '" + key + "'");
    }
  }
  try {
    base.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("solver: ") + e.what());
  }
  return base;
}

Json segments_to_json(const TmdpModel& model, const PolicySchedule& policy,
                      bool round_times) {
  Json segments = Json::array();
  for (const auto& seg : policy.segments) {
    segments.push_back(
        {{"start", round_times ? detail::round6(seg.start) : seg.start},
         {"end", round_times ? detail::round6(seg.end) : seg.end},
         {"action", model.action_name(seg.action)}});
  }
  return segments;
}

Json policy_to_json(const TmdpModel& model, const SolveResult& result) {
  Json out = Json::array();
  for (int mask : result.order) {
    const auto& sol = result.states[static_cast<std::size_t>(mask)];
    out.push_back({{"state", model.state_name(sol.state)},
                   {"segments", segments_to_json(model, sol.policy, true)}});
  }
  return out;
}

Json model_to_json(const TmdpModel& model) {
  Json hazards = Json::array();
  for (int i = 0; i < model.num_hazards(); ++i) {
    const auto& h = model.hazards()[i];
    hazards.push_back({{"id", h.id},
                       {"level", level_key(h.level)},
                       {"reward", h.reward},
                       {"reward_deadline", h.deadline}});
  }
  Json rates = Json::object();
  for (int w = 1; w <= model.config().autonomy_max; ++w) {
    rates[std::to_string(w)] = model.rate(w);
  }
  Json states = Json::array();
  for (int mask = 0; mask < model.num_states(); ++mask) {
    TmdpState s = model.state_at(mask);
    Json actions = Json::array();
    for (const auto& a : enumerate_actions(model, s)) {
      Json entry{{"action", model.action_name(a)},
                 {"successor", model.state_name(successor(s, a))}};
      if (a.addressing()) {
        Duration d = duration_distribution(model, s, a);
        entry["duration_mean_on_grid"] = d.mean_on_grid(model.grid_step());
        entry["duration_overflow"] = d.overflow;
        entry["reward_at_start"] = reward(model, s, a, 0.0);
      }
      actions.push_back(std::move(entry));
    }
    states.push_back({{"state", model.state_name(s)}, {"actions", std::move(actions)}});
  }
  return Json{{"hazards", std::move(hazards)},
              {"phase", std::string(phase_name(model.phase().phase))},
              {"pilot_rate_factor", model.phase().pilot_rate_factor},
              {"effective_rates", std::move(rates)},
              {"config", to_json(model.config())},
              {"grid_points", model.steps() + 1},
              {"states", std::move(states)}};
}

Json defaults_json() {
  TmdpConfig config;
  Json phases = Json::object();
  for (Phase p : {Phase::kTakeoff, Phase::kEnroute, Phase::kApproach, Phase::kLand}) {
    phases[std::string(phase_name(p))] = default_pilot_rate_factor(p);
  }
  Json timeframes = Json::object();
  for (auto level : {AlertLevel::kAdvisory, AlertLevel::kCaution,
                     AlertLevel::kWarning, AlertLevel::kDirective}) {
    auto tf = timeframe(level);
    timeframes[level_key(level)] = tf.max_seconds ? Json(*tf.max_seconds) : Json(nullptr);
  }
  return Json{{"tau", InferenceOptions{}.tau},
              {"deadline", config.deadline},
              {"delta", config.grid_step},
              {"autonomy_max", config.autonomy_max},
              {"rates", autonomy_table_json(config.rates, kMaxAutonomy)},
              {"reward_multipliers",
               autonomy_table_json(config.reward_multiplier, kMaxAutonomy)},
              {"phase_factors", std::move(phases)},
              {"urgency_timeframes", std::move(timeframes)},
              {"noise", to_json(NoiseParams{})},
              {"deadline_mode", to_string(config.deadline_mode)},
              {"automation_channel", to_string(config.automation)},
              {"action_coverage", to_string(config.coverage)},
              {"max_hazards", config.max_hazards},
              {"sensor_reward", 1.0}};
}

}  // namespace alarms
