#include "alarms/tmdp_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>

#include "alarms/error.hpp"

namespace alarms {

namespace {

constexpr double kTimeTolerance = 1e-9;

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

void check_action(const TmdpModel& model, const TmdpState& state,
                  const TmdpAction& action) {
  if (state.levels.size() != static_cast<std::size_t>(model.num_hazards()) ||
      action.assignment.size() != state.levels.size()) {
    throw ValidationError("state/action size does not match the model");
  }
  for (std::size_t i = 0; i < action.assignment.size(); ++i) {
    if (action.assignment[i] > model.config().autonomy_max) {
      throw ValidationError("autonomy level above autonomy_max");
    }
    if (action.assignment[i] > 0 && state.levels[i] == AlertLevel::kNominal) {
      throw ValidationError("action addresses a Nominal hazard");
    }
  }
}

// Sums in ascending order so that permuted hazards give identical bits.
double sorted_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double total = 0.0;
  for (double t : terms) total += t;
  return total;
}

}  // namespace

std::string_view phase_name(Phase phase) {
  switch (phase) {
    case Phase::kTakeoff: return "Takeoff";
    case Phase::kEnroute: return "Enroute";
    case Phase::kApproach: return "Approach";
    case Phase::kLand: return "Land";
  }
  return "Enroute";
}

Phase parse_phase(std::string_view text) {
  for (Phase p : {Phase::kTakeoff, Phase::kEnroute, Phase::kApproach, Phase::kLand}) {
    if (iequals(text, phase_name(p))) return p;
  }
  if (iequals(text, "Landing")) return Phase::kLand;
  throw ValidationError("unknown phase of flight '" + std::string(text) + "'");
}

double default_pilot_rate_factor(Phase phase) {
  switch (phase) {
    case Phase::kTakeoff: return 0.7;
    case Phase::kEnroute: return 1.0;
    case Phase::kApproach: return 0.8;
    case Phase::kLand: return 0.5;
  }
  return 1.0;
}

PhaseOfFlight make_phase(Phase phase) {
  return {phase, default_pilot_rate_factor(phase)};
}

void TmdpConfig::validate() const {
  if (!(deadline > 0.0) || !std::isfinite(deadline)) {
    throw ValidationError("deadline must be positive");
  }
  grid_steps(deadline, grid_step);
  if (autonomy_max < 1 || autonomy_max > kMaxAutonomy) {
    throw ValidationError("autonomy_max must lie in [1, 3]");
  }
  for (int w = 1; w <= autonomy_max; ++w) {
    if (!(rates[w] > 0.0) || !std::isfinite(rates[w])) {
      throw ValidationError("rates must be positive");
    }
    if (!(reward_multiplier[w] > 0.0 && reward_multiplier[w] <= 1.0)) {
      throw ValidationError("reward multipliers must lie in (0, 1]");
    }
    if (w > 1 && !(rates[w] > rates[w - 1])) {
      throw ValidationError("rates must increase with autonomy level");
    }
    if (w > 1 && !(reward_multiplier[w] < reward_multiplier[w - 1])) {
      throw ValidationError("reward multipliers must decrease with autonomy level");
    }
  }
  if (max_hazards < 1 || max_hazards > 16) {
    throw ValidationError("max_hazards must lie in [1, 16]");
  }
}

bool TmdpState::all_nominal() const {
  return std::all_of(levels.begin(), levels.end(),
                     [](AlertLevel l) { return l == AlertLevel::kNominal; });
}

bool TmdpAction::addressing() const {
  return std::any_of(assignment.begin(), assignment.end(),
                     [](AutonomyLevel w) { return w > 0; });
}

int TmdpAction::total_autonomy() const {
  int total = 0;
  for (auto w : assignment) total += w;
  return total;
}

TmdpModel::TmdpModel(std::vector<HazardInput> frame, PhaseOfFlight phase,
                     TmdpConfig config)
    : frame_(std::move(frame)), phase_(phase), config_(config) {
  config_.validate();
  if (!(phase_.pilot_rate_factor > 0.0)) {
    throw ValidationError("pilot_rate_factor must be positive");
  }
  steps_ = grid_steps(config_.deadline, config_.grid_step);

  for (std::size_t i = 0; i < frame_.size(); ++i) {
    const auto& h = frame_[i];
    if (h.level == AlertLevel::kNominal) continue;
    if (!(h.reward > 0.0) || !std::isfinite(h.reward)) {
      throw ValidationError("reward of active hazard '" + h.id +
                            "' must be positive");
    }
    double window = config_.deadline;
    if (config_.deadline_mode == DeadlineMode::kPerLevel) {
      if (auto bound = timeframe(h.level).max_seconds) {
        window = std::min(window, *bound);
      }
    }
    hazards_.push_back({h.id, h.level, h.reward, static_cast<int>(i), window});
  }
  if (hazards_.empty()) throw ValidationError("no active hazard to plan for");
  if (num_hazards() > config_.max_hazards) {
    throw ValidationError("too many active hazards: " +
                          std::to_string(num_hazards()) + " > " +
                          std::to_string(config_.max_hazards));
  }

  for (const auto& h : hazards_) {
    int index = static_cast<int>(std::floor(h.deadline / config_.grid_step +
                                            kTimeTolerance));
    deadline_index_.push_back(std::min(index, steps_));
  }
  for (int w = 1; w <= config_.autonomy_max; ++w) {
    unit_durations_[w] =
        discretize_exponential(rate(w), config_.grid_step, config_.deadline);
  }
}

double TmdpModel::rate(int autonomy) const {
  if (autonomy < 1 || autonomy > config_.autonomy_max) {
    throw ValidationError("no rate for autonomy level " + std::to_string(autonomy));
  }
  double r = config_.rates[autonomy];
  return autonomy == 1 ? r * phase_.pilot_rate_factor : r;
}

TmdpState TmdpModel::state_at(int index) const {
  if (index < 0 || index >= num_states()) {
    throw ValidationError("state index out of range");
  }
  TmdpState s;
  for (int i = 0; i < num_hazards(); ++i) {
    s.levels.push_back((index >> i) & 1 ? hazards_[i].level : AlertLevel::kNominal);
  }
  return s;
}

int TmdpModel::index_of(const TmdpState& state) const {
  if (state.levels.size() != static_cast<std::size_t>(num_hazards())) {
    throw ValidationError("state size does not match the model");
  }
  int index = 0;
  for (int i = 0; i < num_hazards(); ++i) {
    if (state.levels[i] == AlertLevel::kNominal) continue;
    if (state.levels[i] != hazards_[i].level) {
      throw ValidationError("state not reachable from the initial levels");
    }
    index |= 1 << i;
  }
  return index;
}

std::string TmdpModel::state_name(const TmdpState& state) const {
  std::string name(frame_.size(), 'N');
  for (int i = 0; i < num_hazards(); ++i) {
    name[static_cast<std::size_t>(hazards_[i].frame_index)] = alert_code(state.levels[i]);
  }
  return name;
}

std::string TmdpModel::action_name(const TmdpAction& action) const {
  std::string name = "L" + std::string(frame_.size(), '0');
  for (int i = 0; i < num_hazards(); ++i) {
    name[static_cast<std::size_t>(hazards_[i].frame_index) + 1] =
        static_cast<char>('0' + action.assignment[i]);
  }
  return name;
}

TmdpAction TmdpModel::parse_action_name(std::string_view name) const {
  if (name.size() != frame_.size() + 1 || name[0] != 'L') {
    throw ValidationError("malformed action name '" + std::string(name) + "'");
  }
  TmdpAction action;
  action.assignment.assign(static_cast<std::size_t>(num_hazards()), 0);
  std::vector<bool> active(frame_.size(), false);
  for (int i = 0; i < num_hazards(); ++i) {
    int digit = name[static_cast<std::size_t>(hazards_[i].frame_index) + 1] - '0';
    if (digit < 0 || digit > config_.autonomy_max) {
      throw ValidationError("bad autonomy digit in '" + std::string(name) + "'");
    }
    action.assignment[i] = static_cast<AutonomyLevel>(digit);
    active[static_cast<std::size_t>(hazards_[i].frame_index)] = true;
  }
  for (std::size_t j = 0; j < frame_.size(); ++j) {
    if (!active[j] && name[j + 1] != '0') {
      throw ValidationError("action addresses an inactive hazard");
    }
  }
  return action;
}

TmdpModel build_tmdp(const std::vector<HazardInput>& hazards,
                     const PhaseOfFlight& phase, const TmdpConfig& config) {
  return TmdpModel(hazards, phase, config);
}

std::vector<TmdpAction> enumerate_actions(const TmdpModel& model,
                                          const TmdpState& state) {
  const int k = model.num_hazards();
  if (state.levels.size() != static_cast<std::size_t>(k)) {
    throw ValidationError("state size does not match the model");
  }
  std::vector<int> limit(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    limit[i] = state.levels[i] == AlertLevel::kNominal ? 0 : model.config().autonomy_max;
  }

  std::vector<TmdpAction> actions;
  TmdpAction current;
  current.assignment.assign(static_cast<std::size_t>(k), 0);
  while (true) {
    bool keep = true;
    if (model.config().coverage == ActionCoverage::kFull && current.addressing()) {
      for (int i = 0; i < k; ++i) {
        if (limit[i] > 0 && current.assignment[i] == 0) keep = false;
      }
    }
    if (keep) actions.push_back(current);
    // Odometer with the first hazard as the most significant digit.
    int pos = k - 1;
    while (pos >= 0 && current.assignment[pos] == limit[pos]) {
      current.assignment[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++current.assignment[pos];
  }
  return actions;
}

TmdpState successor(const TmdpState& state, const TmdpAction& action) {
  if (state.levels.size() != action.assignment.size()) {
    throw ValidationError("state/action size mismatch");
  }
  TmdpState next = state;
  for (std::size_t i = 0; i < next.levels.size(); ++i) {
    if (action.assignment[i] > 0) next.levels[i] = AlertLevel::kNominal;
  }
  return next;
}

Duration duration_distribution(const TmdpModel& model, const TmdpState& state,
                               const TmdpAction& action) {
  check_action(model, state, action);
  if (!action.addressing()) {
    throw ValidationError("the no-op has no duration");
  }
  std::vector<int> levels;
  for (auto w : action.assignment) {
    if (w > 0) levels.push_back(w);
  }
  std::sort(levels.begin(), levels.end());

  std::optional<Duration> pilot;
  std::optional<Duration> automation;
  for (int w : levels) {
    const Duration& unit = model.unit_duration(w);
    if (w == 1) {
      pilot = pilot ? convolve(*pilot, unit) : unit;
    } else if (!automation) {
      automation = unit;
    } else if (model.config().automation == AutomationChannel::kSerial) {
      automation = convolve(*automation, unit);
    } else {
      automation = max_combine(*automation, unit);
    }
  }
  if (pilot && automation) return max_combine(*pilot, *automation);
  return pilot ? *pilot : *automation;
}

double reward(const TmdpModel& model, const TmdpState& state,
              const TmdpAction& action, double t) {
  check_action(model, state, action);
  if (!(t >= 0.0)) throw ValidationError("arrival time must be non-negative");
  std::vector<double> terms;
  for (int i = 0; i < model.num_hazards(); ++i) {
    int w = action.assignment[i];
    if (w == 0) continue;
    const auto& h = model.hazards()[i];
    if (t <= h.deadline + kTimeTolerance) {
      terms.push_back(h.reward * model.reward_multiplier(w));
    }
  }
  return sorted_sum(terms);
}

Eigen::VectorXd reward_on_grid(const TmdpModel& model, const TmdpState& state,
                               const TmdpAction& action) {
  check_action(model, state, action);
  Eigen::VectorXd out(model.steps() + 1);
  std::vector<double> terms;
  for (int j = 0; j <= model.steps(); ++j) {
    terms.clear();
    for (int i = 0; i < model.num_hazards(); ++i) {
      int w = action.assignment[i];
      if (w == 0 || j > model.deadline_index(i)) continue;
      terms.push_back(model.hazards()[i].reward * model.reward_multiplier(w));
    }
    out[j] = sorted_sum(terms);
  }
  return out;
}

}  // namespace alarms
