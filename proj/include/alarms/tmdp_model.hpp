#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "alarms/alert_level.hpp"
#include "alarms/duration.hpp"

namespace alarms {

// Who handles a hazard: 0 not addressed, 1 pilot-intensive, 2..3 automated
// (faster, lower reward).
using AutonomyLevel = std::uint8_t;
inline constexpr int kMaxAutonomy = 3;

enum class Phase { kTakeoff, kEnroute, kApproach, kLand };

std::string_view phase_name(Phase phase);
Phase parse_phase(std::string_view text);

struct PhaseOfFlight {
  Phase phase = Phase::kEnroute;
  double pilot_rate_factor = 1.0;  // scales the pilot rate only
};

// Default pilot attentiveness factors: Takeoff 0.7, Enroute 1.0,
// Approach 0.8, Land 0.5.
double default_pilot_rate_factor(Phase phase);
PhaseOfFlight make_phase(Phase phase);

enum class DeadlineMode {
  kGlobal,    // every hazard pays until the deadline
  kPerLevel,  // capped by the urgency timeframe of the hazard's level
};

enum class AutomationChannel {
  kSerial,    // one automation resource works through its hazards in turn
  kParallel,  // every automated hazard proceeds independently
};

enum class ActionCoverage {
  kFull,     // addressing actions assign autonomy >= 1 to every active hazard
  kPartial,  // any per-hazard assignment, including leaving hazards for later
};

struct TmdpConfig {
  double deadline = 20.0;
  double grid_step = 0.01;
  int autonomy_max = 2;
  // Indexed by autonomy level; entry 0 unused.
  std::array<double, kMaxAutonomy + 1> rates = {0.0, 0.15, 0.4, 0.8};
  std::array<double, kMaxAutonomy + 1> reward_multiplier = {0.0, 1.0, 0.5, 0.25};
  DeadlineMode deadline_mode = DeadlineMode::kGlobal;
  AutomationChannel automation = AutomationChannel::kSerial;
  ActionCoverage coverage = ActionCoverage::kFull;
  int max_hazards = 4;

  // Throws ValidationError on any broken invariant.
  void validate() const;
};

struct HazardInput {
  std::string id;
  AlertLevel level = AlertLevel::kNominal;
  double reward = 0.0;
};

// Alert level per active hazard, in model order.
struct TmdpState {
  std::vector<AlertLevel> levels;

  bool all_nominal() const;
  friend bool operator==(const TmdpState&, const TmdpState&) = default;
};

// Autonomy level per active hazard, in model order.
struct TmdpAction {
  std::vector<AutonomyLevel> assignment;

  bool addressing() const;
  int total_autonomy() const;
  friend bool operator==(const TmdpAction&, const TmdpAction&) = default;
  friend auto operator<=>(const TmdpAction&, const TmdpAction&) = default;
};

using Duration = DurationDistribution<double>;

struct ActiveHazard {
  std::string id;
  AlertLevel level;  // initial level
  double reward;
  int frame_index;   // position among all hazards given to build_tmdp
  double deadline;   // reward window end, seconds
};

// The planning problem over the non-Nominal hazards. States are identified by
// which active hazards are still at their initial level, so a state index is
// a bitmask (bit i set = hazard i unresolved) in [0, 2^k).
class TmdpModel {
 public:
  TmdpModel(std::vector<HazardInput> frame, PhaseOfFlight phase,
            TmdpConfig config);

  const TmdpConfig& config() const { return config_; }
  const PhaseOfFlight& phase() const { return phase_; }
  const std::vector<ActiveHazard>& hazards() const { return hazards_; }
  const std::vector<HazardInput>& frame() const { return frame_; }
  int num_hazards() const { return static_cast<int>(hazards_.size()); }
  int steps() const { return steps_; }
  double grid_step() const { return config_.grid_step; }
  double deadline() const { return config_.deadline; }
  double time_at(int index) const { return index * config_.grid_step; }

  int num_states() const { return 1 << num_hazards(); }
  int initial_index() const { return num_states() - 1; }
  TmdpState state_at(int index) const;
  int index_of(const TmdpState& state) const;
  TmdpState initial_state() const { return state_at(initial_index()); }

  // Effective exponential rate for one hazard at an autonomy level; the
  // pilot rate is scaled by the phase factor.
  double rate(int autonomy) const;
  double reward_multiplier(int autonomy) const {
    return config_.reward_multiplier[autonomy];
  }
  const Duration& unit_duration(int autonomy) const {
    return unit_durations_[autonomy];
  }

  // Last grid index at which hazard i still pays.
  int deadline_index(int hazard) const { return deadline_index_[hazard]; }

  // Names over the full hazard frame given to build_tmdp, so dropped
  // Nominal hazards appear as N / 0: "CA", "L12".
  std::string state_name(const TmdpState& state) const;
  std::string action_name(const TmdpAction& action) const;
  TmdpAction parse_action_name(std::string_view name) const;

 private:
  std::vector<HazardInput> frame_;
  std::vector<ActiveHazard> hazards_;
  PhaseOfFlight phase_;
  TmdpConfig config_;
  int steps_;
  std::vector<int> deadline_index_;
  std::array<Duration, kMaxAutonomy + 1> unit_durations_;
};

// Keeps the non-Nominal hazards of `hazards` in order. Throws
// ValidationError if none is active, more than config.max_hazards are, or an
// active hazard has a non-positive reward.
TmdpModel build_tmdp(const std::vector<HazardInput>& hazards,
                     const PhaseOfFlight& phase, const TmdpConfig& config = {});

// Lexicographic by assignment digits; the no-op comes first.
std::vector<TmdpAction> enumerate_actions(const TmdpModel& model,
                                          const TmdpState& state);

// Addressed hazards become Nominal; the rest keep their level.
TmdpState successor(const TmdpState& state, const TmdpAction& action);

// Joint duration: pilot hazards in series, automated hazards on the
// automation channel, pilot and automation in parallel. Throws for the
// no-op.
Duration duration_distribution(const TmdpModel& model, const TmdpState& state,
                               const TmdpAction& action);

// Reward credited when the transition completes at time t.
double reward(const TmdpModel& model, const TmdpState& state,
              const TmdpAction& action, double t);

// reward() sampled at every grid point.
Eigen::VectorXd reward_on_grid(const TmdpModel& model, const TmdpState& state,
                               const TmdpAction& action);

}  // namespace alarms
