#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "alarms/tmdp_model.hpp"

namespace alarms {

// Q(s, a, t) for every action of one state, one column per action, one row
// per grid point t = i * step.
struct QCurveSet {
  std::vector<TmdpAction> actions;
  Eigen::MatrixXd q;
  double grid_step = 0.0;

  int num_points() const { return static_cast<int>(q.rows()); }
};

struct PolicySegment {
  double start;
  double end;
  TmdpAction action;
};

struct PolicySchedule {
  std::vector<PolicySegment> segments;  // partition of [0, deadline]
  std::vector<int> choice;              // argmax column per grid point

  // Segment boundaries strictly inside (0, deadline).
  std::vector<double> crossovers() const;
  // Action in force at time t (segments are half-open except the last).
  const TmdpAction& action_at(double t) const;
};

// Ordering used for exact Q ties, after preferring the action chosen at the
// previous grid point: lowest total autonomy, then the assignment read in
// hazard-priority order (pilot on the higher-priority hazards first), then
// lexicographic assignment. The no-op is never chosen while an addressing
// action exists.
struct TieBreak {
  std::vector<int> priority;  // hazard indices, most important first

  static TieBreak identity(int num_hazards);
  // Higher initial alert level first, then higher reward, then model order.
  static TieBreak for_model(const TmdpModel& model);

  // True when a should win a tie against b.
  bool prefers(const TmdpAction& a, const TmdpAction& b) const;
};

struct StateSolution {
  TmdpState state;
  QCurveSet curves;
  Eigen::VectorXd value;  // V(s, t) on the grid
  PolicySchedule policy;
};

struct SolveStats {
  double wall_seconds = 0.0;
  int num_states = 0;
  int num_actions = 0;  // summed over states
};

struct SolveResult {
  // Indexed by TmdpModel state index; states not reachable from the initial
  // state are left empty.
  std::vector<StateSolution> states;
  std::vector<int> order;  // solved state indices, in solve order
  int initial = 0;
  SolveStats stats;

  const StateSolution& initial_solution() const { return states[initial]; }
  double initial_value() const { return initial_solution().value[0]; }
};

// Backward induction over the state DAG (states with fewer unresolved
// hazards first). Exact single pass on the grid:
//   Q(s,a,t_i) = sum_k d[k] * (R(s,a,t_i + k*step) + V(s', t_i + k*step)),
// with reward and value zero past the deadline and the no-op Q identically 0.
SolveResult solve(const TmdpModel& model, const TmdpState& initial);
SolveResult solve(const TmdpModel& model);

// Grid argmax with the tie-break rule; boundaries sit midway between the last
// grid point of one action and the first of the next.
PolicySchedule extract_policy(const QCurveSet& curves, const TieBreak& tie_break);

// Q(t) = reward_value * (1 - exp(-rate * (deadline - t))) on the grid.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> closed_form_single(Scalar rate,
                                                            Scalar reward_value,
                                                            Scalar deadline,
                                                            Scalar step) {
  const int n = grid_steps(static_cast<double>(deadline), static_cast<double>(step));
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> q(n + 1);
  for (int i = 0; i <= n; ++i) {
    Scalar remaining = static_cast<Scalar>(n - i) * step;
    q[i] = reward_value * (Scalar{1} - std::exp(-rate * remaining));
  }
  return q;
}

struct RolloutEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  double variance = 0.0;
  std::int64_t samples = 0;
};

// Simulates the policy schedule of every state in continuous time with
// exponential per-hazard durations composed as in duration_distribution.
// Reproducible for a given seed.
RolloutEstimate rollout(const TmdpModel& model, const SolveResult& result,
                        const TmdpState& initial, std::int64_t n,
                        std::uint64_t seed);

}  // namespace alarms
