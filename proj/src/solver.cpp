#include "alarms/solver.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <map>

#include "alarms/error.hpp"

namespace alarms {

std::vector<double> PolicySchedule::crossovers() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < segments.size(); ++i) {
    out.push_back(segments[i].start);
  }
  return out;
}

const TmdpAction& PolicySchedule::action_at(double t) const {
  if (segments.empty()) throw ValidationError("empty policy");
  for (const auto& seg : segments) {
    if (t < seg.end) return seg.action;
  }
  return segments.back().action;
}

TieBreak TieBreak::identity(int num_hazards) {
  TieBreak tb;
  for (int i = 0; i < num_hazards; ++i) tb.priority.push_back(i);
  return tb;
}

TieBreak TieBreak::for_model(const TmdpModel& model) {
  TieBreak tb = identity(model.num_hazards());
  const auto& hazards = model.hazards();
  std::stable_sort(tb.priority.begin(), tb.priority.end(), [&](int a, int b) {
    if (hazards[a].level != hazards[b].level) {
      return hazards[a].level > hazards[b].level;
    }
    return hazards[a].reward > hazards[b].reward;
  });
  return tb;
}

bool TieBreak::prefers(const TmdpAction& a, const TmdpAction& b) const {
  if (a.total_autonomy() != b.total_autonomy()) {
    return a.total_autonomy() < b.total_autonomy();
  }
  for (int p : priority) {
    if (p < static_cast<int>(a.assignment.size()) &&
        a.assignment[p] != b.assignment[p]) {
      return a.assignment[p] < b.assignment[p];
    }
  }
  return a.assignment < b.assignment;
}

PolicySchedule extract_policy(const QCurveSet& curves, const TieBreak& tie_break) {
  const int cols = static_cast<int>(curves.actions.size());
  if (cols == 0 || curves.q.rows() == 0 || curves.q.cols() != cols) {
    throw ValidationError("empty curve set");
  }
  std::vector<int> candidates;
  for (int a = 0; a < cols; ++a) {
    if (curves.actions[a].addressing()) candidates.push_back(a);
  }
  if (candidates.empty()) {
    for (int a = 0; a < cols; ++a) candidates.push_back(a);
  }

  PolicySchedule policy;
  const int points = static_cast<int>(curves.q.rows());
  policy.choice.resize(static_cast<std::size_t>(points));
  int previous = -1;
  for (int i = 0; i < points; ++i) {
    double best = curves.q(i, candidates.front());
    for (int a : candidates) best = std::max(best, curves.q(i, a));
    int chosen = -1;
    for (int a : candidates) {
      if (curves.q(i, a) != best) continue;
      if (a == previous) {
        chosen = a;
        break;
      }
      if (chosen < 0 || tie_break.prefers(curves.actions[a], curves.actions[chosen])) {
        chosen = a;
      }
    }
    policy.choice[i] = chosen;
    previous = chosen;
  }

  const double step = curves.grid_step;
  const double horizon = (points - 1) * step;
  double start = 0.0;
  for (int i = 1; i <= points; ++i) {
    if (i == points || policy.choice[i] != policy.choice[i - 1]) {
      double end = i == points ? horizon : (i - 0.5) * step;
      policy.segments.push_back({start, end, curves.actions[policy.choice[i - 1]]});
      start = end;
    }
  }
  return policy;
}

SolveResult solve(const TmdpModel& model) {
  return solve(model, model.initial_state());
}

SolveResult solve(const TmdpModel& model, const TmdpState& initial) {
  const auto started = std::chrono::steady_clock::now();
  const int initial_mask = model.index_of(initial);
  const int n = model.steps();
  const TieBreak tie_break = TieBreak::for_model(model);

  SolveResult result;
  result.initial = initial_mask;
  result.states.resize(static_cast<std::size_t>(model.num_states()));

  for (int mask = 0; mask < model.num_states(); ++mask) {
    if ((mask & ~initial_mask) == 0) result.order.push_back(mask);
  }
  std::stable_sort(result.order.begin(), result.order.end(), [](int a, int b) {
    return std::popcount(static_cast<unsigned>(a)) <
           std::popcount(static_cast<unsigned>(b));
  });

  // Joint durations depend only on the multiset of autonomy levels.
  std::map<std::vector<int>, Duration> durations;

  for (int mask : result.order) {
    StateSolution& sol = result.states[static_cast<std::size_t>(mask)];
    sol.state = model.state_at(mask);
    sol.curves.actions = enumerate_actions(model, sol.state);
    sol.curves.grid_step = model.grid_step();
    sol.curves.q = Eigen::MatrixXd::Zero(n + 1, static_cast<Eigen::Index>(sol.curves.actions.size()));

    for (std::size_t a = 0; a < sol.curves.actions.size(); ++a) {
      const TmdpAction& action = sol.curves.actions[a];
      if (!action.addressing()) continue;

      std::vector<int> key;
      for (auto w : action.assignment) {
        if (w > 0) key.push_back(w);
      }
      std::sort(key.begin(), key.end());
      auto it = durations.find(key);
      if (it == durations.end()) {
        it = durations.emplace(key, duration_distribution(model, sol.state, action)).first;
      }
      const Eigen::VectorXd& pmf = it->second.pmf;

      const int next = model.index_of(successor(sol.state, action));
      const Eigen::VectorXd target =
          reward_on_grid(model, sol.state, action) +
          result.states[static_cast<std::size_t>(next)].value;

      auto column = sol.curves.q.col(static_cast<Eigen::Index>(a));
      for (int i = 0; i <= n; ++i) {
        const Eigen::Index len = n - i + 1;
        column[i] = pmf.head(len).dot(target.segment(i, len));
      }
    }

    sol.value = sol.curves.q.rowwise().maxCoeff();
    sol.policy = extract_policy(sol.curves, tie_break);
    result.stats.num_actions += static_cast<int>(sol.curves.actions.size());
  }

  result.stats.num_states = static_cast<int>(result.order.size());
  result.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace alarms
