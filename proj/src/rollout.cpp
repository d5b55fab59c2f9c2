#include <algorithm>
#include <cmath>
#include <random>

#include "alarms/error.hpp"
#include "alarms/solver.hpp"

namespace alarms {

RolloutEstimate rollout(const TmdpModel& model, const SolveResult& result,
                        const TmdpState& initial, std::int64_t n,
                        std::uint64_t seed) {
  if (n < 1) throw ValidationError("rollout needs at least one episode");
  const int start_mask = model.index_of(initial);
  for (int mask = 0; mask < model.num_states(); ++mask) {
    if ((mask & ~start_mask) == 0 &&
        result.states[static_cast<std::size_t>(mask)].policy.segments.empty()) {
      throw ValidationError("solve result does not cover the rollout start state");
    }
  }

  std::mt19937_64 engine(seed);
  const bool serial = model.config().automation == AutomationChannel::kSerial;

  RolloutEstimate est;
  double mean = 0.0;
  double m2 = 0.0;
  for (std::int64_t episode = 1; episode <= n; ++episode) {
    int mask = start_mask;
    double t = 0.0;
    double total = 0.0;
    while (mask != 0 && t <= model.deadline()) {
      const TmdpAction& action =
          result.states[static_cast<std::size_t>(mask)].policy.action_at(t);
      if (!action.addressing()) break;

      double pilot = 0.0;
      double automation = 0.0;
      for (int i = 0; i < model.num_hazards(); ++i) {
        int w = action.assignment[i];
        if (w == 0) continue;
        std::exponential_distribution<double> draw(model.rate(w));
        double d = draw(engine);
        if (w == 1) {
          pilot += d;
        } else if (serial) {
          automation += d;
        } else {
          automation = std::max(automation, d);
        }
      }
      const double arrival = t + std::max(pilot, automation);
      for (int i = 0; i < model.num_hazards(); ++i) {
        int w = action.assignment[i];
        if (w == 0) continue;
        const auto& h = model.hazards()[i];
        if (arrival <= h.deadline) total += h.reward * model.reward_multiplier(w);
        mask &= ~(1 << i);
      }
      t = arrival;
    }
    const double delta = total - mean;
    mean += delta / static_cast<double>(episode);
    m2 += delta * (total - mean);
  }

  est.samples = n;
  est.mean = mean;
  est.variance = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
  est.standard_error = std::sqrt(est.variance / static_cast<double>(n));
  return est;
}

}  // namespace alarms
