#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "alarms/alert_level.hpp"
#include "alarms/hazard_matrix.hpp"

namespace alarms {

// Probability mass over the five alert levels, indexed by ordinal.
using LevelDistribution = std::array<double, kNumAlertLevels>;

// P(level >= threshold), summed from the top level down.
double exceedance(const LevelDistribution& dist, AlertLevel threshold);

struct NoiseParams {
  double faithful_prob = 0.9;   // rho: edge transmits min(hazard, cap)
  double leak_advisory = 0.01;  // sensor reports Advisory with no cause
  LevelDistribution prior = {0.9, 0.06, 0.025, 0.01, 0.005};

  // Throws ValidationError when a probability is out of range or the prior
  // is not normalized to 1e-12.
  void validate() const;
};

struct BeliefEdge {
  int hazard;
  int sensor;
  AlertLevel cap;
  double faithful_prob;
};

// Bipartite noisy-MAX network: hazards cause sensor alerts. Each edge
// contributes min(hazard level, cap) with probability faithful_prob, else
// Nominal; a sensor reports the max over its edge effects and a leak that is
// Advisory with probability leak. Immutable once built.
class BeliefNetwork {
 public:
  BeliefNetwork(std::vector<std::string> hazard_ids,
                std::vector<LevelDistribution> priors,
                std::vector<std::string> sensor_ids,
                std::vector<double> leaks, std::vector<BeliefEdge> edges);

  int num_hazards() const { return static_cast<int>(hazard_ids_.size()); }
  int num_sensors() const { return static_cast<int>(sensor_ids_.size()); }
  const std::vector<std::string>& hazard_ids() const { return hazard_ids_; }
  const std::vector<std::string>& sensor_ids() const { return sensor_ids_; }
  const LevelDistribution& prior(int hazard) const { return priors_[hazard]; }
  double leak(int sensor) const { return leaks_[sensor]; }
  const std::vector<BeliefEdge>& edges() const { return edges_; }

  // Edges into one sensor, in hazard order.
  const std::vector<BeliefEdge>& parents(int sensor) const {
    return parents_[sensor];
  }

  int sensor_index(const std::string& id) const;

  // P(sensor <= level | parent levels) via the noisy-MAX product. Parent
  // levels are given in the order of parents(sensor).
  double cumulative(int sensor, int level,
                    const std::vector<AlertLevel>& parent_levels) const;

 private:
  std::vector<std::string> hazard_ids_;
  std::vector<LevelDistribution> priors_;
  std::vector<std::string> sensor_ids_;
  std::vector<double> leaks_;
  std::vector<BeliefEdge> edges_;
  std::vector<std::vector<BeliefEdge>> parents_;
};

BeliefNetwork build_network(const HazardMatrix& matrix,
                            const NoiseParams& params = {});

// Observed sensor levels keyed by sensor id.
struct Evidence {
  std::map<std::string, AlertLevel> observed;
};

enum class UnobservedSensors {
  kNominal,      // a silent sensor is evidence of no alert
  kMarginalize,  // a silent sensor carries no information
};

struct InferenceOptions {
  UnobservedSensors unobserved = UnobservedSensors::kNominal;
  double tau = 0.5;
};

struct HazardBelief {
  std::vector<std::string> hazards;
  std::vector<LevelDistribution> posterior;
  std::vector<AlertLevel> thresholded;

  const LevelDistribution& posterior_of(const std::string& hazard) const;
  AlertLevel thresholded_of(const std::string& hazard) const;
};

// Exact posterior by variable elimination over the hazard variables.
// Throws ValidationError on unknown sensors or zero-probability evidence.
HazardBelief posterior(const BeliefNetwork& network, const Evidence& evidence,
                       const InferenceOptions& options = {});

// Ground truth by enumerating every hazard configuration and, per sensor,
// every edge-noise and leak outcome. Limited to 6 hazards and 10 sensors.
HazardBelief brute_force_posterior(const BeliefNetwork& network,
                                   const Evidence& evidence,
                                   const InferenceOptions& options = {});

// Highest level l >= Advisory with P(level >= l) >= tau, else Nominal.
AlertLevel threshold_level(const LevelDistribution& dist, double tau);
std::map<std::string, AlertLevel> threshold(const HazardBelief& belief,
                                            double tau);

}  // namespace alarms
