#include "alarms/belief_net.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "alarms/error.hpp"

namespace alarms {

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

void check_distribution(const LevelDistribution& dist, const std::string& what) {
  double total = 0.0;
  for (double p : dist) {
    if (!is_probability(p)) {
      throw ValidationError(what + ": probability out of range");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ValidationError(what + ": must sum to 1");
  }
  if (dist[0] <= 0.0) throw ValidationError(what + ": P(Nominal) must be > 0");
}

// Discrete factor over hazard variables, each with kNumAlertLevels states.
// vars are sorted ascending; the first var is the most significant digit.
struct Factor {
  std::vector<int> vars;
  std::vector<double> table;

  static std::size_t size_for(std::size_t nvars) {
    std::size_t n = 1;
    for (std::size_t i = 0; i < nvars; ++i) n *= kNumAlertLevels;
    return n;
  }
};

// Decodes a table index into per-variable levels.
void decode(std::size_t index, std::vector<int>& levels) {
  for (std::size_t i = levels.size(); i-- > 0;) {
    levels[i] = static_cast<int>(index % kNumAlertLevels);
    index /= kNumAlertLevels;
  }
}

std::size_t encode_subset(const std::vector<int>& union_vars,
                          const std::vector<int>& union_levels,
                          const std::vector<int>& subset_vars) {
  std::size_t index = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < union_vars.size() && j < subset_vars.size(); ++i) {
    if (union_vars[i] == subset_vars[j]) {
      index = index * kNumAlertLevels + static_cast<std::size_t>(union_levels[i]);
      ++j;
    }
  }
  return index;
}

Factor multiply(const Factor& a, const Factor& b) {
  Factor out;
  std::set_union(a.vars.begin(), a.vars.end(), b.vars.begin(), b.vars.end(),
                 std::back_inserter(out.vars));
  out.table.resize(Factor::size_for(out.vars.size()));
  std::vector<int> levels(out.vars.size());
  for (std::size_t i = 0; i < out.table.size(); ++i) {
    decode(i, levels);
    out.table[i] = a.table[encode_subset(out.vars, levels, a.vars)] *
                   b.table[encode_subset(out.vars, levels, b.vars)];
  }
  return out;
}

Factor sum_out(const Factor& f, int var) {
  Factor out;
  for (int v : f.vars) {
    if (v != var) out.vars.push_back(v);
  }
  out.table.assign(Factor::size_for(out.vars.size()), 0.0);
  std::vector<int> levels(f.vars.size());
  for (std::size_t i = 0; i < f.table.size(); ++i) {
    decode(i, levels);
    out.table[encode_subset(f.vars, levels, out.vars)] += f.table[i];
  }
  return out;
}

// Observed level per sensor, or nullopt when the sensor is marginalized.
std::vector<std::optional<int>> resolve_evidence(const BeliefNetwork& network,
                                                 const Evidence& evidence,
                                                 UnobservedSensors mode) {
  std::vector<std::optional<int>> observed(network.num_sensors());
  if (mode == UnobservedSensors::kNominal) {
    std::fill(observed.begin(), observed.end(), 0);
  }
  for (const auto& [id, level] : evidence.observed) {
    observed[network.sensor_index(id)] = ordinal(level);
  }
  return observed;
}

double sensor_likelihood(const BeliefNetwork& network, int sensor, int level,
                         const std::vector<AlertLevel>& parent_levels) {
  double p = network.cumulative(sensor, level, parent_levels) -
             network.cumulative(sensor, level - 1, parent_levels);
  return std::max(p, 0.0);
}

void check_tau(double tau) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw ValidationError("tau must lie in (0, 1)");
  }
}

HazardBelief finish(const BeliefNetwork& network,
                    std::vector<LevelDistribution> marginals, double tau) {
  HazardBelief belief;
  belief.hazards = network.hazard_ids();
  belief.posterior = std::move(marginals);
  for (const auto& dist : belief.posterior) {
    belief.thresholded.push_back(threshold_level(dist, tau));
  }
  return belief;
}

LevelDistribution normalized(const std::vector<double>& mass) {
  double total = 0.0;
  for (double m : mass) total += m;
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw ValidationError("evidence has zero probability under the network");
  }
  LevelDistribution out{};
  for (int l = 0; l < kNumAlertLevels; ++l) out[l] = mass[l] / total;
  return out;
}

}  // namespace

double exceedance(const LevelDistribution& dist, AlertLevel threshold) {
  double total = 0.0;
  for (int l = kNumAlertLevels - 1; l >= ordinal(threshold); --l) {
    total += dist[l];
  }
  return total;
}

void NoiseParams::validate() const {
  if (!(faithful_prob > 0.0 && faithful_prob <= 1.0)) {
    throw ValidationError("faithful_prob must lie in (0, 1]");
  }
  if (!(leak_advisory >= 0.0 && leak_advisory < 1.0)) {
    throw ValidationError("leak_advisory must lie in [0, 1)");
  }
  check_distribution(prior, "prior");
}

BeliefNetwork::BeliefNetwork(std::vector<std::string> hazard_ids,
                             std::vector<LevelDistribution> priors,
                             std::vector<std::string> sensor_ids,
                             std::vector<double> leaks,
                             std::vector<BeliefEdge> edges)
    : hazard_ids_(std::move(hazard_ids)),
      priors_(std::move(priors)),
      sensor_ids_(std::move(sensor_ids)),
      leaks_(std::move(leaks)),
      edges_(std::move(edges)),
      parents_(sensor_ids_.size()) {
  if (priors_.size() != hazard_ids_.size()) {
    throw ValidationError("one prior per hazard required");
  }
  if (leaks_.size() != sensor_ids_.size()) {
    throw ValidationError("one leak per sensor required");
  }
  for (std::size_t h = 0; h < priors_.size(); ++h) {
    check_distribution(priors_[h], "prior of '" + hazard_ids_[h] + "'");
  }
  for (double leak : leaks_) {
    if (!(leak >= 0.0 && leak < 1.0)) {
      throw ValidationError("leak must lie in [0, 1)");
    }
  }
  std::sort(edges_.begin(), edges_.end(), [](const auto& a, const auto& b) {
    return std::tie(a.sensor, a.hazard) < std::tie(b.sensor, b.hazard);
  });
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    if (e.hazard < 0 || e.hazard >= num_hazards() || e.sensor < 0 ||
        e.sensor >= num_sensors()) {
      throw ValidationError("edge endpoint out of range");
    }
    if (i > 0 && edges_[i - 1].sensor == e.sensor &&
        edges_[i - 1].hazard == e.hazard) {
      throw ValidationError("duplicate edge");
    }
    if (!(e.faithful_prob > 0.0 && e.faithful_prob <= 1.0)) {
      throw ValidationError("faithful_prob must lie in (0, 1]");
    }
    if (e.cap == AlertLevel::kNominal) {
      throw ValidationError("edge cap must be at least Advisory");
    }
    parents_[e.sensor].push_back(e);
  }
}

int BeliefNetwork::sensor_index(const std::string& id) const {
  auto it = std::find(sensor_ids_.begin(), sensor_ids_.end(), id);
  if (it == sensor_ids_.end()) {
    throw ValidationError("unknown sensor '" + id + "'");
  }
  return static_cast<int>(it - sensor_ids_.begin());
}

double BeliefNetwork::cumulative(int sensor, int level,
                                 const std::vector<AlertLevel>& parent_levels) const {
  if (level < 0) return 0.0;
  double p = level == 0 ? 1.0 - leaks_[sensor] : 1.0;
  const auto& edges = parents_[sensor];
  for (std::size_t i = 0; i < edges.size(); ++i) {
    int effect = std::min(ordinal(parent_levels[i]), ordinal(edges[i].cap));
    double rho = edges[i].faithful_prob;
    p *= (1.0 - rho) + (effect <= level ? rho : 0.0);
  }
  return p;
}

BeliefNetwork build_network(const HazardMatrix& matrix,
                            const NoiseParams& params) {
  params.validate();
  std::vector<std::string> hazards;
  for (const auto& h : matrix.hazards()) hazards.push_back(h.id);
  std::vector<std::string> sensors;
  for (const auto& s : matrix.sensors()) sensors.push_back(s.id);
  std::vector<BeliefEdge> edges;
  for (int s = 0; s < matrix.num_sensors(); ++s) {
    for (int h = 0; h < matrix.num_hazards(); ++h) {
      if (auto cap = matrix.cap(s, h)) {
        edges.push_back({h, s, *cap, params.faithful_prob});
      }
    }
  }
  std::vector<LevelDistribution> priors(hazards.size(), params.prior);
  std::vector<double> leaks(sensors.size(), params.leak_advisory);
  return BeliefNetwork(std::move(hazards), std::move(priors), std::move(sensors),
                       std::move(leaks), std::move(edges));
}

const LevelDistribution& HazardBelief::posterior_of(const std::string& hazard) const {
  auto it = std::find(hazards.begin(), hazards.end(), hazard);
  if (it == hazards.end()) {
    throw ValidationError("unknown hazard '" + hazard + "'");
  }
  return posterior[static_cast<std::size_t>(it - hazards.begin())];
}

AlertLevel HazardBelief::thresholded_of(const std::string& hazard) const {
  auto it = std::find(hazards.begin(), hazards.end(), hazard);
  if (it == hazards.end()) {
    throw ValidationError("unknown hazard '" + hazard + "'");
  }
  return thresholded[static_cast<std::size_t>(it - hazards.begin())];
}

HazardBelief posterior(const BeliefNetwork& network, const Evidence& evidence,
                       const InferenceOptions& options) {
  check_tau(options.tau);
  auto observed = resolve_evidence(network, evidence, options.unobserved);

  std::vector<Factor> factors;
  for (int h = 0; h < network.num_hazards(); ++h) {
    const auto& prior = network.prior(h);
    factors.push_back({{h}, std::vector<double>(prior.begin(), prior.end())});
  }

  double constant = 1.0;
  for (int s = 0; s < network.num_sensors(); ++s) {
    if (!observed[s]) continue;
    const auto& parents = network.parents(s);
    Factor f;
    for (const auto& e : parents) f.vars.push_back(e.hazard);
    f.table.resize(Factor::size_for(f.vars.size()));
    std::vector<int> levels(f.vars.size());
    std::vector<AlertLevel> parent_levels(f.vars.size());
    for (std::size_t i = 0; i < f.table.size(); ++i) {
      decode(i, levels);
      for (std::size_t j = 0; j < levels.size(); ++j) {
        parent_levels[j] = static_cast<AlertLevel>(levels[j]);
      }
      f.table[i] = sensor_likelihood(network, s, *observed[s], parent_levels);
    }
    if (f.vars.empty()) {
      constant *= f.table[0];
    } else {
      factors.push_back(std::move(f));
    }
  }
  if (constant <= 0.0) {
    throw ValidationError("evidence has zero probability under the network");
  }

  std::vector<LevelDistribution> marginals;
  for (int query = 0; query < network.num_hazards(); ++query) {
    std::vector<Factor> pool = factors;
    std::vector<int> remaining;
    for (int h = 0; h < network.num_hazards(); ++h) {
      if (h != query) remaining.push_back(h);
    }
    // Greedy min-size elimination.
    while (!remaining.empty()) {
      std::size_t best = 0;
      std::size_t best_size = std::numeric_limits<std::size_t>::max();
      for (std::size_t r = 0; r < remaining.size(); ++r) {
        std::vector<int> scope;
        for (const auto& f : pool) {
          if (std::binary_search(f.vars.begin(), f.vars.end(), remaining[r])) {
            scope.insert(scope.end(), f.vars.begin(), f.vars.end());
          }
        }
        std::sort(scope.begin(), scope.end());
        scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
        if (scope.size() < best_size) {
          best_size = scope.size();
          best = r;
        }
      }
      int var = remaining[best];
      remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));

      std::optional<Factor> product;
      std::vector<Factor> rest;
      for (auto& f : pool) {
        if (std::binary_search(f.vars.begin(), f.vars.end(), var)) {
          product = product ? multiply(*product, f) : std::move(f);
        } else {
          rest.push_back(std::move(f));
        }
      }
      if (product) rest.push_back(sum_out(*product, var));
      pool = std::move(rest);
    }

    std::vector<double> mass(kNumAlertLevels, 1.0);
    for (const auto& f : pool) {
      if (f.vars.empty()) {
        for (double& m : mass) m *= f.table[0];
      } else {
        for (int l = 0; l < kNumAlertLevels; ++l) mass[l] *= f.table[l];
      }
    }
    marginals.push_back(normalized(mass));
  }
  return finish(network, std::move(marginals), options.tau);
}

HazardBelief brute_force_posterior(const BeliefNetwork& network,
                                   const Evidence& evidence,
                                   const InferenceOptions& options) {
  check_tau(options.tau);
  if (network.num_hazards() > 6 || network.num_sensors() > 10) {
    throw ValidationError(
        "brute-force oracle limited to 6 hazards and 10 sensors");
  }
  auto observed = resolve_evidence(network, evidence, options.unobserved);

  const int nh = network.num_hazards();
  std::vector<std::vector<double>> mass(nh, std::vector<double>(kNumAlertLevels, 0.0));
  std::vector<int> config(static_cast<std::size_t>(nh), 0);
  std::size_t total = Factor::size_for(static_cast<std::size_t>(nh));

  for (std::size_t index = 0; index < total; ++index) {
    decode(index, config);
    double p = 1.0;
    for (int h = 0; h < nh; ++h) p *= network.prior(h)[config[h]];

    for (int s = 0; s < network.num_sensors() && p > 0.0; ++s) {
      if (!observed[s]) continue;
      const auto& edges = network.parents(s);
      const std::size_t outcomes = std::size_t{1} << (edges.size() + 1);
      double likelihood = 0.0;
      // Bit i < edges.size(): edge i faithful; top bit: leak fires.
      for (std::size_t bits = 0; bits < outcomes; ++bits) {
        double q = 1.0;
        int level = 0;
        for (std::size_t i = 0; i < edges.size(); ++i) {
          double rho = edges[i].faithful_prob;
          if (bits & (std::size_t{1} << i)) {
            q *= rho;
            level = std::max(level, std::min(config[edges[i].hazard],
                                             ordinal(edges[i].cap)));
          } else {
            q *= 1.0 - rho;
          }
        }
        if (bits & (std::size_t{1} << edges.size())) {
          q *= network.leak(s);
          level = std::max(level, ordinal(AlertLevel::kAdvisory));
        } else {
          q *= 1.0 - network.leak(s);
        }
        if (level == *observed[s]) likelihood += q;
      }
      p *= likelihood;
    }
    for (int h = 0; h < nh; ++h) mass[h][config[h]] += p;
  }

  std::vector<LevelDistribution> marginals;
  for (int h = 0; h < nh; ++h) marginals.push_back(normalized(mass[h]));
  return finish(network, std::move(marginals), options.tau);
}

AlertLevel threshold_level(const LevelDistribution& dist, double tau) {
  check_tau(tau);
  for (int l = kNumAlertLevels - 1; l >= 1; --l) {
    auto level = static_cast<AlertLevel>(l);
    if (exceedance(dist, level) >= tau) return level;
  }
  return AlertLevel::kNominal;
}

std::map<std::string, AlertLevel> threshold(const HazardBelief& belief,
                                            double tau) {
  std::map<std::string, AlertLevel> out;
  for (std::size_t h = 0; h < belief.hazards.size(); ++h) {
    out[belief.hazards[h]] = threshold_level(belief.posterior[h], tau);
  }
  return out;
}

}  // namespace alarms
