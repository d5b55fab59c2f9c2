#pragma once

// Reference computations written independently of the library: plain
// enumeration, closed forms and bisection.

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "alarms/belief_net.hpp"

namespace oracle {

using Dist = std::array<double, 5>;

inline std::string data_path(const std::string& rel) {
  return std::string(ALARMS_DATA_DIR) + "/" + rel;
}

// Sensor level distribution by enumerating each edge's faithful/silent
// outcome and the leak.
inline Dist sensor_given_parents(const std::vector<int>& parent_levels,
                                 const std::vector<int>& caps,
                                 const std::vector<double>& rho, double leak) {
  Dist out{};
  const std::size_t m = parent_levels.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    double p = 1.0;
    int level = 0;
    for (std::size_t e = 0; e < m; ++e) {
      if (mask >> e & 1) {
        p *= rho[e];
        level = std::max(level, std::min(parent_levels[e], caps[e]));
      } else {
        p *= 1.0 - rho[e];
      }
    }
    out[level] += p * (1.0 - leak);
    out[std::max(level, 1)] += p * leak;
  }
  return out;
}

// Posterior per hazard by summing the joint over every hazard configuration.
// Sensors absent from `observed` are skipped when marginalize is set and
// treated as Nominal otherwise.
inline std::vector<Dist> posterior(const alarms::BeliefNetwork& net,
                                   const std::map<int, int>& observed,
                                   bool marginalize) {
  const int h = net.num_hazards();
  std::vector<Dist> post(h, Dist{});
  std::vector<int> config(h, 0);
  double z = 0.0;
  while (true) {
    double p = 1.0;
    for (int i = 0; i < h; ++i) p *= net.prior(i)[config[i]];
    for (int s = 0; s < net.num_sensors() && p > 0.0; ++s) {
      auto it = observed.find(s);
      if (it == observed.end() && marginalize) continue;
      int y = it == observed.end() ? 0 : it->second;
      std::vector<int> levels, caps;
      std::vector<double> rho;
      for (const auto& e : net.edges()) {
        if (e.sensor != s) continue;
        levels.push_back(config[e.hazard]);
        caps.push_back(alarms::ordinal(e.cap));
        rho.push_back(e.faithful_prob);
      }
      p *= sensor_given_parents(levels, caps, rho, net.leak(s))[y];
    }
    z += p;
    for (int i = 0; i < h; ++i) post[i][config[i]] += p;
    int pos = 0;
    while (pos < h && config[pos] == 4) config[pos++] = 0;
    if (pos == h) break;
    ++config[pos];
  }
  for (auto& d : post) {
    for (double& x : d) x /= z;
  }
  return post;
}

inline double total_variation(const Dist& a, const std::array<double, 5>& b) {
  double tv = 0.0;
  for (int i = 0; i < 5; ++i) tv += std::abs(a[i] - b[i]);
  return 0.5 * tv;
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Time t at which pilot (rate a, multiplier 1) and automation (rate b,
// multiplier g) have equal value with deadline d.
inline double single_hazard_crossover(double a, double b, double g, double d) {
  auto diff = [&](double u) { return (1 - std::exp(-a * u)) - g * (1 - std::exp(-b * u)); };
  return d - oracle::bisect(diff, 1e-6, d);
}

inline double erlang2_cdf(double rate, double t) {
  return 1.0 - std::exp(-rate * t) * (1.0 + rate * t);
}

struct RandomNetwork {
  alarms::BeliefNetwork net;
  std::map<int, int> observed;
};

// Random network with sampled evidence (drawn from the network, so it has
// positive probability).
inline RandomNetwork random_network(std::mt19937_64& rng, int max_hazards,
                                    int max_sensors) {
  std::uniform_int_distribution<int> nh(1, max_hazards), ns(1, max_sensors);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int h = nh(rng), s = ns(rng);
  std::vector<std::string> hid, sid;
  std::vector<alarms::LevelDistribution> priors;
  for (int i = 0; i < h; ++i) {
    hid.push_back("h" + std::to_string(i));
    alarms::LevelDistribution p{};
    double sum = 0;
    for (double& x : p) sum += (x = 0.05 + u(rng));
    for (double& x : p) x /= sum;
    priors.push_back(p);
  }
  std::vector<double> leaks;
  std::vector<alarms::BeliefEdge> edges;
  for (int j = 0; j < s; ++j) {
    sid.push_back("s" + std::to_string(j));
    leaks.push_back(0.3 * u(rng));
    for (int i = 0; i < h; ++i) {
      if (u(rng) < 0.6) {
        edges.push_back({i, j, alarms::alert_level_from_ordinal(1 + static_cast<int>(u(rng) * 4) % 4),
                         0.05 + 0.9 * u(rng)});
      }
    }
  }
  alarms::BeliefNetwork net(hid, priors, sid, leaks, edges);

  std::vector<int> config(h);
  for (int i = 0; i < h; ++i) {
    std::discrete_distribution<int> d(priors[i].begin(), priors[i].end());
    config[i] = d(rng);
  }
  std::map<int, int> observed;
  for (int j = 0; j < s; ++j) {
    if (u(rng) < 0.3) continue;
    int level = u(rng) < leaks[j] ? 1 : 0;
    for (const auto& e : edges) {
      if (e.sensor == j && u(rng) < e.faithful_prob) {
        level = std::max(level, std::min(config[e.hazard], alarms::ordinal(e.cap)));
      }
    }
    observed[j] = level;
  }
  return {std::move(net), std::move(observed)};
}

}  // namespace oracle
