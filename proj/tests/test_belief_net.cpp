#include "doctest.h"

#include <random>

#include "alarms/belief_net.hpp"
#include "alarms/error.hpp"
#include "oracles.hpp"

using namespace alarms;

namespace {

BeliefNetwork single_edge(AlertLevel cap, double rho = 0.9, double leak = 0.01) {
  NoiseParams defaults;
  return BeliefNetwork({"H"}, {defaults.prior}, {"S"}, {leak}, {{0, 0, cap, rho}});
}

double sensor_prob(const BeliefNetwork& net, int level, std::vector<AlertLevel> parents) {
  double below = level == 0 ? 0.0 : net.cumulative(0, level - 1, parents);
  return net.cumulative(0, level, parents) - below;
}

HazardMatrix demo() { return load_matrix_file(oracle::data_path("demo_matrix.json")); }

}  // namespace

TEST_CASE("noisy-MAX sensor model") {
  auto net = single_edge(AlertLevel::kWarning);
  std::vector<AlertLevel> d{AlertLevel::kDirective};
  CHECK(sensor_prob(net, 4, d) == doctest::Approx(0.0));
  CHECK(sensor_prob(net, 3, d) == doctest::Approx(0.9));
  CHECK(sensor_prob(net, 0, d) == doctest::Approx(0.1 * 0.99));
  CHECK(sensor_prob(net, 1, d) == doctest::Approx(0.1 * 0.01));

  std::vector<AlertLevel> n{AlertLevel::kNominal};
  CHECK(sensor_prob(net, 0, n) == doctest::Approx(0.99));
  CHECK(sensor_prob(net, 1, n) == doctest::Approx(0.01));

  // Against explicit outcome enumeration, for every parent level.
  for (int p = 0; p < 5; ++p) {
    auto ref = oracle::sensor_given_parents({p}, {3}, {0.9}, 0.01);
    for (int y = 0; y < 5; ++y) {
      CHECK(sensor_prob(net, y, {alert_level_from_ordinal(p)}) ==
            doctest::Approx(ref[y]).epsilon(1e-12));
    }
  }
}

TEST_CASE("demo network edges") {
  auto net = build_network(demo());
  CHECK(net.edges().size() == 6);
  CHECK(net.parents(net.sensor_index("Weather Radar")).size() == 2);
}

TEST_CASE("posterior examples") {
  auto matrix = demo();
  auto net = build_network(matrix);
  NoiseParams defaults;

  SUBCASE("all sensors Nominal raises P(N)") {
    auto b = posterior(net, {});
    for (const auto& d : b.posterior) CHECK(d[0] >= defaults.prior[0]);
    for (auto l : b.thresholded) CHECK(l == AlertLevel::kNominal);
  }
  SUBCASE("no observations under marginalization returns priors") {
    auto b = posterior(net, {}, {UnobservedSensors::kMarginalize, 0.5});
    for (const auto& d : b.posterior) {
      for (int i = 0; i < 5; ++i) CHECK(d[i] == doctest::Approx(defaults.prior[i]));
    }
  }
  SUBCASE("one hazard without sensors keeps its prior") {
    BeliefNetwork lone({"H"}, {defaults.prior}, {}, {}, {});
    auto b = posterior(lone, {});
    for (int i = 0; i < 5; ++i) CHECK(b.posterior[0][i] == doctest::Approx(defaults.prior[i]));
  }
  SUBCASE("sensor at cap raises exceedance") {
    auto lone = single_edge(AlertLevel::kWarning);
    Evidence ev{{{"S", AlertLevel::kWarning}}};
    auto b = posterior(lone, ev);
    CHECK(exceedance(b.posterior[0], AlertLevel::kAdvisory) > 0.1);
    auto ref = oracle::posterior(lone, {{0, 3}}, false);
    CHECK(oracle::total_variation(ref[0], b.posterior[0]) < 1e-12);
  }
  SUBCASE("two Weather sensors raise P(Weather >= A) above prior") {
    Evidence ev{{{"Weather Radar", AlertLevel::kAdvisory},
                 {"Ice Protection", AlertLevel::kAdvisory}}};
    auto b = posterior(net, ev);
    double p = exceedance(b.posterior_of("Adverse Weather"), AlertLevel::kAdvisory);
    CHECK(p > 0.1);
    auto ref = oracle::posterior(net, {{0, 1}, {1, 1}}, false);
    CHECK(oracle::total_variation(ref[0], b.posterior[0]) < 1e-12);
  }
  SUBCASE("unknown sensor") {
    Evidence ev{{{"Sonar", AlertLevel::kAdvisory}}};
    CHECK_THROWS_AS(posterior(net, ev), ValidationError);
  }
  SUBCASE("impossible evidence") {
    // VNAV cannot exceed Caution on any hazard, and leaks only Advisory.
    Evidence ev{{{"VNAV", AlertLevel::kDirective}}};
    CHECK_THROWS_WITH_AS(posterior(net, ev), doctest::Contains("zero probability"),
                         ValidationError);
  }
}

TEST_CASE("posterior matches enumeration on random networks") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    auto rn = oracle::random_network(rng, 4, 8);
    bool marginalize = trial % 2 == 1;
    Evidence ev;
    for (auto [s, y] : rn.observed) {
      ev.observed[rn.net.sensor_ids()[s]] = alert_level_from_ordinal(y);
    }
    InferenceOptions opts{marginalize ? UnobservedSensors::kMarginalize
                                      : UnobservedSensors::kNominal, 0.5};
    auto b = posterior(rn.net, ev, opts);
    auto bf = brute_force_posterior(rn.net, ev, opts);
    auto ref = oracle::posterior(rn.net, rn.observed, marginalize);
    for (int h = 0; h < rn.net.num_hazards(); ++h) {
      CHECK(oracle::total_variation(ref[h], b.posterior[h]) < 1e-9);
      CHECK(oracle::total_variation(ref[h], bf.posterior[h]) < 1e-9);
    }
  }
}

TEST_CASE("threshold rule") {
  CHECK(threshold_level({0.9, 0.06, 0.025, 0.01, 0.005}, 0.5) == AlertLevel::kNominal);
  CHECK(threshold_level({0.1, 0.2, 0.4, 0.2, 0.1}, 0.5) == AlertLevel::kCaution);
  CHECK(threshold_level({0.1, 0.2, 0.4, 0.2, 0.1}, 0.99) == AlertLevel::kNominal);
  CHECK(threshold_level({0.0, 0.0, 0.0, 0.0, 1.0}, 0.5) == AlertLevel::kDirective);
  CHECK_THROWS_AS(threshold_level({1, 0, 0, 0, 0}, 0.0), ValidationError);
  CHECK_THROWS_AS(threshold_level({1, 0, 0, 0, 0}, 1.0), ValidationError);
}

TEST_CASE("noise parameter validation") {
  NoiseParams p;
  p.faithful_prob = 1.5;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = {};
  p.prior = {0.5, 0.5, 0.5, 0, 0};
  CHECK_THROWS_AS(p.validate(), ValidationError);
}
