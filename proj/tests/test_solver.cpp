#include "doctest.h"

#include <cmath>

#include "alarms/error.hpp"
#include "alarms/solver.hpp"
#include "oracles.hpp"

using namespace alarms;

namespace {

using L = AlertLevel;

TmdpModel single(Phase phase = Phase::kEnroute, TmdpConfig config = {}) {
  return build_tmdp({{"Weather", L::kAdvisory, 1.0}}, make_phase(phase), config);
}

QCurveSet curves_from(std::vector<Eigen::VectorXd> columns, double step) {
  QCurveSet set;
  set.grid_step = step;
  set.q.resize(columns.front().size(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t a = 0; a < columns.size(); ++a) {
    set.q.col(static_cast<Eigen::Index>(a)) = columns[a];
    set.actions.push_back(TmdpAction{{static_cast<AutonomyLevel>(a + 1)}});
  }
  return set;
}

}  // namespace

TEST_CASE("closed form") {
  auto q = closed_form_single(0.4, 0.5, 20.0, 0.01);
  CHECK(q[0] == doctest::Approx(0.499832).epsilon(1e-6));
  CHECK(q[2000] == 0.0);
  auto sure = closed_form_single(1e3, 0.5, 20.0, 0.01);
  CHECK(sure[0] == doctest::Approx(0.5));
}

TEST_CASE("single hazard solve") {
  auto m = single();
  auto r = solve(m);
  const auto& s = r.initial_solution();
  CHECK(r.initial_value() == doctest::Approx(0.950213).epsilon(1e-6));
  CHECK(std::abs(r.initial_value() - (1 - std::exp(-3.0))) <= 0.005);

  auto pilot = closed_form_single(0.15, 1.0, 20.0, 0.01);
  auto automation = closed_form_single(0.4, 0.5, 20.0, 0.01);
  CHECK((s.curves.q.col(1) - pilot).cwiseAbs().maxCoeff() <= 0.005);
  CHECK((s.curves.q.col(2) - automation).cwiseAbs().maxCoeff() <= 0.005);
  CHECK(s.curves.q.col(0).cwiseAbs().maxCoeff() == 0.0);

  for (int mask : r.order) CHECK(r.states[mask].value[m.steps()] == 0.0);

  REQUIRE(s.policy.segments.size() == 2);
  CHECK(m.action_name(s.policy.segments[0].action) == "L1");
  CHECK(m.action_name(s.policy.segments[1].action) == "L2");
  auto x = s.policy.crossovers();
  REQUIRE(x.size() == 1);
  CHECK(std::abs(x[0] - oracle::single_hazard_crossover(0.15, 0.4, 0.5, 20.0)) <= 0.02);
  CHECK(m.action_name(s.policy.action_at(19.0)) == "L2");
  CHECK(m.action_name(s.policy.action_at(20.0)) == "L2");
}

TEST_CASE("absorbing state") {
  auto m = single();
  auto r = solve(m);
  const auto& nominal = r.states[0];
  CHECK(nominal.value.cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(nominal.policy.segments.size() == 1);
  CHECK(m.action_name(nominal.policy.segments[0].action) == "L0");
  CHECK(nominal.policy.segments[0].end == 20.0);
}

TEST_CASE("two hazard solve") {
  auto m = build_tmdp({{"Weather", L::kCaution, 1.0}, {"AltDev", L::kAdvisory, 1.0}},
                      make_phase(Phase::kEnroute));
  auto r = solve(m);
  CHECK(r.stats.num_states == 4);
  CHECK(r.order.back() == m.initial_index());
  auto segs = r.initial_solution().policy.segments;
  CHECK(m.action_name(segs.back().action) == "L12");
  // The value is never below what either single follow-up state is worth.
  CHECK(r.initial_value() >= r.states[0b01].value[0]);
  CHECK(r.initial_value() >= r.states[0b10].value[0]);
}

TEST_CASE("solve from a non-initial state") {
  auto m = build_tmdp({{"Weather", L::kCaution, 1.0}, {"AltDev", L::kAdvisory, 1.0}},
                      make_phase(Phase::kEnroute));
  auto r = solve(m, m.state_at(0b01));
  CHECK(r.stats.num_states == 2);
  CHECK(r.states[0b10].curves.actions.empty());
  CHECK(r.initial_value() == doctest::Approx(0.950213).epsilon(1e-6));
}

TEST_CASE("policy extraction") {
  const int n = 2001;
  const double step = 0.01;
  SUBCASE("constant curves") {
    auto set = curves_from({Eigen::VectorXd::Ones(n), Eigen::VectorXd::Zero(n)}, step);
    auto p = extract_policy(set, TieBreak::identity(1));
    REQUIRE(p.segments.size() == 1);
    CHECK(p.segments[0].action == set.actions[0]);
  }
  SUBCASE("symmetric crossing") {
    Eigen::VectorXd up(n), down(n);
    for (int i = 0; i < n; ++i) {
      up[i] = i * step;
      down[i] = 20.0 - i * step;
    }
    auto p = extract_policy(curves_from({up, down}, step), TieBreak::identity(1));
    REQUIRE(p.segments.size() == 2);
    CHECK(std::abs(p.segments[0].end - 10.0) <= step);
  }
  SUBCASE("exact ties keep the previous action") {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(n), b = Eigen::VectorXd::Zero(n);
    a.head(1000).setConstant(1.0);
    auto p = extract_policy(curves_from({a, b}, step), TieBreak::identity(1));
    CHECK(p.segments.size() == 1);
  }
}

TEST_CASE("rollout") {
  auto m = single();
  auto r = solve(m);
  auto est = rollout(m, r, m.initial_state(), 100000, 42);
  CHECK(std::abs(est.mean - r.initial_value()) <= 3 * est.standard_error);
  auto again = rollout(m, r, m.initial_state(), 100000, 42);
  CHECK(again.mean == est.mean);
  CHECK_THROWS_AS(rollout(m, r, m.initial_state(), 0, 1), ValidationError);

  TmdpConfig fast;
  fast.rates = {0.0, 1e6, 2e6, 3e6};
  auto d = single(Phase::kEnroute, fast);
  auto rd = solve(d);
  auto ed = rollout(d, rd, d.initial_state(), 1000, 3);
  CHECK(ed.variance == 0.0);
  CHECK(ed.mean == doctest::Approx(rd.initial_value()).epsilon(1e-9));
}
