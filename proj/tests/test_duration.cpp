#include "doctest.h"

#include <cmath>

#include "alarms/duration.hpp"
#include "alarms/error.hpp"
#include "oracles.hpp"

using namespace alarms;

namespace {

constexpr double kStep = 0.01;
constexpr double kHorizon = 20.0;

double sup_cdf_error(const DurationDistribution<double>& d,
                     const std::function<double(double)>& cdf) {
  auto c = d.cdf();
  double worst = 0.0;
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    worst = std::max(worst, std::abs(c[k] - cdf(static_cast<double>(k) * kStep)));
  }
  return worst;
}

}  // namespace

TEST_CASE("exponential discretization") {
  auto d = discretize_exponential(0.15, kStep, kHorizon);
  CHECK(d.steps() == 2000);
  CHECK(d.overflow == doctest::Approx(std::exp(-3.0)).epsilon(1e-12));
  CHECK(d.overflow == doctest::Approx(0.049787).epsilon(1e-5));
  CHECK(d.total() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(d.pmf[0] == 0.0);
  CHECK(d.pmf[1] == doctest::Approx(1.0 - std::exp(-0.15 * kStep)));
  // Lumping to the right endpoint never puts mass earlier than it belongs.
  auto c = d.cdf();
  for (int k = 0; k <= d.steps(); k += 100) {
    CHECK(c[k] <= 1.0 - std::exp(-0.15 * k * kStep) + 1e-15);
  }

  auto fast = discretize_exponential(1e6, kStep, kHorizon);
  CHECK(fast.pmf[1] == doctest::Approx(1.0));
  CHECK(fast.overflow == 0.0);
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(grid_steps(20.0, 0.03), ValidationError);
  CHECK_THROWS_AS(grid_steps(20.0, 0.0), ValidationError);
  CHECK_THROWS_AS(discretize_exponential(-1.0, kStep, kHorizon), ValidationError);
  CHECK(grid_steps(20.0, 0.02) == 1000);
}

TEST_CASE("convolution") {
  auto e = discretize_exponential(0.15, kStep, kHorizon);
  auto zero = point_mass_at_zero<double>(e.steps());
  auto same = convolve(zero, e);
  CHECK((same.pmf - e.pmf).cwiseAbs().maxCoeff() == 0.0);
  CHECK(same.overflow == doctest::Approx(e.overflow));

  auto erlang = convolve(e, e);
  CHECK(erlang.total() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sup_cdf_error(erlang, [](double t) { return oracle::erlang2_cdf(0.15, t); }) <=
        2 * kStep * 0.15);

  DurationDistribution<double> half;
  half.pmf = Eigen::VectorXd::Zero(11);
  half.pmf[3] = 0.5;
  half.overflow = 0.5;
  CHECK(convolve(half, half).overflow >= 0.75);
}

TEST_CASE("max combination") {
  auto e = discretize_exponential(0.4, kStep, kHorizon);
  auto zero = point_mass_at_zero<double>(e.steps());
  auto same = max_combine(e, zero);
  CHECK((same.pmf - e.pmf).cwiseAbs().maxCoeff() < 1e-15);

  auto both = max_combine(e, e);
  CHECK(sup_cdf_error(both, [](double t) {
          double f = 1.0 - std::exp(-0.4 * t);
          return f * f;
        }) <= 2 * kStep * 0.4);
  CHECK(both.overflow >= e.overflow);
  CHECK(both.total() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("long double instantiation") {
  auto d = discretize_exponential<long double>(0.15L, 0.01L, 20.0L);
  CHECK(static_cast<double>(d.overflow) == doctest::Approx(std::exp(-3.0)));
}
