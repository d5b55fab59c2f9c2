#pragma once

#include <cmath>
#include <cstddef>

#include <Eigen/Core>

#include "alarms/error.hpp"

namespace alarms {

// Number of grid intervals for horizon/step; the ratio must be integral.
inline int grid_steps(double horizon, double step) {
  if (!(horizon > 0.0) || !(step > 0.0) || step > horizon) {
    throw ValidationError("grid requires 0 < step <= horizon");
  }
  double ratio = horizon / step;
  double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw ValidationError("horizon / step must be an integer");
  }
  return static_cast<int>(rounded);
}

// Probability masses on the grid {0, step, ..., steps*step} plus the mass of
// durations beyond the last grid point.
template <typename Scalar>
struct DurationDistribution {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Vector pmf;
  Scalar overflow{0};

  int steps() const { return static_cast<int>(pmf.size()) - 1; }
  Scalar total() const { return pmf.sum() + overflow; }

  // Running sum P(D <= k*step).
  Vector cdf() const {
    Vector c(pmf.size());
    Scalar acc{0};
    for (Eigen::Index k = 0; k < pmf.size(); ++k) {
      acc += pmf[k];
      c[k] = acc;
    }
    return c;
  }

  Scalar mean_on_grid(Scalar step) const {
    Scalar m{0};
    for (Eigen::Index k = 0; k < pmf.size(); ++k) {
      m += pmf[k] * static_cast<Scalar>(k) * step;
    }
    return m;
  }
};

template <typename Scalar>
DurationDistribution<Scalar> point_mass_at_zero(int steps) {
  DurationDistribution<Scalar> d;
  d.pmf = DurationDistribution<Scalar>::Vector::Zero(steps + 1);
  d.pmf[0] = Scalar{1};
  return d;
}

// Exponential(rate) lumped to the right endpoint of each grid interval:
// mass at k*step is exp(-rate*(k-1)*step) - exp(-rate*k*step) for k >= 1.
template <typename Scalar>
DurationDistribution<Scalar> discretize_exponential(Scalar rate, Scalar step,
                                                    Scalar horizon) {
  if (!(rate > Scalar{0})) throw ValidationError("rate must be positive");
  const int n = grid_steps(static_cast<double>(horizon), static_cast<double>(step));
  DurationDistribution<Scalar> d;
  d.pmf = DurationDistribution<Scalar>::Vector::Zero(n + 1);
  Scalar previous_tail{1};
  for (int k = 1; k <= n; ++k) {
    Scalar tail = std::exp(-rate * static_cast<Scalar>(k) * step);
    d.pmf[k] = previous_tail - tail;
    previous_tail = tail;
  }
  d.overflow = previous_tail;
  return d;
}

// Distribution of the sum of independent durations. Mass past the grid and
// any combination involving an overflow goes to overflow.
template <typename Scalar>
DurationDistribution<Scalar> convolve(const DurationDistribution<Scalar>& a,
                                      const DurationDistribution<Scalar>& b) {
  if (a.pmf.size() != b.pmf.size()) throw ValidationError("grid mismatch");
  const Eigen::Index size = a.pmf.size();
  DurationDistribution<Scalar> c;
  c.pmf = DurationDistribution<Scalar>::Vector::Zero(size);
  for (Eigen::Index m = 0; m < size; ++m) {
    Scalar acc{0};
    for (Eigen::Index i = 0; i <= m; ++i) acc += a.pmf[i] * b.pmf[m - i];
    c.pmf[m] = acc;
  }
  const Scalar grid_a = a.pmf.sum();
  const Scalar grid_b = b.pmf.sum();
  Scalar beyond = grid_a * grid_b - c.pmf.sum();
  if (beyond < Scalar{0}) beyond = Scalar{0};
  c.overflow = beyond + a.overflow * (grid_b + b.overflow) + grid_a * b.overflow;
  return c;
}

// Distribution of the max of independent durations: CDFs multiply.
template <typename Scalar>
DurationDistribution<Scalar> max_combine(const DurationDistribution<Scalar>& a,
                                         const DurationDistribution<Scalar>& b) {
  if (a.pmf.size() != b.pmf.size()) throw ValidationError("grid mismatch");
  const auto fa = a.cdf();
  const auto fb = b.cdf();
  DurationDistribution<Scalar> c;
  c.pmf.resize(a.pmf.size());
  Scalar previous{0};
  for (Eigen::Index k = 0; k < a.pmf.size(); ++k) {
    Scalar f = fa[k] * fb[k];
    c.pmf[k] = f - previous;
    previous = f;
  }
  c.overflow = Scalar{1} - (Scalar{1} - a.overflow) * (Scalar{1} - b.overflow);
  return c;
}

}  // namespace alarms
