#pragma once

// Counter-based random streams.  Every draw is a pure function of
// (seed, stream, counter), so sample i is reproducible regardless of which
// worker produces it or in what order.

#include <Eigen/Dense>
#include <cstdint>

#include "finsler/fields.hpp"

namespace finsler {

std::uint64_t splitmix64(std::uint64_t z);

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  /// Standard normal (Box-Muller, both variates used).
  double normal();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Uniform on the Euclidean unit sphere of R^n.
Eigen::VectorXd sphere_direction(CounterRng& rng, int n);
Eigen::VectorXd box_point(CounterRng& rng, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);

struct RandomPairOptions {
  int dim = 3;
  /// Typical size of beta; b stays below 1 on |x| <= 0.5 when this is <= 0.3.
  double beta_scale = 0.25;
  /// Size of the x-dependence of the metric and form.
  double variation = 0.3;
};

/// A random analytic Riemann metric alpha (positive definite for |x| <= 0.5)
/// and a random analytic one-form beta built from polynomial, trigonometric
/// and exponential terms.  Deterministic in the seed.
RandersData random_randers_data(std::uint64_t seed, const RandomPairOptions& options = {});

}  // namespace finsler
