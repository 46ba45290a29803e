#pragma once

#include <cstdint>
#include <vector>

#include "npvi/lbfgs.hpp"
#include "npvi/model.hpp"

namespace npvi {

struct MapOptions {
  int restarts = 10;
  std::uint64_t seed = 0;
  // Restart r starts from N(0, start_scale^2 I) drawn with seed + r.
  double start_scale = 1.0;
  OptimOptions optim{.max_iterations = 1000, .gradient_tolerance = 1e-7};
};

struct MapResult {
  Vector theta;
  double log_joint = 0.0;
  double gradient_norm = 0.0;  // infinity norm at theta
  OptimStatus status = OptimStatus::converged;
  int best_restart = 0;
  int failed_restarts = 0;
};

/// Best local maximiser of f over the restarts. Throws NumericalError when
/// every restart ends in a line-search failure away from a stationary point.
MapResult map_estimate(const LogJointModel& model, const MapOptions& options);

/// MAP from an explicit starting point (single restart).
MapResult map_estimate_from(const LogJointModel& model, const Vector& start,
                            const OptimOptions& options = {
                                .max_iterations = 1000,
                                .gradient_tolerance = 1e-7});

// Gaussian with per-coordinate variances.
struct DiagonalGaussian {
  Vector mean;
  Vector variances;
};

/// Mean theta_map, variance -1/H_ii. Throws InputError naming the first
/// coordinate with H_ii >= 0.
DiagonalGaussian laplace_diagonal(const LogJointModel& model,
                                  const Vector& theta_map);

std::vector<Vector> sample_diagonal_gaussian(const DiagonalGaussian& g,
                                             std::size_t count,
                                             std::uint64_t seed);

}  // namespace npvi
