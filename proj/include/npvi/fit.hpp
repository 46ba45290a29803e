#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "npvi/lbfgs.hpp"
#include "npvi/mixture.hpp"
#include "npvi/model.hpp"

namespace npvi {

struct NpvConfig {
  Index num_components = 1;
  // Outer loop stops once |L2(iter) - L2(iter - 1)| < tolerance.
  double tolerance = 1e-4;
  int max_outer_iterations = 50;
  // Clamp range for log(sigma_n).
  double log_sigma_min = std::log(1e-6);
  double log_sigma_max = std::log(1e3);

  std::uint64_t seed = 0;
  double mean_init_scale = 1.0;
  double initial_sigma = 1.0;
  // Overrides the random draw of the initial means (N x D) when set.
  std::optional<Matrix> initial_means;
  int max_init_attempts = 5;

  OptimOptions mean_options{.max_iterations = 25};
  OptimOptions sigma_options{.max_iterations = 50};

  // Skip the bandwidth step; sigmas stay at initial_sigma.
  bool freeze_bandwidths = false;
  // Experimental: optimise all means jointly instead of one at a time.
  bool batch_means = false;

  void validate() const;
};

struct FitResult {
  MixtureApproximation mixture;
  // L2 at initialisation followed by L2 after each outer iteration.
  std::vector<double> l2_trace;
  bool converged = false;
  int outer_iterations = 0;
  double wall_time = 0.0;  // seconds
  std::vector<std::string> warnings;
};

/// Initial mixture for the given attempt (0-based); deterministic per seed.
MixtureApproximation initial_mixture(Index dimension, const NpvConfig& config,
                                     int attempt = 0);

/**
 * Alternating maximisation of the approximate ELBOs: each mean in turn
 * under L1 with the others held fixed, then all log-bandwidths jointly
 * under L2, until the change in L2 drops below config.tolerance.
 *
 * Requires a model with gradient and Hessian diagonal (CapabilityError
 * otherwise). A failed mean update keeps the previous mean and records a
 * warning. If L2 is not finite at initialisation the means are redrawn up
 * to max_init_attempts times before NumericalError is thrown.
 */
FitResult fit(const LogJointModel& model, const NpvConfig& config);

}  // namespace npvi
