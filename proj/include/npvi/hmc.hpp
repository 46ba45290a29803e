#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "npvi/model.hpp"

namespace npvi {

struct HmcConfig {
  double step_size = 0.05;
  int leapfrog_steps = 20;
  int num_samples = 5000;
  int keep_last = 200;
  std::uint64_t seed = 0;
  // Starting state; the origin when unset.
  std::optional<Vector> initial;

  void validate() const;
};

struct PosteriorSamples {
  std::vector<Vector> samples;
  double acceptance_rate = 0.0;
  int accepted = 0;
  int proposed = 0;
};

struct PhaseState {
  Vector position;
  Vector momentum;
};

/// Leapfrog integration of H = -f(position) + |momentum|^2 / 2.
PhaseState leapfrog(const LogJointModel& model, PhaseState state,
                    double step_size, int steps);

/// Hamiltonian energy -f(position) + |momentum|^2 / 2.
double hamiltonian(const LogJointModel& model, const PhaseState& state);

/**
 * Leapfrog HMC with identity mass matrix and Metropolis correction.
 * Returns the last keep_last states and the acceptance rate over all
 * num_samples transitions. Proposals with non-finite energy are rejected.
 */
PosteriorSamples hmc_sample(const LogJointModel& model, const HmcConfig& config);

}  // namespace npvi
