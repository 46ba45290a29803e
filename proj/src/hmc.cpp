#include "npvi/hmc.hpp"

#include <cmath>
#include <random>

#include "npvi/error.hpp"

namespace npvi {

void HmcConfig::validate() const {
  if (!(step_size > 0.0)) throw ConfigError("HMC step_size must be positive");
  if (leapfrog_steps < 1) throw ConfigError("HMC needs at least one leapfrog step");
  if (num_samples < 1) throw ConfigError("HMC num_samples must be positive");
  if (keep_last < 1 || keep_last > num_samples)
    throw ConfigError("HMC keep_last must lie in [1, num_samples]");
}

PhaseState leapfrog(const LogJointModel& model, PhaseState state,
                    double step_size, int steps) {
  Vector grad;
  model.eval(state.position, &grad);
  for (int s = 0; s < steps; ++s) {
    state.momentum += 0.5 * step_size * grad;
    state.position += step_size * state.momentum;
    model.eval(state.position, &grad);
    state.momentum += 0.5 * step_size * grad;
  }
  return state;
}

double hamiltonian(const LogJointModel& model, const PhaseState& state) {
  return -model.eval(state.position) + 0.5 * state.momentum.squaredNorm();
}

PosteriorSamples hmc_sample(const LogJointModel& model, const HmcConfig& config) {
  config.validate();
  if (!model.has_gradient()) throw CapabilityError("HMC needs the model gradient");
  const Index dim = model.dimension();
  Vector position = config.initial.value_or(Vector::Zero(dim));
  if (position.size() != dim) throw ConfigError("HMC initial state has the wrong length");
  double log_joint = model.eval(position);
  if (!std::isfinite(log_joint)) throw InputError("log joint is not finite at the HMC start");

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  PosteriorSamples out;
  out.samples.reserve(static_cast<std::size_t>(config.keep_last));
  const int first_kept = config.num_samples - config.keep_last;
  for (int it = 0; it < config.num_samples; ++it) {
    PhaseState start{position, Vector(dim)};
    for (Index i = 0; i < dim; ++i) start.momentum(i) = normal(rng);
    const double h0 = -log_joint + 0.5 * start.momentum.squaredNorm();

    const PhaseState end = leapfrog(model, start, config.step_size, config.leapfrog_steps);
    const double end_log_joint = model.eval(end.position);
    const double h1 = -end_log_joint + 0.5 * end.momentum.squaredNorm();
    const double u = uniform(rng);
    ++out.proposed;
    if (std::isfinite(h1) && end.position.allFinite() && std::log(u) < h0 - h1) {
      position = end.position;
      log_joint = end_log_joint;
      ++out.accepted;
    }
    if (it >= first_kept) out.samples.push_back(position);
  }
  out.acceptance_rate = static_cast<double>(out.accepted) / out.proposed;
  return out;
}

}  // namespace npvi
