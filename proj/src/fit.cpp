#include "npvi/fit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <string>

#include "npvi/elbo.hpp"
#include "npvi/error.hpp"

namespace npvi {
namespace {

// f(mu_n) and Tr(H_n) at every mean.
struct MeanTerms {
  Vector log_joint;
  Vector traces;
};

MeanTerms evaluate_means(const MixtureApproximation& q,
                         const LogJointModel& model) {
  MeanTerms t{Vector(q.size()), Vector(q.size())};
  Vector h;
  for (Index n = 0; n < q.size(); ++n) {
    t.log_joint(n) = model.eval(q.mean(n), nullptr, &h);
    t.traces(n) = h.sum();
  }
  return t;
}

double l2_of(const MixtureApproximation& q, const MeanTerms& terms) {
  return elbo_l2_from_terms(q, terms.log_joint, terms.traces);
}

// Maximises L1 over mean m with every other mean held fixed. Returns false
// (leaving q untouched) when the step cannot be taken.
bool update_mean(MixtureApproximation& q, const LogJointModel& model, Index m,
                 const NpvConfig& config, FitResult& result) {
  const double inv_n = 1.0 / static_cast<double>(q.size());
  MixtureApproximation work = q;
  auto objective = [&](const Vector& mu, Vector* grad) {
    if (!mu.allFinite()) return -std::numeric_limits<double>::infinity();
    work.set_mean(m, mu);
    Vector g;
    const double f = model.eval(mu, grad ? &g : nullptr);
    if (!grad) return inv_n * f + entropy_lower_bound(work);
    const auto entropy = entropy_bound_gradient(work);
    *grad = inv_n * g + entropy.d_means.row(m).transpose();
    return inv_n * f + entropy.value;
  };
  try {
    const OptimReport report = maximize(objective, q.mean(m), config.mean_options);
    if (!report.argmax.allFinite() || !std::isfinite(report.value)) {
      result.warnings.push_back("mean " + std::to_string(m) +
                                ": non-finite optimum, kept previous mean");
      return false;
    }
    q.set_mean(m, report.argmax);
    return true;
  } catch (const InputError& e) {
    result.warnings.push_back("mean " + std::to_string(m) + ": " + e.what() +
                              "; kept previous mean");
    return false;
  }
}

void update_means_jointly(MixtureApproximation& q, const LogJointModel& model,
                          const NpvConfig& config, FitResult& result) {
  const Index count = q.size();
  const Index dim = q.dimension();
  const double inv_n = 1.0 / static_cast<double>(count);
  MixtureApproximation work = q;
  auto objective = [&](const Vector& flat, Vector* grad) {
    if (!flat.allFinite()) return -std::numeric_limits<double>::infinity();
    double f_sum = 0.0;
    if (grad) grad->resize(flat.size());
    Vector g;
    for (Index n = 0; n < count; ++n) {
      const Vector mu = flat.segment(n * dim, dim);
      work.set_mean(n, mu);
      f_sum += model.eval(mu, grad ? &g : nullptr);
      if (grad) grad->segment(n * dim, dim) = inv_n * g;
    }
    if (!grad) return inv_n * f_sum + entropy_lower_bound(work);
    const auto entropy = entropy_bound_gradient(work);
    for (Index n = 0; n < count; ++n)
      grad->segment(n * dim, dim) += entropy.d_means.row(n).transpose();
    return inv_n * f_sum + entropy.value;
  };
  Vector flat(count * dim);
  for (Index n = 0; n < count; ++n) flat.segment(n * dim, dim) = q.mean(n);
  try {
    const OptimReport report = maximize(objective, flat, config.mean_options);
    for (Index n = 0; n < count; ++n)
      q.set_mean(n, report.argmax.segment(n * dim, dim));
  } catch (const InputError& e) {
    result.warnings.push_back(std::string("batch mean step: ") + e.what() +
                              "; kept previous means");
  }
}

// Maximises L2 over all log-bandwidths with the means (and so f(mu_n) and
// Tr(H_n)) fixed. log sigma is clamped to the configured range; outside it
// the objective is flat.
void update_bandwidths(MixtureApproximation& q, const MeanTerms& terms,
                       const NpvConfig& config, FitResult& result) {
  const double lo = config.log_sigma_min;
  const double hi = config.log_sigma_max;
  MixtureApproximation work = q;
  auto objective = [&](const Vector& z, Vector* grad) {
    if (!z.allFinite()) return -std::numeric_limits<double>::infinity();
    work.set_log_sigmas(z.cwiseMax(lo).cwiseMin(hi));
    if (grad) {
      *grad = grad_l2_log_sigma_from_terms(work, terms.traces);
      for (Index n = 0; n < z.size(); ++n)
        if (z(n) < lo || z(n) > hi) (*grad)(n) = 0.0;
    }
    return l2_of(work, terms);
  };
  try {
    const OptimReport report =
        maximize(objective, q.log_sigmas(), config.sigma_options);
    const Vector clamped = report.argmax.cwiseMax(lo).cwiseMin(hi);
    for (Index n = 0; n < clamped.size(); ++n) {
      if (clamped(n) <= lo || clamped(n) >= hi) {
        result.warnings.push_back(
            "bandwidth " + std::to_string(n) + " clamped at sigma = " +
            std::to_string(std::exp(clamped(n))) +
            (terms.traces(n) > 0.0 ? " (positive Hessian trace)" : ""));
      }
    }
    q.set_log_sigmas(clamped);
  } catch (const InputError& e) {
    result.warnings.push_back(std::string("bandwidth step: ") + e.what() +
                              "; kept previous bandwidths");
  }
}

}  // namespace

void NpvConfig::validate() const {
  if (num_components < 1) throw ConfigError("num_components must be at least 1");
  if (!(tolerance > 0.0)) throw ConfigError("tolerance must be positive");
  if (max_outer_iterations < 1)
    throw ConfigError("max_outer_iterations must be at least 1");
  if (!(log_sigma_min < log_sigma_max))
    throw ConfigError("bandwidth bounds must satisfy sigma_min < sigma_max");
  if (!(initial_sigma > 0.0)) throw ConfigError("initial_sigma must be positive");
  const double log_init = std::log(initial_sigma);
  if (log_init < log_sigma_min || log_init > log_sigma_max)
    throw ConfigError("initial_sigma lies outside the bandwidth bounds");
  if (!(mean_init_scale >= 0.0)) throw ConfigError("mean_init_scale must be >= 0");
  if (max_init_attempts < 1) throw ConfigError("max_init_attempts must be >= 1");
  if (initial_means && initial_means->rows() != num_components)
    throw ConfigError("initial_means must have num_components rows");
}

MixtureApproximation initial_mixture(Index dimension, const NpvConfig& config,
                                     int attempt) {
  const Index count = config.num_components;
  Vector sigmas = Vector::Constant(count, config.initial_sigma);
  if (config.initial_means && attempt == 0) {
    if (config.initial_means->cols() != dimension)
      throw ConfigError("initial_means has the wrong number of columns");
    return MixtureApproximation(*config.initial_means, std::move(sigmas));
  }
  std::mt19937_64 rng(config.seed + static_cast<std::uint64_t>(attempt));
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix means(count, dimension);
  for (Index n = 0; n < count; ++n)
    for (Index i = 0; i < dimension; ++i)
      means(n, i) = config.mean_init_scale * normal(rng);
  return MixtureApproximation(std::move(means), std::move(sigmas));
}

FitResult fit(const LogJointModel& model, const NpvConfig& config) {
  config.validate();
  if (!model.has_gradient() || !model.has_hessian_diag())
    throw CapabilityError("NPV needs the gradient and Hessian diagonal of the model");
  const auto started = std::chrono::steady_clock::now();

  const Index dim = model.dimension();
  std::optional<MixtureApproximation> q;
  MeanTerms terms;
  double l2 = 0.0;
  for (int attempt = 0; attempt < config.max_init_attempts; ++attempt) {
    MixtureApproximation candidate = initial_mixture(dim, config, attempt);
    terms = evaluate_means(candidate, model);
    l2 = l2_of(candidate, terms);
    if (std::isfinite(l2)) {
      q = std::move(candidate);
      break;
    }
  }
  if (!q) {
    throw NumericalError("L2 is not finite at initialisation after " +
                         std::to_string(config.max_init_attempts) + " attempts");
  }

  FitResult result{*q, {l2}, false, 0, 0.0, {}};
  MixtureApproximation& mixture = result.mixture;
  for (int iter = 0; iter < config.max_outer_iterations; ++iter) {
    if (config.batch_means) {
      update_means_jointly(mixture, model, config, result);
    } else {
      for (Index n = 0; n < mixture.size(); ++n)
        update_mean(mixture, model, n, config, result);
    }
    terms = evaluate_means(mixture, model);
    if (!config.freeze_bandwidths) update_bandwidths(mixture, terms, config, result);

    const double next = l2_of(mixture, terms);
    result.l2_trace.push_back(next);
    result.outer_iterations = iter + 1;
    if (!std::isfinite(next)) {
      throw NumericalError("L2 became non-finite at outer iteration " +
                           std::to_string(iter + 1));
    }
    if (std::abs(next - l2) < config.tolerance) {
      result.converged = true;
      break;
    }
    l2 = next;
  }
  result.wall_time = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - started)
                         .count();
  return result;
}

}  // namespace npvi
