#pragma once

#include <cstdint>
#include <vector>

#include "npvi/types.hpp"

namespace npvi {

/**
 * Uniformly weighted mixture of isotropic Gaussians,
 *   q(theta) = (1/N) sum_n N(theta; mu_n, sigma_n^2 I).
 *
 * Means are stored as the rows of an N x D matrix. The object is always
 * valid: N >= 1, every sigma_n > 0, all entries finite.
 */
class MixtureApproximation {
 public:
  MixtureApproximation(Matrix means, Vector sigmas);

  Index size() const { return means_.rows(); }
  Index dimension() const { return means_.cols(); }

  const Matrix& means() const { return means_; }
  const Vector& sigmas() const { return sigmas_; }

  Vector mean(Index n) const { return means_.row(n).transpose(); }
  double sigma(Index n) const { return sigmas_(n); }

  void set_mean(Index n, const Vector& mu);
  void set_sigmas(const Vector& sigmas);
  Vector log_sigmas() const { return sigmas_.array().log().matrix(); }
  void set_log_sigmas(const Vector& log_sigmas);

  bool operator==(const MixtureApproximation& other) const;

 private:
  Matrix means_;
  Vector sigmas_;
};

/// log q(theta), stabilised with log-sum-exp.
double mixture_log_density(const MixtureApproximation& q, const Vector& theta);

/// log q_n with q_n = (1/N) sum_j N(mu_n; mu_j, (sigma_n^2 + sigma_j^2) I).
double log_component_overlap(const MixtureApproximation& q, Index n);

/// q_n itself. Underflows to 0 for far-apart, narrow components; the bound
/// below always goes through the log form.
double component_overlap(const MixtureApproximation& q, Index n);

/// Jensen lower bound on the mixture entropy: -(1/N) sum_n log q_n.
double entropy_lower_bound(const MixtureApproximation& q);

/// i.i.d. draws: uniform component, then N(mu_n, sigma_n^2 I).
std::vector<Vector> sample_mixture(const MixtureApproximation& q,
                                   std::size_t count, std::uint64_t seed);

/// Mixture whose components are the ones of q listed in order.
MixtureApproximation permute_components(const MixtureApproximation& q,
                                        const std::vector<Index>& order);

}  // namespace npvi
