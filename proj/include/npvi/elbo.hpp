#pragma once

#include "npvi/mixture.hpp"
#include "npvi/model.hpp"

namespace npvi {

// Entropy bound together with its partial derivatives with respect to
// every mean (rows of d_means) and every log-bandwidth.
struct EntropyBoundGradient {
  double value = 0.0;
  Matrix d_means;
  Vector d_log_sigmas;
};

EntropyBoundGradient entropy_bound_gradient(const MixtureApproximation& q);

/// First-order approximate ELBO: (1/N) sum_n [f(mu_n) - log q_n].
double elbo_l1(const MixtureApproximation& q, const LogJointModel& model);

/// Second-order approximate ELBO:
/// (1/N) sum_n [f(mu_n) + sigma_n^2 / 2 * Tr(H_n) - log q_n].
double elbo_l2(const MixtureApproximation& q, const LogJointModel& model);

/// Same as elbo_l2 with f(mu_n) and Tr(H_n) already evaluated.
double elbo_l2_from_terms(const MixtureApproximation& q,
                          const Vector& log_joint_at_means,
                          const Vector& hessian_traces);

/// dL1/dmu_m, including mu_m's appearance inside every q_n.
Vector grad_l1_mean(const MixtureApproximation& q, const LogJointModel& model,
                    Index m);

/// dL2/dlog(sigma_n) for every n.
Vector grad_l2_log_sigma(const MixtureApproximation& q,
                         const LogJointModel& model);

Vector grad_l2_log_sigma_from_terms(const MixtureApproximation& q,
                                    const Vector& hessian_traces);

}  // namespace npvi
