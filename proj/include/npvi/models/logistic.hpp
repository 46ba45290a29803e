#pragma once

#include <cstdint>
#include <vector>

#include "npvi/models/dataset.hpp"
#include "npvi/transform.hpp"

namespace npvi {

struct LogisticModelSpec {
  double a = 1.0;   // Gamma shape
  double b = 0.01;  // Gamma inverse scale
  DatasetTable data;

  void validate() const;
};

/**
 * Hierarchical Bayesian logistic regression on theta = (w_1..w_K, alpha):
 *   alpha ~ Gamma(a, b), w_k | alpha ~ N(0, 1/alpha),
 *   p(c_t = 1 | x_t, w) = sigmoid(w^T x_t).
 * Constrained space (alpha > 0).
 */
class LogisticModel final : public LogJointModel {
 public:
  explicit LogisticModel(LogisticModelSpec spec);

  Index dimension() const override { return num_features_ + 1; }
  Index num_features() const { return num_features_; }

 protected:
  double do_eval(const Vector& theta, Vector* gradient,
                 Vector* hessian_diag) const override;

 private:
  LogisticModelSpec spec_;
  Index num_features_;
  Matrix signed_covariates_;  // row t is c_t * x_t
};

TransformSpec logistic_transform_spec(Index num_features);

/// The model on unconstrained space (log alpha in the last coordinate).
ModelPtr logistic_log_joint(const LogisticModelSpec& spec);

/// Mean over samples of sigmoid(w^T x_new). Samples carry w in their
/// first K coordinates. InputError on an empty sample list.
double logistic_predict(const std::vector<Vector>& samples,
                        const Vector& x_new);

enum class PredictiveRule {
  average_of_log,  // mean over samples of log p(c | x, w_s)
  log_of_average,  // log of the mean predictive probability
};

/// Mean per-point test log-likelihood of the labeled rows.
double logistic_test_log_likelihood(
    const std::vector<Vector>& samples, const DatasetTable& test,
    PredictiveRule rule = PredictiveRule::average_of_log);

/**
 * Forward samples: x_t ~ N(0, I_K), c_t = +1 with probability
 * sigmoid(w_true^T x_t). When w_true is empty it is drawn from
 * N(0, 1 / alpha_true) with the same seed and, if requested, reported
 * through w_used.
 */
DatasetTable synth_logistic(std::uint64_t seed, Index rows, Index features,
                            const Vector& w_true, double alpha_true,
                            Vector* w_used = nullptr);

}  // namespace npvi
