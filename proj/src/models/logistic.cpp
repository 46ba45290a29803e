#include "npvi/models/logistic.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "npvi/error.hpp"

namespace npvi {
namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double sigmoid(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

double log_sigmoid(double u) { return -softplus(-u); }

}  // namespace

void LogisticModelSpec::validate() const {
  if (!(a > 0.0) || !(b > 0.0)) throw ConfigError("Gamma hyperparameters must be positive");
  if (data.covariates.cols() < 1) throw ConfigError("logistic model needs at least one covariate");
  if (data.covariates.rows() > 0) data.validate();
  if (data.covariates.rows() > 0 && !data.is_classification())
    throw ConfigError("logistic model needs a labeled table");
}

LogisticModel::LogisticModel(LogisticModelSpec spec)
    : spec_(std::move(spec)), num_features_(spec_.data.covariates.cols()) {
  spec_.validate();
  signed_covariates_ = spec_.data.covariates;
  for (Index t = 0; t < signed_covariates_.rows(); ++t)
    signed_covariates_.row(t) *= spec_.data.labels(t);
}

double LogisticModel::do_eval(const Vector& theta, Vector* gradient,
                              Vector* hessian_diag) const {
  const Index k = num_features_;
  const auto w = theta.head(k);
  const double alpha = theta(k);
  if (!(alpha > 0.0)) {
    if (gradient) gradient->setZero();
    if (hessian_diag) hessian_diag->setZero();
    return -std::numeric_limits<double>::infinity();
  }
  const double a = spec_.a;
  const double b = spec_.b;
  const double kd = static_cast<double>(k);

  const double log_prior_alpha =
      a * std::log(b) - std::lgamma(a) + (a - 1.0) * std::log(alpha) - b * alpha;
  const double log_prior_w =
      0.5 * kd * (std::log(alpha) - kLog2Pi) - 0.5 * alpha * w.squaredNorm();

  const Vector margins = signed_covariates_ * w;
  double log_lik = 0.0;
  for (Index t = 0; t < margins.size(); ++t) log_lik += log_sigmoid(margins(t));

  if (gradient) {
    Vector tail(margins.size());
    for (Index t = 0; t < margins.size(); ++t) tail(t) = sigmoid(-margins(t));
    gradient->head(k) = -alpha * w + signed_covariates_.transpose() * tail;
    (*gradient)(k) = (a - 1.0 + 0.5 * kd) / alpha - b - 0.5 * w.squaredNorm();
  }
  if (hessian_diag) {
    Vector curvature(margins.size());
    for (Index t = 0; t < margins.size(); ++t)
      curvature(t) = sigmoid(margins(t)) * sigmoid(-margins(t));
    hessian_diag->head(k) =
        (-alpha - (signed_covariates_.array().square().matrix().transpose() * curvature).array())
            .matrix();
    (*hessian_diag)(k) = -(a - 1.0 + 0.5 * kd) / (alpha * alpha);
  }
  return log_prior_alpha + log_prior_w + log_lik;
}

TransformSpec logistic_transform_spec(Index num_features) {
  TransformSpec spec(static_cast<std::size_t>(num_features), Transform::identity);
  spec.push_back(Transform::log_positive);
  return spec;
}

ModelPtr logistic_log_joint(const LogisticModelSpec& spec) {
  auto inner = std::make_shared<LogisticModel>(spec);
  return wrap_transformed(inner, logistic_transform_spec(inner->num_features()));
}

double logistic_predict(const std::vector<Vector>& samples, const Vector& x_new) {
  if (samples.empty()) throw InputError("logistic_predict needs at least one sample");
  const Index k = x_new.size();
  double total = 0.0;
  for (const auto& s : samples) {
    if (s.size() < k) throw ConfigError("sample is shorter than the covariate vector");
    total += sigmoid(s.head(k).dot(x_new));
  }
  return total / static_cast<double>(samples.size());
}

double logistic_test_log_likelihood(const std::vector<Vector>& samples,
                                    const DatasetTable& test,
                                    PredictiveRule rule) {
  if (samples.empty()) throw InputError("predictive log-likelihood needs samples");
  test.validate();
  if (!test.is_classification()) throw ConfigError("test table has no labels");
  const Index k = test.covariates.cols();
  const double s_count = static_cast<double>(samples.size());
  double total = 0.0;
  Vector per_sample(static_cast<Index>(samples.size()));
  for (Index t = 0; t < test.rows(); ++t) {
    const Vector x = test.labels(t) * test.covariates.row(t).transpose();
    for (std::size_t s = 0; s < samples.size(); ++s)
      per_sample(static_cast<Index>(s)) = log_sigmoid(samples[s].head(k).dot(x));
    if (rule == PredictiveRule::average_of_log) {
      total += per_sample.sum() / s_count;
    } else {
      const double peak = per_sample.maxCoeff();
      total += peak + std::log((per_sample.array() - peak).exp().sum() / s_count);
    }
  }
  return total / static_cast<double>(test.rows());
}

DatasetTable synth_logistic(std::uint64_t seed, Index rows, Index features,
                            const Vector& w_true, double alpha_true,
                            Vector* w_used) {
  if (rows < 1 || features < 1) throw ConfigError("synthetic table needs rows and features");
  if (w_true.size() != 0 && w_true.size() != features)
    throw ConfigError("w_true must have one entry per feature");
  if (w_true.size() == 0 && !(alpha_true > 0.0))
    throw ConfigError("alpha_true must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Vector w = w_true;
  if (w.size() == 0) {
    w.resize(features);
    for (Index i = 0; i < features; ++i) w(i) = normal(rng) / std::sqrt(alpha_true);
  }
  if (w_used) *w_used = w;
  DatasetTable table;
  table.covariates.resize(rows, features);
  table.labels.resize(rows);
  for (Index t = 0; t < rows; ++t) {
    for (Index i = 0; i < features; ++i) table.covariates(t, i) = normal(rng);
    const double p = sigmoid(table.covariates.row(t).dot(w));
    table.labels(t) = uniform(rng) < p ? 1.0 : -1.0;
  }
  return table;
}

}  // namespace npvi
