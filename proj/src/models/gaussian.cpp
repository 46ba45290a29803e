#include "npvi/models/gaussian.hpp"

#include <cmath>

#include "npvi/error.hpp"

namespace npvi {

GaussianTarget::GaussianTarget(Vector mean, Vector variances)
    : mean_(std::move(mean)), variances_(std::move(variances)) {
  if (mean_.size() < 1) throw ConfigError("Gaussian target needs dimension >= 1");
  if (variances_.size() != mean_.size())
    throw ConfigError("Gaussian target: mean and variance lengths differ");
  if (!(variances_.array() > 0.0).all() || !variances_.allFinite())
    throw ConfigError("Gaussian target: variances must be positive");
  constexpr double kLog2Pi = 1.8378770664093454835606594728112;
  log_norm_ = -0.5 * (static_cast<double>(mean_.size()) * kLog2Pi +
                      variances_.array().log().sum());
}

double GaussianTarget::do_eval(const Vector& theta, Vector* gradient,
                               Vector* hessian_diag) const {
  const Vector diff = theta - mean_;
  if (gradient) *gradient = -(diff.array() / variances_.array()).matrix();
  if (hessian_diag) *hessian_diag = (-variances_.array().inverse()).matrix();
  return log_norm_ - 0.5 * (diff.array().square() / variances_.array()).sum();
}

ModelPtr gaussian_target(const Vector& mean, const Vector& variances) {
  return std::make_shared<GaussianTarget>(mean, variances);
}

ModelPtr standard_normal_target(Index dimension) {
  return gaussian_target(Vector::Zero(dimension), Vector::Ones(dimension));
}

}  // namespace npvi
