#pragma once

#include "npvi/model.hpp"

namespace npvi {

/// Normalised diagonal Gaussian log-density.
class GaussianTarget final : public LogJointModel {
 public:
  GaussianTarget(Vector mean, Vector variances);

  Index dimension() const override { return mean_.size(); }

 protected:
  double do_eval(const Vector& theta, Vector* gradient,
                 Vector* hessian_diag) const override;

 private:
  Vector mean_;
  Vector variances_;
  double log_norm_;
};

ModelPtr gaussian_target(const Vector& mean, const Vector& variances);

/// Standard normal in `dimension` coordinates.
ModelPtr standard_normal_target(Index dimension);

}  // namespace npvi
