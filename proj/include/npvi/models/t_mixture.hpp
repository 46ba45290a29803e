#pragma once

#include <vector>

#include "npvi/model.hpp"

namespace npvi {

/**
 * One skewed bivariate t component. With z = L^{-1} (x - location), where
 * L L^T = scale, the positive half of whitened axis i is stretched by
 * exp(skew_i). Zero skew gives the ordinary multivariate t.
 */
struct TComponent {
  Eigen::Vector2d location;
  Eigen::Matrix2d scale;
  double dof = 5.0;
  Eigen::Vector2d skew = Eigen::Vector2d::Zero();
};

struct TMixtureSpec {
  std::vector<TComponent> components;
  std::vector<double> weights;

  void validate() const;
};

/// Two components at (-2, -1) and (2, 1), dof 5, opposite correlations,
/// positive first axis stretched by a factor of two, equal weights.
TMixtureSpec canonical_t_mixture_spec();

class TMixtureTarget final : public LogJointModel {
 public:
  explicit TMixtureTarget(TMixtureSpec spec);

  Index dimension() const override { return 2; }
  const TMixtureSpec& spec() const { return spec_; }

 protected:
  double do_eval(const Vector& theta, Vector* gradient,
                 Vector* hessian_diag) const override;

 private:
  struct Prepared {
    Eigen::Vector2d location;
    Eigen::Matrix2d whiten;  // L^{-1}
    Eigen::Vector2d stretch;
    double dof;
    double log_const;  // log weight + normalising constant
  };

  TMixtureSpec spec_;
  std::vector<Prepared> prepared_;
};

ModelPtr t_mixture_target(const TMixtureSpec& spec);

}  // namespace npvi
