#pragma once

#include <string_view>
#include <vector>

#include "npvi/model.hpp"

namespace npvi {

// Coordinate-wise maps from unconstrained u to the model's native space.
enum class Transform {
  identity,      // x = u
  log_positive,  // x = exp(u) > 0
  logit,         // x = sigmoid(u) in (0, 1)
};

using TransformSpec = std::vector<Transform>;

// |u| is clamped to this before exponentiation; exp(709) is the last
// finite double. Derivatives are evaluated at the clamped point.
inline constexpr double kTransformClamp = 700.0;

std::string_view to_string(Transform t);

Vector apply_transform(const TransformSpec& spec, const Vector& u);

/// Inverse of apply_transform; x must lie in the image.
Vector invert_transform(const TransformSpec& spec, const Vector& x);

/// log |det J(u)| = sum of log-derivatives of the coordinate maps.
double log_jacobian(const TransformSpec& spec, const Vector& u);

/**
 * A model on the constrained space viewed on unconstrained space:
 * f(u) = inner.f(apply_transform(u)) + log_jacobian(u).
 *
 * The gradient and Hessian diagonal follow from the chain rule, including
 * the second derivative of the transform and of the Jacobian term.
 */
class TransformedModel final : public LogJointModel {
 public:
  TransformedModel(ModelPtr inner, TransformSpec spec);

  Index dimension() const override { return inner_->dimension(); }
  bool has_gradient() const override { return inner_->has_gradient(); }
  bool has_hessian_diag() const override {
    return inner_->has_hessian_diag();
  }

  const LogJointModel& inner() const { return *inner_; }
  const TransformSpec& spec() const { return spec_; }

 protected:
  double do_eval(const Vector& u, Vector* gradient,
                 Vector* hessian_diag) const override;

 private:
  ModelPtr inner_;
  TransformSpec spec_;
};

/// Throws ConfigError when spec.size() != inner->dimension().
ModelPtr wrap_transformed(ModelPtr inner, TransformSpec spec);

}  // namespace npvi
