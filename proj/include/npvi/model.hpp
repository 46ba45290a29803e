#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "npvi/types.hpp"

namespace npvi {

/**
 * The log joint density f(theta) = log p(y, theta) of a model with
 * continuous hidden variables, together with its gradient and the
 * diagonal of its Hessian.
 *
 * Implementations must be immutable after construction: eval() is called
 * concurrently from several engines on the same instance.
 */
class LogJointModel {
 public:
  virtual ~LogJointModel() = default;

  virtual Index dimension() const = 0;
  virtual bool has_gradient() const { return true; }
  virtual bool has_hessian_diag() const { return true; }

  /**
   * Evaluates f at theta. When gradient / hessian_diag are non-null they
   * are resized to dimension() and filled.
   *
   * Throws ConfigError on a length mismatch and CapabilityError when a
   * derivative the model does not provide is requested. The value may be
   * -inf outside the support.
   */
  double eval(const Vector& theta, Vector* gradient = nullptr,
              Vector* hessian_diag = nullptr) const;

 protected:
  virtual double do_eval(const Vector& theta, Vector* gradient,
                         Vector* hessian_diag) const = 0;
};

using ModelPtr = std::shared_ptr<const LogJointModel>;

/// Adapts plain callables to the model contract.
class FunctionModel final : public LogJointModel {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using VectorFn = std::function<Vector(const Vector&)>;

  FunctionModel(Index dimension, ValueFn value, VectorFn gradient = {},
                VectorFn hessian_diag = {});

  Index dimension() const override { return dimension_; }
  bool has_gradient() const override { return static_cast<bool>(gradient_); }
  bool has_hessian_diag() const override {
    return static_cast<bool>(hessian_diag_);
  }

 protected:
  double do_eval(const Vector& theta, Vector* gradient,
                 Vector* hessian_diag) const override;

 private:
  Index dimension_;
  ValueFn value_;
  VectorFn gradient_;
  VectorFn hessian_diag_;
};

ModelPtr make_function_model(Index dimension, FunctionModel::ValueFn value,
                             FunctionModel::VectorFn gradient = {},
                             FunctionModel::VectorFn hessian_diag = {});

/// Sum of the Hessian diagonal at theta; CapabilityError if unavailable.
double hessian_trace(const LogJointModel& model, const Vector& theta);

}  // namespace npvi
