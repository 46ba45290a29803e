#include "npvi/model.hpp"

#include <string>

#include "npvi/error.hpp"

namespace npvi {

double LogJointModel::eval(const Vector& theta, Vector* gradient,
                           Vector* hessian_diag) const {
  if (theta.size() != dimension()) {
    throw ConfigError("model expects " + std::to_string(dimension()) +
                      " coordinates, got " + std::to_string(theta.size()));
  }
  if (gradient && !has_gradient()) {
    throw CapabilityError("model does not provide a gradient");
  }
  if (hessian_diag && !has_hessian_diag()) {
    throw CapabilityError("model does not provide a Hessian diagonal");
  }
  if (gradient) gradient->resize(dimension());
  if (hessian_diag) hessian_diag->resize(dimension());
  return do_eval(theta, gradient, hessian_diag);
}

FunctionModel::FunctionModel(Index dimension, ValueFn value, VectorFn gradient,
                             VectorFn hessian_diag)
    : dimension_(dimension),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      hessian_diag_(std::move(hessian_diag)) {
  if (dimension_ < 1) throw ConfigError("model dimension must be positive");
  if (!value_) throw ConfigError("model needs a value function");
}

double FunctionModel::do_eval(const Vector& theta, Vector* gradient,
                              Vector* hessian_diag) const {
  if (gradient) {
    *gradient = gradient_(theta);
    if (gradient->size() != dimension_)
      throw ConfigError("gradient callback returned the wrong length");
  }
  if (hessian_diag) {
    *hessian_diag = hessian_diag_(theta);
    if (hessian_diag->size() != dimension_)
      throw ConfigError("Hessian callback returned the wrong length");
  }
  return value_(theta);
}

ModelPtr make_function_model(Index dimension, FunctionModel::ValueFn value,
                             FunctionModel::VectorFn gradient,
                             FunctionModel::VectorFn hessian_diag) {
  return std::make_shared<FunctionModel>(dimension, std::move(value),
                                         std::move(gradient),
                                         std::move(hessian_diag));
}

double hessian_trace(const LogJointModel& model, const Vector& theta) {
  Vector h;
  model.eval(theta, nullptr, &h);
  return h.sum();
}

}  // namespace npvi
