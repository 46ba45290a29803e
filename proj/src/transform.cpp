#include "npvi/transform.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "npvi/error.hpp"

namespace npvi {
namespace {

double clamp_input(double u) {
  return std::clamp(u, -kTransformClamp, kTransformClamp);
}

// log(1 + e^x) without overflow.
double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double sigmoid(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

// Value, first and second derivative of a coordinate map together with
// the log-derivative and its first two derivatives.
struct CoordinateMap {
  double x, dx, d2x;
  double log_dx, d_log_dx, d2_log_dx;
};

CoordinateMap coordinate_map(Transform t, double u) {
  switch (t) {
    case Transform::identity:
      return {u, 1.0, 0.0, 0.0, 0.0, 0.0};
    case Transform::log_positive: {
      const double e = std::exp(clamp_input(u));
      return {e, e, e, clamp_input(u), 1.0, 0.0};
    }
    case Transform::logit: {
      const double v = clamp_input(u);
      const double s = sigmoid(v);
      const double one_minus = sigmoid(-v);
      const double ds = s * one_minus;
      return {s,
              ds,
              ds * (one_minus - s),
              -softplus(-v) - softplus(v),
              one_minus - s,
              -2.0 * ds};
    }
  }
  throw ConfigError("unknown transform");
}

void check_length(const TransformSpec& spec, const Vector& v) {
  if (static_cast<Index>(spec.size()) != v.size()) {
    throw ConfigError("transform spec has " + std::to_string(spec.size()) +
                      " entries but the vector has " +
                      std::to_string(v.size()));
  }
}

}  // namespace

std::string_view to_string(Transform t) {
  switch (t) {
    case Transform::identity: return "identity";
    case Transform::log_positive: return "log-positive";
    case Transform::logit: return "logit";
  }
  return "unknown";
}

Vector apply_transform(const TransformSpec& spec, const Vector& u) {
  check_length(spec, u);
  Vector x(u.size());
  for (Index i = 0; i < u.size(); ++i) x(i) = coordinate_map(spec[i], u(i)).x;
  return x;
}

Vector invert_transform(const TransformSpec& spec, const Vector& x) {
  check_length(spec, x);
  Vector u(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    switch (spec[i]) {
      case Transform::identity:
        u(i) = x(i);
        break;
      case Transform::log_positive:
        if (!(x(i) > 0.0)) throw InputError("log transform needs x > 0");
        u(i) = std::log(x(i));
        break;
      case Transform::logit:
        if (!(x(i) > 0.0 && x(i) < 1.0))
          throw InputError("logit transform needs 0 < x < 1");
        u(i) = std::log(x(i)) - std::log1p(-x(i));
        break;
    }
  }
  return u;
}

double log_jacobian(const TransformSpec& spec, const Vector& u) {
  check_length(spec, u);
  double total = 0.0;
  for (Index i = 0; i < u.size(); ++i)
    total += coordinate_map(spec[i], u(i)).log_dx;
  return total;
}

TransformedModel::TransformedModel(ModelPtr inner, TransformSpec spec)
    : inner_(std::move(inner)), spec_(std::move(spec)) {
  if (!inner_) throw ConfigError("transformed model needs an inner model");
  if (static_cast<Index>(spec_.size()) != inner_->dimension()) {
    throw ConfigError("transform spec has " + std::to_string(spec_.size()) +
                      " entries, model dimension is " +
                      std::to_string(inner_->dimension()));
  }
}

double TransformedModel::do_eval(const Vector& u, Vector* gradient,
                                 Vector* hessian_diag) const {
  const Index d = u.size();
  std::vector<CoordinateMap> maps(d);
  Vector x(d);
  double log_det = 0.0;
  for (Index i = 0; i < d; ++i) {
    maps[i] = coordinate_map(spec_[i], u(i));
    x(i) = maps[i].x;
    log_det += maps[i].log_dx;
  }

  Vector inner_grad;
  Vector inner_hess;
  // The chain rule for the Hessian diagonal needs the inner gradient too.
  const bool need_grad = gradient || hessian_diag;
  const double value = inner_->eval(x, need_grad ? &inner_grad : nullptr,
                                    hessian_diag ? &inner_hess : nullptr);

  if (gradient) {
    for (Index i = 0; i < d; ++i)
      (*gradient)(i) = inner_grad(i) * maps[i].dx + maps[i].d_log_dx;
  }
  if (hessian_diag) {
    for (Index i = 0; i < d; ++i) {
      const auto& m = maps[i];
      (*hessian_diag)(i) =
          inner_hess(i) * m.dx * m.dx + inner_grad(i) * m.d2x + m.d2_log_dx;
    }
  }
  return value + log_det;
}

ModelPtr wrap_transformed(ModelPtr inner, TransformSpec spec) {
  return std::make_shared<TransformedModel>(std::move(inner), std::move(spec));
}

}  // namespace npvi
