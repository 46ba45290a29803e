#include "npvi/models/t_mixture.hpp"

#include <cmath>
#include <numbers>

#include "npvi/error.hpp"

namespace npvi {

void TMixtureSpec::validate() const {
  if (components.empty()) throw ConfigError("t mixture needs at least one component");
  if (weights.size() != components.size())
    throw ConfigError("t mixture: one weight per component");
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw ConfigError("t mixture weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ConfigError("t mixture weights must sum to 1");
  for (const auto& c : components) {
    if (!(c.dof > 0.0)) throw ConfigError("t mixture degrees of freedom must be positive");
    if (!c.location.allFinite() || !c.skew.allFinite())
      throw ConfigError("t mixture location and skew must be finite");
    Eigen::LLT<Eigen::Matrix2d> llt(c.scale);
    if (llt.info() != Eigen::Success || !c.scale.isApprox(c.scale.transpose()))
      throw ConfigError("t mixture scale must be symmetric positive definite");
  }
}

TMixtureSpec canonical_t_mixture_spec() {
  TMixtureSpec spec;
  TComponent a;
  a.location << -2.0, -1.0;
  a.scale << 1.0, 0.6, 0.6, 1.0;
  a.dof = 5.0;
  a.skew << std::log(2.0), 0.0;
  TComponent b = a;
  b.location << 2.0, 1.0;
  b.scale << 1.0, -0.4, -0.4, 1.0;
  spec.components = {a, b};
  spec.weights = {0.5, 0.5};
  return spec;
}

TMixtureTarget::TMixtureTarget(TMixtureSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  for (std::size_t k = 0; k < spec_.components.size(); ++k) {
    const auto& c = spec_.components[k];
    const Eigen::Matrix2d lower = Eigen::LLT<Eigen::Matrix2d>(c.scale).matrixL();
    Prepared p;
    p.location = c.location;
    p.whiten = lower.inverse();
    p.stretch = c.skew.array().exp().matrix();
    p.dof = c.dof;
    // Each stretched half-axis scales that half's mass by its factor, so
    // the two-piece density needs 2 / (1 + s_i) per axis.
    const double log_two_piece =
        (2.0 / (1.0 + p.stretch.array())).log().sum();
    p.log_const = std::log(spec_.weights[k]) + log_two_piece +
                  std::lgamma(0.5 * (c.dof + 2.0)) - std::lgamma(0.5 * c.dof) -
                  std::log(c.dof * std::numbers::pi) -
                  std::log(lower(0, 0) * lower(1, 1));
    prepared_.push_back(p);
  }
}

double TMixtureTarget::do_eval(const Vector& theta, Vector* gradient,
                               Vector* hessian_diag) const {
  const std::size_t count = prepared_.size();
  std::vector<double> logs(count);
  std::vector<Eigen::Vector2d> grads(count);
  std::vector<Eigen::Vector2d> hess(count);
  const Eigen::Vector2d x = theta.head<2>();
  for (std::size_t k = 0; k < count; ++k) {
    const auto& p = prepared_[k];
    const Eigen::Vector2d z = p.whiten * (x - p.location);
    Eigen::Vector2d d;
    for (int i = 0; i < 2; ++i) d(i) = z(i) >= 0.0 ? 1.0 / p.stretch(i) : 1.0;
    const Eigen::Vector2d y = d.cwiseProduct(z);
    const double quad = y.squaredNorm();
    const double coef = (p.dof + 2.0) / (2.0 * (p.dof + quad));
    logs[k] = p.log_const - 0.5 * (p.dof + 2.0) * std::log1p(quad / p.dof);
    if (gradient || hessian_diag) {
      const Eigen::Vector2d dq = 2.0 * p.whiten.transpose() * d.cwiseProduct(y);
      grads[k] = -coef * dq;
      if (hessian_diag) {
        for (int i = 0; i < 2; ++i) {
          double d2q = 0.0;
          for (int j = 0; j < 2; ++j) d2q += 2.0 * std::pow(p.whiten(j, i) * d(j), 2);
          hess[k](i) = coef / (p.dof + quad) * dq(i) * dq(i) - coef * d2q;
        }
      }
    }
  }
  double peak = logs[0];
  for (double l : logs) peak = std::max(peak, l);
  double total = 0.0;
  for (double l : logs) total += std::exp(l - peak);
  const double value = peak + std::log(total);

  if (gradient || hessian_diag) {
    Eigen::Vector2d g = Eigen::Vector2d::Zero();
    Eigen::Vector2d second = Eigen::Vector2d::Zero();
    for (std::size_t k = 0; k < count; ++k) {
      const double r = std::exp(logs[k] - value);
      g += r * grads[k];
      if (hessian_diag) second += r * (hess[k] + grads[k].cwiseAbs2());
    }
    if (gradient) *gradient = g;
    if (hessian_diag) *hessian_diag = second - g.cwiseAbs2();
  }
  return value;
}

ModelPtr t_mixture_target(const TMixtureSpec& spec) {
  return std::make_shared<TMixtureTarget>(spec);
}

}  // namespace npvi
