#include "npvi/elbo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "npvi/error.hpp"

namespace npvi {
namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

double sorted_mean(Vector v) {
  std::sort(v.begin(), v.end());
  double total = 0.0;
  for (double x : v) total += x;
  return total / static_cast<double>(v.size());
}

void check_dimension(const MixtureApproximation& q, const LogJointModel& model) {
  if (q.dimension() != model.dimension())
    throw ConfigError("mixture dimension does not match the model");
}

Vector log_joint_at_means(const MixtureApproximation& q,
                          const LogJointModel& model) {
  Vector f(q.size());
  for (Index n = 0; n < q.size(); ++n) f(n) = model.eval(q.mean(n));
  return f;
}

}  // namespace

EntropyBoundGradient entropy_bound_gradient(const MixtureApproximation& q) {
  const Index count = q.size();
  const Index dim = q.dimension();
  const double d = static_cast<double>(dim);
  const double inv_n = 1.0 / static_cast<double>(count);

  EntropyBoundGradient out;
  out.d_means = Matrix::Zero(count, dim);
  out.d_log_sigmas = Vector::Zero(count);

  Vector log_overlaps(count);
  Vector terms(count);
  Vector var(count);
  Vector dlog_dvar(count);
  for (Index n = 0; n < count; ++n) {
    for (Index j = 0; j < count; ++j) {
      var(j) = q.sigma(n) * q.sigma(n) + q.sigma(j) * q.sigma(j);
      const double sq = (q.means().row(n) - q.means().row(j)).squaredNorm();
      terms(j) = -0.5 * d * (kLog2Pi + std::log(var(j))) - 0.5 * sq / var(j);
      dlog_dvar(j) = -0.5 * d / var(j) + 0.5 * sq / (var(j) * var(j));
    }
    const double peak = terms.maxCoeff();
    Vector resp = (terms.array() - peak).exp().matrix();
    const double total = resp.sum();
    resp /= total;
    log_overlaps(n) = peak + std::log(total) - std::log(static_cast<double>(count));

    // S = sum_n log q_n; accumulate dS and scale by -1/N at the end.
    for (Index j = 0; j < count; ++j) {
      if (j != n) {
        const double w = resp(j) / var(j);
        const auto diff = (q.means().row(n) - q.means().row(j)).eval();
        out.d_means.row(n) -= w * diff;
        out.d_means.row(j) += w * diff;
      }
      const double c = resp(j) * dlog_dvar(j);
      out.d_log_sigmas(n) += c * 2.0 * q.sigma(n) * q.sigma(n);
      out.d_log_sigmas(j) += c * 2.0 * q.sigma(j) * q.sigma(j);
    }
  }
  out.value = -sorted_mean(log_overlaps);
  out.d_means *= -inv_n;
  out.d_log_sigmas *= -inv_n;
  return out;
}

double elbo_l1(const MixtureApproximation& q, const LogJointModel& model) {
  check_dimension(q, model);
  const Vector f = log_joint_at_means(q, model);
  if ((f.array() == -std::numeric_limits<double>::infinity()).any())
    return -std::numeric_limits<double>::infinity();
  return sorted_mean(f) + entropy_lower_bound(q);
}

double elbo_l2_from_terms(const MixtureApproximation& q,
                          const Vector& log_joint_at_means,
                          const Vector& hessian_traces) {
  if ((log_joint_at_means.array() == -std::numeric_limits<double>::infinity()).any())
    return -std::numeric_limits<double>::infinity();
  Vector terms(q.size());
  for (Index n = 0; n < q.size(); ++n) {
    const double var = q.sigma(n) * q.sigma(n);
    terms(n) = log_joint_at_means(n) + 0.5 * var * hessian_traces(n);
  }
  return sorted_mean(terms) + entropy_lower_bound(q);
}

double elbo_l2(const MixtureApproximation& q, const LogJointModel& model) {
  check_dimension(q, model);
  if (!model.has_hessian_diag())
    throw CapabilityError("L2 needs the Hessian diagonal of the model");
  Vector f(q.size());
  Vector traces(q.size());
  Vector h;
  for (Index n = 0; n < q.size(); ++n) {
    f(n) = model.eval(q.mean(n), nullptr, &h);
    traces(n) = h.sum();
  }
  return elbo_l2_from_terms(q, f, traces);
}

Vector grad_l1_mean(const MixtureApproximation& q, const LogJointModel& model,
                    Index m) {
  check_dimension(q, model);
  if (m < 0 || m >= q.size()) throw ConfigError("component index out of range");
  Vector g;
  model.eval(q.mean(m), &g);
  const auto entropy = entropy_bound_gradient(q);
  return g / static_cast<double>(q.size()) + entropy.d_means.row(m).transpose();
}

Vector grad_l2_log_sigma_from_terms(const MixtureApproximation& q,
                                    const Vector& hessian_traces) {
  const auto entropy = entropy_bound_gradient(q);
  Vector out = entropy.d_log_sigmas;
  const double inv_n = 1.0 / static_cast<double>(q.size());
  for (Index n = 0; n < q.size(); ++n)
    out(n) += inv_n * q.sigma(n) * q.sigma(n) * hessian_traces(n);
  return out;
}

Vector grad_l2_log_sigma(const MixtureApproximation& q,
                         const LogJointModel& model) {
  check_dimension(q, model);
  if (!model.has_hessian_diag())
    throw CapabilityError("L2 needs the Hessian diagonal of the model");
  Vector traces(q.size());
  for (Index n = 0; n < q.size(); ++n) traces(n) = hessian_trace(model, q.mean(n));
  return grad_l2_log_sigma_from_terms(q, traces);
}

}  // namespace npvi
