#include "npvi/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "npvi/error.hpp"

namespace npvi {
namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

// log of the mean of exp(v). Terms are summed in sorted order so the result
// does not depend on the component labelling; identical terms give back the
// term itself.
double log_mean_exp(Vector v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  std::sort(v.begin(), v.end());
  double total = 0.0;
  for (double x : v) total += std::exp(x - m);
  return m + std::log(total / static_cast<double>(v.size()));
}

void check_sigmas(const Vector& sigmas, Index n) {
  if (sigmas.size() != n) {
    throw ConfigError("mixture has " + std::to_string(n) +
                      " means but " + std::to_string(sigmas.size()) +
                      " bandwidths");
  }
  for (Index i = 0; i < n; ++i) {
    if (!(sigmas(i) > 0.0) || !std::isfinite(sigmas(i)))
      throw ConfigError("bandwidth " + std::to_string(i) +
                        " must be positive and finite");
  }
}

}  // namespace

MixtureApproximation::MixtureApproximation(Matrix means, Vector sigmas)
    : means_(std::move(means)), sigmas_(std::move(sigmas)) {
  if (means_.rows() < 1) throw ConfigError("mixture needs at least one component");
  if (means_.cols() < 1) throw ConfigError("mixture dimension must be positive");
  if (!means_.allFinite()) throw ConfigError("mixture means must be finite");
  check_sigmas(sigmas_, means_.rows());
}

void MixtureApproximation::set_mean(Index n, const Vector& mu) {
  if (mu.size() != dimension()) throw ConfigError("mean has the wrong length");
  if (!mu.allFinite()) throw ConfigError("mixture means must be finite");
  means_.row(n) = mu.transpose();
}

void MixtureApproximation::set_sigmas(const Vector& sigmas) {
  check_sigmas(sigmas, size());
  sigmas_ = sigmas;
}

void MixtureApproximation::set_log_sigmas(const Vector& log_sigmas) {
  set_sigmas(log_sigmas.array().exp().matrix());
}

bool MixtureApproximation::operator==(const MixtureApproximation& other) const {
  return means_.rows() == other.means_.rows() &&
         means_.cols() == other.means_.cols() && means_ == other.means_ &&
         sigmas_ == other.sigmas_;
}

double mixture_log_density(const MixtureApproximation& q, const Vector& theta) {
  if (theta.size() != q.dimension())
    throw ConfigError("point dimension does not match the mixture");
  const Index n = q.size();
  const double d = static_cast<double>(q.dimension());
  Vector terms(n);
  for (Index i = 0; i < n; ++i) {
    const double var = q.sigma(i) * q.sigma(i);
    const double sq = (theta.transpose() - q.means().row(i)).squaredNorm();
    terms(i) = -0.5 * d * (kLog2Pi + std::log(var)) - 0.5 * sq / var;
  }
  return log_mean_exp(terms);
}

double log_component_overlap(const MixtureApproximation& q, Index n) {
  const Index count = q.size();
  const double d = static_cast<double>(q.dimension());
  Vector terms(count);
  for (Index j = 0; j < count; ++j) {
    const double var = q.sigma(n) * q.sigma(n) + q.sigma(j) * q.sigma(j);
    const double sq = (q.means().row(n) - q.means().row(j)).squaredNorm();
    terms(j) = -0.5 * d * (kLog2Pi + std::log(var)) - 0.5 * sq / var;
  }
  return log_mean_exp(terms);
}

double component_overlap(const MixtureApproximation& q, Index n) {
  return std::exp(log_component_overlap(q, n));
}

double entropy_lower_bound(const MixtureApproximation& q) {
  Vector logs(q.size());
  for (Index n = 0; n < q.size(); ++n) logs(n) = log_component_overlap(q, n);
  std::sort(logs.begin(), logs.end());
  // Mean as an offset from the smallest term, exact for identical terms.
  const double base = logs(0);
  double offset = 0.0;
  for (double v : logs) offset += v - base;
  return -(base + offset / static_cast<double>(q.size()));
}

std::vector<Vector> sample_mixture(const MixtureApproximation& q,
                                   std::size_t count, std::uint64_t seed) {
  if (count < 1) throw InputError("sample count must be at least 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> pick(0, q.size() - 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Vector> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    const Index n = pick(rng);
    Vector draw = q.mean(n);
    for (Index i = 0; i < draw.size(); ++i) draw(i) += q.sigma(n) * normal(rng);
    out.push_back(std::move(draw));
  }
  return out;
}

MixtureApproximation permute_components(const MixtureApproximation& q,
                                        const std::vector<Index>& order) {
  if (static_cast<Index>(order.size()) != q.size())
    throw ConfigError("permutation has the wrong length");
  Matrix means(q.size(), q.dimension());
  Vector sigmas(q.size());
  for (Index i = 0; i < q.size(); ++i) {
    means.row(i) = q.means().row(order[i]);
    sigmas(i) = q.sigma(order[i]);
  }
  return MixtureApproximation(std::move(means), std::move(sigmas));
}

}  // namespace npvi
