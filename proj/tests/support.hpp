#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "npvi/mixture.hpp"
#include "npvi/model.hpp"
#include "npvi/models/dataset.hpp"
#include "npvi/models/tlsa.hpp"
#include "npvi/oracles.hpp"

namespace npvi::testing {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double max_abs(const Vector& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

// Infinity-norm error relative to max(1, |reference|_inf).
inline double relative_error(const Vector& actual, const Vector& reference) {
  return max_abs(actual - reference) / std::max(1.0, max_abs(reference));
}

inline Vector random_vector(std::mt19937_64& rng, Index n, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

inline MixtureApproximation random_mixture(std::mt19937_64& rng, Index n, Index d,
                                           double spread = 1.5) {
  std::normal_distribution<double> normal(0.0, spread);
  std::uniform_real_distribution<double> sig(0.3, 1.5);
  Matrix means(n, d);
  Vector sigmas(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) means(i, j) = normal(rng);
    sigmas(i) = sig(rng);
  }
  return MixtureApproximation(means, sigmas);
}

// f = c + b^T x - 1/2 x^T P x with P symmetric positive definite.
struct Quadratic {
  double c = 0.0;
  Vector b;
  Matrix p;

  double value(const Vector& x) const { return c + b.dot(x) - 0.5 * x.dot(p * x); }

  // Exact E[f] under N(mu, sigma^2 I).
  double gaussian_expectation(const Vector& mu, double sigma) const {
    return value(mu) - 0.5 * sigma * sigma * p.trace();
  }

  ModelPtr model() const {
    const Quadratic self = *this;
    return make_function_model(
        b.size(), [self](const Vector& x) { return self.value(x); },
        [self](const Vector& x) { return Vector(self.b - self.p * x); },
        [self](const Vector&) { return Vector(-self.p.diagonal()); });
  }
};

inline Quadratic random_quadratic(std::mt19937_64& rng, Index d) {
  Quadratic q;
  q.c = random_vector(rng, 1)(0);
  q.b = random_vector(rng, d);
  Matrix a(d, d);
  for (Index i = 0; i < d; ++i) a.row(i) = random_vector(rng, d).transpose();
  q.p = a * a.transpose() + 0.5 * Matrix::Identity(d, d);
  return q;
}

// Hessian diagonal oracle: central differences of each gradient coordinate.
inline Vector fd_hessian_from_gradient(const LogJointModel& model, const Vector& theta,
                                       double step = 1e-5) {
  Vector out(theta.size());
  for (Index i = 0; i < theta.size(); ++i) {
    auto gi = [&](const Vector& x) {
      Vector g;
      model.eval(x, &g);
      return g(i);
    };
    out(i) = oracles::fd_gradient(gi, theta, step)(i);
  }
  return out;
}

inline Vector fd_model_gradient(const LogJointModel& model, const Vector& theta,
                                double step = 1e-5) {
  return oracles::fd_gradient([&](const Vector& x) { return model.eval(x); }, theta, step);
}

inline TlsaModelSpec small_tlsa_spec(std::uint64_t seed, Index grid, Index sources,
                                     Index classes, Index rows) {
  TlsaModelSpec spec;
  spec.num_sources = sources;
  spec.voxel_locations = tlsa_voxel_grid(grid);
  spec.covariates = tlsa_class_covariates(seed, rows, classes);
  spec.activations = Matrix::Zero(rows, spec.voxel_locations.rows());
  const TlsaParameters truth = sample_tlsa_prior(seed + 1, spec);
  spec.activations = synth_tlsa(seed + 2, spec, truth);
  return spec;
}

}  // namespace npvi::testing
