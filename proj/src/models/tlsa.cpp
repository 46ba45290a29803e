#include "npvi/models/tlsa.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "npvi/error.hpp"

namespace npvi {
namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

// K x V basis images.
Matrix basis_matrix(const TlsaParameters& p, const Matrix& voxels) {
  Matrix g(p.centers.rows(), voxels.rows());
  for (Index k = 0; k < p.centers.rows(); ++k)
    g.row(k) = tlsa_basis(p.centers.row(k).transpose(), p.widths(k), voxels).transpose();
  return g;
}

}  // namespace

void TlsaModelSpec::validate() const {
  if (num_sources < 1) throw ConfigError("TLSA needs at least one source");
  if (voxel_locations.rows() < 1 || voxel_locations.cols() < 1)
    throw ConfigError("TLSA needs voxel locations");
  if ((voxel_locations.array() < 0.0).any() || (voxel_locations.array() > 1.0).any())
    throw ConfigError("voxel locations must lie in the unit hypercube");
  if (covariates.cols() < 1) throw ConfigError("TLSA needs at least one covariate");
  if (activations.rows() != covariates.rows())
    throw ConfigError("activation rows must match covariate rows");
  if (activations.rows() > 0 && activations.cols() != voxel_locations.rows())
    throw ConfigError("activation columns must match the voxel count");
  if (!covariates.allFinite() || !activations.allFinite())
    throw ConfigError("TLSA data must be finite");
  if (!(tau > 0.0)) throw ConfigError("TLSA noise precision must be positive");
  if (!(weight_variance > 0.0)) throw ConfigError("TLSA weight variance must be positive");
  if (!(width_rate > 0.0)) throw ConfigError("TLSA width rate must be positive");
}

Index tlsa_dimension(Index covariates, Index sources, Index spatial_dim) {
  return covariates * sources + sources * spatial_dim + sources;
}

Vector tlsa_pack(const TlsaParameters& p) {
  const Index c = p.weights.rows();
  const Index k = p.weights.cols();
  const Index m = p.centers.cols();
  Vector theta(tlsa_dimension(c, k, m));
  Index at = 0;
  for (Index i = 0; i < c; ++i)
    for (Index j = 0; j < k; ++j) theta(at++) = p.weights(i, j);
  for (Index j = 0; j < k; ++j)
    for (Index d = 0; d < m; ++d) theta(at++) = p.centers(j, d);
  for (Index j = 0; j < k; ++j) theta(at++) = p.widths(j);
  return theta;
}

TlsaParameters tlsa_unpack(const Vector& theta, Index covariates, Index sources,
                           Index spatial_dim) {
  if (theta.size() != tlsa_dimension(covariates, sources, spatial_dim))
    throw ConfigError("TLSA parameter vector has the wrong length");
  TlsaParameters p{Matrix(covariates, sources), Matrix(sources, spatial_dim),
                   Vector(sources)};
  Index at = 0;
  for (Index i = 0; i < covariates; ++i)
    for (Index j = 0; j < sources; ++j) p.weights(i, j) = theta(at++);
  for (Index j = 0; j < sources; ++j)
    for (Index d = 0; d < spatial_dim; ++d) p.centers(j, d) = theta(at++);
  for (Index j = 0; j < sources; ++j) p.widths(j) = theta(at++);
  return p;
}

TransformSpec tlsa_transform_spec(Index covariates, Index sources, Index spatial_dim) {
  TransformSpec spec(static_cast<std::size_t>(covariates * sources), Transform::identity);
  spec.insert(spec.end(), static_cast<std::size_t>(sources * spatial_dim), Transform::logit);
  spec.insert(spec.end(), static_cast<std::size_t>(sources), Transform::log_positive);
  return spec;
}

Vector tlsa_basis(const Vector& center, double width, const Matrix& voxel_locations) {
  if (!(width > 0.0)) throw ConfigError("TLSA source width must be positive");
  if (center.size() != voxel_locations.cols())
    throw ConfigError("source center and voxel locations differ in dimension");
  Vector g(voxel_locations.rows());
  for (Index v = 0; v < g.size(); ++v) {
    const double sq = (voxel_locations.row(v) - center.transpose()).squaredNorm();
    g(v) = std::exp(-sq / width);
  }
  return g;
}

Matrix tlsa_mean_activations(const TlsaParameters& params, const Matrix& covariates,
                             const Matrix& voxel_locations) {
  return covariates * params.weights * basis_matrix(params, voxel_locations);
}

TlsaModel::TlsaModel(TlsaModelSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

Index TlsaModel::dimension() const {
  return tlsa_dimension(spec_.num_covariates(), spec_.num_sources, spec_.spatial_dim());
}

double TlsaModel::do_eval(const Vector& theta, Vector* gradient,
                          Vector* hessian_diag) const {
  const Index nc = spec_.num_covariates();
  const Index nk = spec_.num_sources;
  const Index nm = spec_.spatial_dim();
  const Index nv = spec_.num_voxels();
  const Index nt = spec_.activations.rows();
  const TlsaParameters p = tlsa_unpack(theta, nc, nk, nm);

  const bool outside = (p.widths.array() <= 0.0).any() ||
                       (p.centers.array() < 0.0).any() ||
                       (p.centers.array() > 1.0).any();
  if (outside) {
    if (gradient) gradient->setZero();
    if (hessian_diag) hessian_diag->setZero();
    return -std::numeric_limits<double>::infinity();
  }

  const double tau = spec_.tau;
  const double sw2 = spec_.weight_variance;
  const double rho = spec_.width_rate;
  const Matrix& x = spec_.covariates;
  const Matrix g = basis_matrix(p, spec_.voxel_locations);
  const Matrix b = x * p.weights;  // T x K
  const Matrix resid = spec_.activations - b * g;

  double value = -0.5 * tau * resid.squaredNorm() +
                 0.5 * static_cast<double>(nt * nv) * (std::log(tau) - kLog2Pi);
  value += -0.5 * static_cast<double>(nc * nk) * (kLog2Pi + std::log(sw2)) -
           0.5 * p.weights.squaredNorm() / sw2;
  // Beta(1, 1) on each center coordinate has log-density 0 on (0, 1).
  constexpr double kLogBetaOneOne = 0.0;
  value += static_cast<double>(nk * nm) * kLogBetaOneOne;
  value += static_cast<double>(nk) * std::log(rho) - rho * p.widths.sum();

  if (!gradient && !hessian_diag) return value;

  const Matrix grad_w = tau * x.transpose() * resid * g.transpose() - p.weights / sw2;
  const Matrix proj = resid.transpose() * b;  // V x K
  const Vector b_sq = b.colwise().squaredNorm().transpose();  // K
  const Vector x_sq = x.colwise().squaredNorm().transpose();  // C
  const Vector g_sq = g.rowwise().squaredNorm();                // K

  Matrix grad_c(nk, nm), hess_c(nk, nm);
  Vector grad_l(nk), hess_l(nk);
  for (Index k = 0; k < nk; ++k) {
    const double lam = p.widths(k);
    double gl = 0.0, hl = 0.0;
    for (Index d = 0; d < nm; ++d) {
      double gc = 0.0, hc = 0.0;
      for (Index v = 0; v < nv; ++v) {
        const double a = 2.0 * (spec_.voxel_locations(v, d) - p.centers(k, d)) / lam;
        const double dg = g(k, v) * a;
        const double d2g = g(k, v) * (a * a - 2.0 / lam);
        gc += proj(v, k) * dg;
        hc += -b_sq(k) * dg * dg + proj(v, k) * d2g;
      }
      grad_c(k, d) = tau * gc;
      hess_c(k, d) = tau * hc;
    }
    for (Index v = 0; v < nv; ++v) {
      const double sq = (spec_.voxel_locations.row(v) - p.centers.row(k)).squaredNorm();
      const double r = sq / (lam * lam);
      const double dg = g(k, v) * r;
      const double d2g = g(k, v) * (r * r - 2.0 * sq / (lam * lam * lam));
      gl += proj(v, k) * dg;
      hl += -b_sq(k) * dg * dg + proj(v, k) * d2g;
    }
    grad_l(k) = tau * gl - rho;
    hess_l(k) = tau * hl;
  }

  if (gradient) {
    *gradient = tlsa_pack({grad_w, grad_c, grad_l});
  }
  if (hessian_diag) {
    Matrix hess_w(nc, nk);
    for (Index c = 0; c < nc; ++c)
      for (Index k = 0; k < nk; ++k) hess_w(c, k) = -tau * x_sq(c) * g_sq(k) - 1.0 / sw2;
    *hessian_diag = tlsa_pack({hess_w, hess_c, hess_l});
  }
  return value;
}

ModelPtr tlsa_log_joint(const TlsaModelSpec& spec) {
  auto inner = std::make_shared<TlsaModel>(spec);
  return wrap_transformed(inner, tlsa_transform_spec(spec.num_covariates(),
                                                     spec.num_sources,
                                                     spec.spatial_dim()));
}

Matrix tlsa_reconstruct(const std::vector<Vector>& samples, const Matrix& test_covariates,
                        const TlsaModelSpec& spec) {
  if (samples.empty()) throw InputError("tlsa_reconstruct needs at least one sample");
  const Index nc = spec.num_covariates();
  const Index nk = spec.num_sources;
  const Index nm = spec.spatial_dim();
  if (test_covariates.cols() != nc)
    throw ConfigError("test covariates have the wrong number of columns");
  const TransformSpec transform = tlsa_transform_spec(nc, nk, nm);
  Matrix total = Matrix::Zero(test_covariates.rows(), spec.num_voxels());
  for (const auto& s : samples) {
    const TlsaParameters p = tlsa_unpack(apply_transform(transform, s), nc, nk, nm);
    total += tlsa_mean_activations(p, test_covariates, spec.voxel_locations);
  }
  return total / static_cast<double>(samples.size());
}

Matrix tlsa_voxel_grid(Index side) {
  if (side < 1) throw ConfigError("voxel grid side must be positive");
  Matrix r(side * side, 2);
  for (Index i = 0; i < side; ++i)
    for (Index j = 0; j < side; ++j) {
      r(i * side + j, 0) = (static_cast<double>(i) + 0.5) / static_cast<double>(side);
      r(i * side + j, 1) = (static_cast<double>(j) + 0.5) / static_cast<double>(side);
    }
  return r;
}

Matrix tlsa_class_covariates(std::uint64_t seed, Index rows, Index classes) {
  if (rows < 1 || classes < 1) throw ConfigError("design needs rows and classes");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> pick(0, classes - 1);
  Matrix x = Matrix::Zero(rows, classes);
  for (Index t = 0; t < rows; ++t) x(t, pick(rng)) = 1.0;
  return x;
}

TlsaParameters sample_tlsa_prior(std::uint64_t seed, const TlsaModelSpec& spec) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(spec.weight_variance));
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::exponential_distribution<double> exponential(spec.width_rate);
  TlsaParameters p{Matrix(spec.num_covariates(), spec.num_sources),
                   Matrix(spec.num_sources, spec.spatial_dim()), Vector(spec.num_sources)};
  for (Index i = 0; i < p.weights.size(); ++i) p.weights(i) = normal(rng);
  for (Index k = 0; k < spec.num_sources; ++k)
    for (Index d = 0; d < spec.spatial_dim(); ++d) p.centers(k, d) = uniform(rng);
  for (Index k = 0; k < spec.num_sources; ++k) p.widths(k) = exponential(rng);
  return p;
}

Matrix synth_tlsa(std::uint64_t seed, const TlsaModelSpec& spec, const TlsaParameters& truth) {
  if (!(spec.tau > 0.0)) throw ConfigError("noise precision must be positive");
  Matrix u = tlsa_mean_activations(truth, spec.covariates, spec.voxel_locations);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0 / std::sqrt(spec.tau));
  for (Index i = 0; i < u.rows(); ++i)
    for (Index j = 0; j < u.cols(); ++j) u(i, j) += noise(rng);
  return u;
}

}  // namespace npvi
