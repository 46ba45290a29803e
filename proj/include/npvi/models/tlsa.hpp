#pragma once

#include <cstdint>
#include <vector>

#include "npvi/transform.hpp"

namespace npvi {

struct TlsaModelSpec {
  Index num_sources = 3;      // K
  Matrix voxel_locations;     // V x M, entries in [0, 1]
  Matrix covariates;          // T x C
  Matrix activations;         // T x V
  double tau = 1.0;           // noise precision
  double weight_variance = 5.0;
  double width_rate = 1.0;    // rate of the exponential prior on widths

  Index num_covariates() const { return covariates.cols(); }
  Index num_voxels() const { return voxel_locations.rows(); }
  Index spatial_dim() const { return voxel_locations.cols(); }

  void validate() const;
};

/// Unpacked TLSA parameters (constrained space).
struct TlsaParameters {
  Matrix weights;  // C x K
  Matrix centers;  // K x M, in (0, 1)
  Vector widths;   // K, positive
};

/// Parameter layout: W row-major (c major), then centers row-major, then
/// widths. Dimension C*K + K*M + K.
Index tlsa_dimension(Index covariates, Index sources, Index spatial_dim);
Vector tlsa_pack(const TlsaParameters& params);
TlsaParameters tlsa_unpack(const Vector& theta, Index covariates,
                           Index sources, Index spatial_dim);

/// Identity on W, logit on the centers, log on the widths.
TransformSpec tlsa_transform_spec(Index covariates, Index sources,
                                  Index spatial_dim);

/// g_v = exp(-|r_v - center|^2 / width) for every voxel row r_v.
Vector tlsa_basis(const Vector& center, double width,
                  const Matrix& voxel_locations);

/// Noiseless activations X W G (T x V).
Matrix tlsa_mean_activations(const TlsaParameters& params,
                             const Matrix& covariates,
                             const Matrix& voxel_locations);

/**
 * Topographic latent source model in constrained space:
 *   u_tv ~ N(sum_c x_tc sum_k w_ck g_kv, 1/tau),
 *   w_ck ~ N(0, weight_variance), center_kd ~ Beta(1, 1),
 *   width_k ~ Exp(width_rate).
 */
class TlsaModel final : public LogJointModel {
 public:
  explicit TlsaModel(TlsaModelSpec spec);

  Index dimension() const override;
  const TlsaModelSpec& spec() const { return spec_; }

 protected:
  double do_eval(const Vector& theta, Vector* gradient,
                 Vector* hessian_diag) const override;

 private:
  TlsaModelSpec spec_;
};

/// The model on unconstrained space.
ModelPtr tlsa_log_joint(const TlsaModelSpec& spec);

/// Monte Carlo average of the noiseless activations over unconstrained
/// samples. InputError on an empty sample list.
Matrix tlsa_reconstruct(const std::vector<Vector>& samples,
                        const Matrix& test_covariates,
                        const TlsaModelSpec& spec);

/// Regular side x side grid of voxel centres in [0, 1]^2.
Matrix tlsa_voxel_grid(Index side);

/// One-hot class indicators, classes drawn uniformly.
Matrix tlsa_class_covariates(std::uint64_t seed, Index rows, Index classes);

/// Draws constrained parameters from the priors.
TlsaParameters sample_tlsa_prior(std::uint64_t seed, const TlsaModelSpec& spec);

/// Activations from the generative model at precision spec.tau.
Matrix synth_tlsa(std::uint64_t seed, const TlsaModelSpec& spec,
                  const TlsaParameters& truth);

}  // namespace npvi
