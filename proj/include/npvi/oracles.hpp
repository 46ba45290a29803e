#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "npvi/mixture.hpp"
#include "npvi/model.hpp"

// Numerical ground truth used to check the engines: finite differences,
// Monte Carlo entropy and low-dimensional quadrature. Nothing here shares
// code with the quantities it validates.
namespace npvi::oracles {

using ScalarFn = std::function<double(const Vector&)>;

/// Central differences; NumericalError names the coordinate whose stencil
/// produced a non-finite value.
Vector fd_gradient(const ScalarFn& fn, const Vector& theta, double step = 1e-5);

/// Second central differences per coordinate.
Vector fd_hessian_diag(const ScalarFn& fn, const Vector& theta,
                       double step = 1e-4);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
};

/// -mean log q over draws from q. Requires num_samples >= 1000.
MonteCarloEstimate mc_entropy(const MixtureApproximation& q,
                              std::size_t num_samples, std::uint64_t seed);

struct GridAxis {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t points = 0;  // >= 16
};

struct GridSpec {
  std::vector<GridAxis> axes;  // one or two

  void validate() const;
};

/**
 * log of the trapezoid-rule integral of exp(f) over the grid, accumulated
 * in the log domain. Throws InputError when f on the grid boundary is not
 * at least 25 nats below its maximum on the grid.
 */
double grid_log_evidence(const LogJointModel& model, const GridSpec& grid);

/// Grid point with the largest f.
Vector grid_argmax(const LogJointModel& model, const GridSpec& grid);

/**
 * Local modes of f located by exhaustive search: grid maxima that beat
 * their neighbours are refined by repeated zoomed grids until the cell
 * width is below `resolution`. Derivative-free.
 */
std::vector<Vector> grid_modes(const LogJointModel& model,
                               const GridSpec& grid, double resolution = 1e-5);

}  // namespace npvi::oracles
