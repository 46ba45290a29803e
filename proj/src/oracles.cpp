#include "npvi/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "npvi/error.hpp"

namespace npvi::oracles {
namespace {

// Boundary values must sit this many nats below the grid maximum.
constexpr double kBoundaryGap = 25.0;

double checked(const ScalarFn& fn, const Vector& x, Index coordinate) {
  const double v = fn(x);
  if (!std::isfinite(v)) {
    throw NumericalError("finite-difference stencil is not finite in coordinate " +
                         std::to_string(coordinate));
  }
  return v;
}

std::vector<double> axis_points(const GridAxis& axis) {
  std::vector<double> pts(axis.points);
  const double h = (axis.upper - axis.lower) / static_cast<double>(axis.points - 1);
  for (std::size_t i = 0; i < axis.points; ++i)
    pts[i] = axis.lower + h * static_cast<double>(i);
  return pts;
}

// f over the grid in row-major order (first axis slowest).
struct GridValues {
  std::vector<std::vector<double>> coords;
  std::vector<double> values;
};

GridValues evaluate_grid(const LogJointModel& model, const GridSpec& grid) {
  grid.validate();
  if (model.dimension() != static_cast<Index>(grid.axes.size()))
    throw ConfigError("grid dimension does not match the model");
  GridValues out;
  for (const auto& axis : grid.axes) out.coords.push_back(axis_points(axis));
  Vector theta(model.dimension());
  if (grid.axes.size() == 1) {
    for (double x : out.coords[0]) {
      theta(0) = x;
      out.values.push_back(model.eval(theta));
    }
  } else {
    for (double x : out.coords[0]) {
      for (double y : out.coords[1]) {
        theta << x, y;
        out.values.push_back(model.eval(theta));
      }
    }
  }
  return out;
}

}  // namespace

Vector fd_gradient(const ScalarFn& fn, const Vector& theta, double step) {
  Vector g(theta.size());
  Vector x = theta;
  for (Index i = 0; i < theta.size(); ++i) {
    x(i) = theta(i) + step;
    const double up = checked(fn, x, i);
    x(i) = theta(i) - step;
    const double down = checked(fn, x, i);
    x(i) = theta(i);
    g(i) = (up - down) / (2.0 * step);
  }
  return g;
}

Vector fd_hessian_diag(const ScalarFn& fn, const Vector& theta, double step) {
  Vector h(theta.size());
  Vector x = theta;
  const double center = checked(fn, theta, 0);
  for (Index i = 0; i < theta.size(); ++i) {
    x(i) = theta(i) + step;
    const double up = checked(fn, x, i);
    x(i) = theta(i) - step;
    const double down = checked(fn, x, i);
    x(i) = theta(i);
    h(i) = (up - 2.0 * center + down) / (step * step);
  }
  return h;
}

MonteCarloEstimate mc_entropy(const MixtureApproximation& q,
                              std::size_t num_samples, std::uint64_t seed) {
  if (num_samples < 1000) throw ConfigError("mc_entropy needs at least 1000 samples");
  const auto draws = sample_mixture(q, num_samples, seed);
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t k = 0;
  for (const auto& x : draws) {
    const double v = -mixture_log_density(q, x);
    ++k;
    const double delta = v - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (v - mean);
  }
  const double n = static_cast<double>(num_samples);
  return {mean, std::sqrt(m2 / (n - 1.0) / n)};
}

void GridSpec::validate() const {
  if (axes.empty() || axes.size() > 2)
    throw ConfigError("grid oracles support one or two dimensions");
  for (const auto& a : axes) {
    if (!std::isfinite(a.lower) || !std::isfinite(a.upper) || !(a.lower < a.upper))
      throw ConfigError("grid bounds must be finite with lower < upper");
    if (a.points < 16) throw ConfigError("grid needs at least 16 points per axis");
  }
}

double grid_log_evidence(const LogJointModel& model, const GridSpec& grid) {
  const GridValues g = evaluate_grid(model, grid);
  const double peak = *std::max_element(g.values.begin(), g.values.end());
  if (!std::isfinite(peak)) throw NumericalError("f is not finite on the grid");

  auto weight = [](std::size_t i, std::size_t n) {
    return (i == 0 || i + 1 == n) ? 0.5 : 1.0;
  };
  const std::size_t nx = g.coords[0].size();
  const std::size_t ny = g.coords.size() > 1 ? g.coords[1].size() : 1;
  double boundary_max = -std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const double v = g.values[i * ny + j];
      const bool edge = i == 0 || i + 1 == nx ||
                        (g.coords.size() > 1 && (j == 0 || j + 1 == ny));
      if (edge) boundary_max = std::max(boundary_max, v);
      double w = weight(i, nx);
      if (g.coords.size() > 1) w *= weight(j, ny);
      total += w * std::exp(v - peak);
    }
  }
  if (boundary_max > peak - kBoundaryGap)
    throw InputError("grid boundary carries non-negligible mass; widen the grid");
  double cell = 1.0;
  for (const auto& a : grid.axes)
    cell *= (a.upper - a.lower) / static_cast<double>(a.points - 1);
  return peak + std::log(total * cell);
}

Vector grid_argmax(const LogJointModel& model, const GridSpec& grid) {
  const GridValues g = evaluate_grid(model, grid);
  const auto best = static_cast<std::size_t>(
      std::max_element(g.values.begin(), g.values.end()) - g.values.begin());
  Vector theta(model.dimension());
  if (g.coords.size() == 1) {
    theta(0) = g.coords[0][best];
  } else {
    const std::size_t ny = g.coords[1].size();
    theta << g.coords[0][best / ny], g.coords[1][best % ny];
  }
  return theta;
}

std::vector<Vector> grid_modes(const LogJointModel& model, const GridSpec& grid,
                               double resolution) {
  const GridValues g = evaluate_grid(model, grid);
  const std::size_t nx = g.coords[0].size();
  const std::size_t ny = g.coords.size() > 1 ? g.coords[1].size() : 1;
  const bool two_d = g.coords.size() > 1;
  auto at = [&](std::ptrdiff_t i, std::ptrdiff_t j) {
    return g.values[static_cast<std::size_t>(i) * ny + static_cast<std::size_t>(j)];
  };

  std::vector<Vector> modes;
  for (std::ptrdiff_t i = 1; i + 1 < static_cast<std::ptrdiff_t>(nx); ++i) {
    const std::ptrdiff_t j_lo = two_d ? 1 : 0;
    const std::ptrdiff_t j_hi = two_d ? static_cast<std::ptrdiff_t>(ny) - 1 : 1;
    for (std::ptrdiff_t j = j_lo; j < j_hi; ++j) {
      const double v = at(i, j);
      bool is_max = true;
      for (std::ptrdiff_t di = -1; di <= 1 && is_max; ++di) {
        for (std::ptrdiff_t dj = two_d ? -1 : 0; dj <= (two_d ? 1 : 0); ++dj) {
          if (di == 0 && dj == 0) continue;
          const double w = at(i + di, j + dj);
          // Ties are broken towards the lower index so a plateau yields one mode.
          if (w > v || (w == v && (di < 0 || (di == 0 && dj < 0)))) {
            is_max = false;
            break;
          }
        }
      }
      if (!is_max) continue;

      // Zoom: re-grid a +-2 cell window around the current best point.
      std::vector<double> width;
      Vector center(model.dimension());
      center(0) = g.coords[0][static_cast<std::size_t>(i)];
      width.push_back(grid.axes[0].upper - grid.axes[0].lower);
      width[0] /= static_cast<double>(grid.axes[0].points - 1);
      if (two_d) {
        center(1) = g.coords[1][static_cast<std::size_t>(j)];
        width.push_back((grid.axes[1].upper - grid.axes[1].lower) /
                        static_cast<double>(grid.axes[1].points - 1));
      }
      while (*std::max_element(width.begin(), width.end()) > resolution) {
        GridSpec zoom;
        for (std::size_t a = 0; a < width.size(); ++a) {
          zoom.axes.push_back({center(static_cast<Index>(a)) - 2.0 * width[a],
                               center(static_cast<Index>(a)) + 2.0 * width[a], 41});
          width[a] = 4.0 * width[a] / 40.0;
        }
        center = grid_argmax(model, zoom);
      }
      modes.push_back(center);
    }
  }
  return modes;
}

}  // namespace npvi::oracles
