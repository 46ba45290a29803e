#include "npvi/baselines.hpp"

#include <cmath>
#include <optional>
#include <random>
#include <string>

#include "npvi/error.hpp"

namespace npvi {

MapResult map_estimate_from(const LogJointModel& model, const Vector& start,
                            const OptimOptions& options) {
  if (!model.has_gradient()) throw CapabilityError("MAP needs the model gradient");
  const OptimReport report = maximize(
      [&](const Vector& x, Vector* g) { return model.eval(x, g); }, start, options);
  MapResult out;
  out.theta = report.argmax;
  out.log_joint = report.value;
  out.gradient_norm = report.gradient.lpNorm<Eigen::Infinity>();
  out.status = report.status;
  return out;
}

MapResult map_estimate(const LogJointModel& model, const MapOptions& options) {
  if (options.restarts < 1) throw ConfigError("MAP needs at least one restart");
  const Index dim = model.dimension();
  std::optional<MapResult> best;
  int failed = 0;
  std::string last_error;
  for (int r = 0; r < options.restarts; ++r) {
    std::mt19937_64 rng(options.seed + static_cast<std::uint64_t>(r));
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector start(dim);
    for (Index i = 0; i < dim; ++i) start(i) = options.start_scale * normal(rng);
    MapResult candidate;
    try {
      candidate = map_estimate_from(model, start, options.optim);
    } catch (const InputError& e) {
      ++failed;
      last_error = e.what();
      continue;
    }
    if (candidate.status == OptimStatus::line_search_failure &&
        candidate.gradient_norm >= 1e-5) {
      ++failed;
      last_error = "line search failed with gradient norm " +
                   std::to_string(candidate.gradient_norm);
      continue;
    }
    candidate.best_restart = r;
    if (!best || candidate.log_joint > best->log_joint) best = candidate;
  }
  if (!best) {
    throw NumericalError("MAP: all " + std::to_string(options.restarts) +
                         " restarts failed (" + last_error + ")");
  }
  best->failed_restarts = failed;
  return *best;
}

DiagonalGaussian laplace_diagonal(const LogJointModel& model,
                                  const Vector& theta_map) {
  if (!model.has_hessian_diag())
    throw CapabilityError("Laplace needs the Hessian diagonal of the model");
  Vector h;
  model.eval(theta_map, nullptr, &h);
  for (Index i = 0; i < h.size(); ++i) {
    if (!(h(i) < 0.0)) {
      throw InputError("not a local maximum in coordinate " + std::to_string(i) +
                       " (Hessian diagonal " + std::to_string(h(i)) + ")");
    }
  }
  return {theta_map, (-h.array().inverse()).matrix()};
}

std::vector<Vector> sample_diagonal_gaussian(const DiagonalGaussian& g,
                                             std::size_t count,
                                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Vector sd = g.variances.array().sqrt().matrix();
  std::vector<Vector> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    Vector x = g.mean;
    for (Index i = 0; i < x.size(); ++i) x(i) += sd(i) * normal(rng);
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace npvi
