#include "npvi/lbfgs.hpp"

#include <cmath>
#include <deque>

#include "npvi/error.hpp"

namespace npvi {
namespace {

struct Correction {
  Vector s;  // step
  Vector y;  // change in the gradient of the minimised objective (-f)
  double rho;
};

// Returns H * grad for the minimised objective -f, i.e. an ascent direction
// for f. `initial_scale` is used when no correction pairs are stored.
Vector two_loop(const std::deque<Correction>& memory, const Vector& grad,
                double initial_scale) {
  Vector q = -grad;
  std::vector<double> alpha(memory.size());
  for (std::size_t i = memory.size(); i-- > 0;) {
    alpha[i] = memory[i].rho * memory[i].s.dot(q);
    q -= alpha[i] * memory[i].y;
  }
  double gamma = initial_scale;
  if (!memory.empty()) {
    const auto& last = memory.back();
    gamma = last.s.dot(last.y) / last.y.squaredNorm();
  }
  Vector r = gamma * q;
  for (std::size_t i = 0; i < memory.size(); ++i) {
    const double beta = memory[i].rho * memory[i].y.dot(r);
    r += memory[i].s * (alpha[i] - beta);
  }
  return -r;
}

bool armijo(double trial, double base, double c1, double step, double slope) {
  return std::isfinite(trial) && trial >= base + c1 * step * slope;
}

}  // namespace

std::string_view to_string(OptimStatus status) {
  switch (status) {
    case OptimStatus::converged: return "converged";
    case OptimStatus::max_iterations: return "max-iterations";
    case OptimStatus::line_search_failure: return "line-search-failure";
  }
  return "unknown";
}

OptimReport maximize(const ObjectiveFn& objective, const Vector& x0,
                     const OptimOptions& options) {
  if (options.memory < 1) throw ConfigError("L-BFGS memory must be at least 1");
  if (!(options.gradient_tolerance > 0.0))
    throw ConfigError("gradient tolerance must be positive");
  if (!(options.contraction > 0.0 && options.contraction < 1.0))
    throw ConfigError("line-search contraction must lie in (0, 1)");

  OptimReport report;
  report.argmax = x0;
  report.value = objective(x0, &report.gradient);
  if (!std::isfinite(report.value) || !report.gradient.allFinite())
    throw InputError("objective is not finite at the starting point");

  std::deque<Correction> memory;
  Vector& x = report.argmax;
  Vector& grad = report.gradient;

  while (true) {
    if (grad.lpNorm<Eigen::Infinity>() < options.gradient_tolerance) {
      report.status = OptimStatus::converged;
      return report;
    }
    if (report.iterations >= options.max_iterations) {
      report.status = OptimStatus::max_iterations;
      return report;
    }

    const double first_scale = std::min(1.0, 1.0 / grad.norm());
    Vector direction = two_loop(memory, grad, first_scale);
    double slope = grad.dot(direction);
    if (!(slope > 0.0) || !direction.allFinite()) {
      memory.clear();
      direction = first_scale * grad;
      slope = grad.dot(direction);
    }

    // Unit step, refined once by the maximiser of the parabola through
    // f(0), f'(0) and f(1) when that parabola is concave.
    double step = 1.0;
    double trial = objective(x + step * direction, nullptr);
    if (std::isfinite(trial)) {
      const double curvature = trial - report.value - slope * step;
      if (curvature < 0.0) {
        const double refined = -slope * step * step / (2.0 * curvature);
        if (refined > 0.0 && std::isfinite(refined) && refined != step) {
          const double refined_value = objective(x + refined * direction, nullptr);
          if (armijo(refined_value, report.value, options.armijo_c1, refined, slope) &&
              refined_value >= trial) {
            step = refined;
            trial = refined_value;
          }
        }
      }
    }
    int halvings = 0;
    while (!armijo(trial, report.value, options.armijo_c1, step, slope)) {
      if (halvings++ >= options.max_halvings) {
        report.status = OptimStatus::line_search_failure;
        return report;
      }
      step *= options.contraction;
      trial = objective(x + step * direction, nullptr);
    }

    Vector next = x + step * direction;
    Vector next_grad;
    const double next_value = objective(next, &next_grad);
    if (!std::isfinite(next_value) || !next_grad.allFinite() ||
        next_value < report.value) {
      report.status = OptimStatus::line_search_failure;
      return report;
    }

    Correction c{next - x, grad - next_grad, 0.0};
    const double sy = c.s.dot(c.y);
    if (sy > 1e-12 * c.y.squaredNorm() && sy > 0.0) {
      c.rho = 1.0 / sy;
      memory.push_back(std::move(c));
      if (static_cast<int>(memory.size()) > options.memory) memory.pop_front();
    } else {
      // Negative curvature along the step: stale pairs would keep the
      // direction badly scaled, so restart from the gradient.
      memory.clear();
    }

    x = std::move(next);
    grad = std::move(next_grad);
    report.value = next_value;
    ++report.iterations;
  }
}

OptimReport maximize(const std::function<double(const Vector&)>& objective,
                     const std::function<Vector(const Vector&)>& gradient,
                     const Vector& x0, const OptimOptions& options) {
  return maximize(
      [&](const Vector& x, Vector* g) {
        if (g) *g = gradient(x);
        return objective(x);
      },
      x0, options);
}

}  // namespace npvi
