#pragma once

#include <functional>
#include <string_view>

#include "npvi/types.hpp"

namespace npvi {

struct OptimOptions {
  int memory = 10;                   // stored (s, y) correction pairs
  int max_iterations = 100;
  double gradient_tolerance = 1e-6;  // infinity norm
  double armijo_c1 = 1e-4;
  double contraction = 0.5;
  int max_halvings = 60;
};

enum class OptimStatus { converged, max_iterations, line_search_failure };

std::string_view to_string(OptimStatus status);

struct OptimReport {
  Vector argmax;
  double value = 0.0;
  Vector gradient;
  int iterations = 0;
  OptimStatus status = OptimStatus::converged;
};

// Returns the objective at x; fills *gradient when it is non-null.
using ObjectiveFn = std::function<double(const Vector& x, Vector* gradient)>;

/**
 * Limited-memory BFGS ascent.
 *
 * Search directions come from the two-loop recursion on the stored
 * correction pairs. Each step is accepted under the Armijo condition; the
 * trial step is refined by one quadratic interpolation along the search
 * line before backtracking by `contraction`. Accepted values never
 * decrease, so report.value >= objective(x0).
 *
 * Throws InputError when the objective is not finite at x0.
 */
OptimReport maximize(const ObjectiveFn& objective, const Vector& x0,
                     const OptimOptions& options = {});

OptimReport maximize(const std::function<double(const Vector&)>& objective,
                     const std::function<Vector(const Vector&)>& gradient,
                     const Vector& x0, const OptimOptions& options = {});

}  // namespace npvi
