#ifndef FSCN_QUADRATURE_HPP
#define FSCN_QUADRATURE_HPP

#include <functional>

#include "fscn/specfun.hpp"

namespace fscn {

struct QuadResult {
  double value = 0.0;
  double err_estimate = 0.0;
};

/// Adaptive Gauss-Kronrod 15-point quadrature on [a, b]. Subdivides the
/// worst segment until the summed error estimate meets the budget; throws
/// NonConvergenceError if the refinement caps are exhausted first.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a,
                              double b, const AccuracyBudget& budget = {});

/// Same driver, seeded with the given ascending breakpoints (first and last
/// are the integration limits). Breakpoints let callers pre-split boundary
/// layers and endpoint singularities the coarse rule would miss.
QuadResult integrate_adaptive(const std::function<double(double)>& f,
                              const std::vector<double>& points,
                              const AccuracyBudget& budget = {});

/// Integral over (0, inf) via the substitution y = x/(1-x), then adaptive
/// subdivision on (0,1). The integrand must decay fast enough to be integrable.
QuadResult integrate_semi_infinite(const std::function<double(double)>& f,
                                   const AccuracyBudget& budget = {});

}  // namespace fscn

#endif
