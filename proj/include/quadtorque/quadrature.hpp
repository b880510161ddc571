#pragma once

#include <functional>

namespace quadtorque {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
};

/// Globally adaptive 15-point Gauss-Kronrod integration on [lo, hi].
/// Bisects the panel with the largest error until the total estimate drops
/// below max(abs_tol, rel_tol * |value|) or max_panels is reached.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                                    double rel_tol = 1e-12, double abs_tol = 0.0, int max_panels = 2000);

}  // namespace quadtorque
