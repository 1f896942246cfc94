#pragma once

#include <functional>

namespace fucik {

struct QuadratureResult {
  double value = 0.0;
  /// Sum of the local Richardson error estimates.
  double error = 0.0;
  long evaluations = 0;
};

/// Adaptive Simpson rule with interval halving. Each panel is accepted when
/// |S(left) + S(right) - S(whole)| <= 15 * its share of `abs_tol`; the
/// Richardson-corrected value is returned. Throws `Error`
/// (QuadratureFailure) when a panel still fails at `max_depth`.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                  int max_depth = 50);

/// Composite Gauss-Legendre rule with `panels` equal panels of 5 nodes each.
double gauss_legendre(const std::function<double(double)>& f, double a, double b, int panels);

}  // namespace fucik
