#pragma once

#include "fucik/prufer.hpp"

namespace fucik {

/// One point of the spectrum on the ray beta = t alpha.
struct HalfEigenvalue {
  int k = 0;
  double t = 1.0;
  Sign sign = Sign::Plus;
  double lambda = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  /// Width of the final bisection bracket.
  double achieved_eps = 0.0;
  int iterations = 0;
};

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
};

struct WeightBounds {
  double m_inf = 0.0;
  double m_sup = 0.0;
  double n_inf = 0.0;
  double n_sup = 0.0;
};

/// Which test decides whether a trial lambda is at or above the eigenvalue.
enum class Predicate {
  /// phi(end) has reached the target angle.
  TerminalAngle,
  /// March node to node, restarting the angle at each zero; Dirichlet only.
  NodalMarch,
};

/// Closed-form lambda_{k,t}^+- for constant weights m0, n0 on an interval of
/// length L with Dirichlet conditions.
double const_eigenvalue(double m0, double n0, double length, int k, double t, Sign sign);

/// Infima and suprema of the weights on a 4097-point grid, widened outward by
/// a relative margin of 1e-3.
WeightBounds weight_bounds(const Problem& problem);

/// Bracket from the constant-weight formula at the weight bounds (larger
/// weights give smaller eigenvalues), checked with the shooting predicate and
/// expanded geometrically when needed. Throws `Error` (BracketFailure).
Bracket initial_bracket(const Problem& problem, int k, double t, Sign sign, const ToleranceConfig& tol);

/// True once the shot at lambda reaches the k-th target.
bool reaches_target(const Problem& problem, double lambda, double t, Sign sign, int k, const ToleranceConfig& tol,
                    Predicate predicate = Predicate::TerminalAngle);

/// Bisection for lambda_{k,t}^+- down to `tol.bisection_eps`.
HalfEigenvalue eigenvalue(const Problem& problem, int k, double t, Sign sign, const ToleranceConfig& tol,
                          Predicate predicate = Predicate::TerminalAngle);

/// k-th Dirichlet eigenvalue of -u'' = lambda s u on (0, L).
double linear_eigenvalue(const WeightExpr& weight, double length, int k, const ToleranceConfig& tol);

}  // namespace fucik
