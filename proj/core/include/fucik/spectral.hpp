#pragma once

#include <string>
#include <vector>

#include "fucik/eigensolver.hpp"

namespace fucik {

/// Spectral counting function N(lambda, t) split by sign.
struct CountResult {
  double lambda = 0.0;
  double t = 1.0;
  int n_plus = 0;
  int n_minus = 0;
  int total = 0;
};

/// Counts on the whole interval and on the two halves cut at c, where the
/// halves carry a Neumann condition at c.
struct BracketingCounts {
  double lambda = 0.0;
  int whole = 0;
  int left = 0;
  int right = 0;
  int defect = 0;
};

struct CurvePoint {
  double t = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
};

/// Samples of one curve C_k^+- of the spectrum, ordered by slope.
struct SpectrumCurve {
  int k = 0;
  Sign sign = Sign::Plus;
  std::vector<CurvePoint> points;
};

struct CurveFailure {
  double t = 0.0;
  std::string message;
};

struct TraceResult {
  SpectrumCurve curve;
  std::vector<CurveFailure> failures;
};

struct WeylEstimate {
  double t = 0.0;
  /// Integral of (m^{-1/2} + (t n)^{-1/2})^{-1} over the interval.
  double integral = 0.0;
  double quadrature_error = 0.0;
};

struct RemainderRow {
  int k = 0;
  double numeric = 0.0;
  double asymptotic = 0.0;
  /// |1 - asymptotic / numeric|
  double relative_error = 0.0;
};

struct RemainderFit {
  std::vector<RemainderRow> rows;
  /// Least-squares slope of log r_k against log k over the rows with r_k
  /// above the solver floor; NaN when fewer than two such rows exist.
  double slope = 0.0;
  /// True when every r_k is zero to solver tolerance.
  bool exact = false;
};

inline constexpr double kDefaultQuadTol = 1e-10;

/// N(lambda, t) from the floor of the terminal angles of both signs.
CountResult count(const Problem& problem, double lambda, double t, const ToleranceConfig& tol);

/// Counts for the bracketing comparison at the cut point c (absolute
/// coordinate, strictly inside the interval).
BracketingCounts bracketing_counts(const Problem& problem, double lambda, double t, double c,
                                   const ToleranceConfig& tol);

/// N(0,L) - N(0,c) - N(c,L) with Neumann conditions at c on the halves.
int bracketing_defect(const Problem& problem, double lambda, double t, double c, const ToleranceConfig& tol);

/// One independent eigenvalue solve per slope, fanned out over `threads`
/// workers. Points that fail are reported with their slope and left out of
/// the curve.
TraceResult trace_curve(const Problem& problem, int k, Sign sign, const std::vector<double>& t_values,
                        const ToleranceConfig& tol, std::size_t threads = 0);

/// Slopes spaced logarithmically (or linearly) from t_min to t_max inclusive.
std::vector<double> slope_grid(double t_min, double t_max, int points, bool logarithmic = true);

WeylEstimate weyl_integral(const Problem& problem, double t, double quad_tol = kDefaultQuadTol);

/// (pi k / (2 I_t))^2 with I_t the Weyl integral.
double asymptotic_eigenvalue(const Problem& problem, int k, double t, double quad_tol = kDefaultQuadTol);

/// (4 sqrt(lambda) / pi) I_t
double asymptotic_count(const Problem& problem, double lambda, double t, double quad_tol = kDefaultQuadTol);

/// Estimate of sup_I |I|^{-gamma} int_I |w - w_I| over the dyadic
/// subintervals of [begin, end] down to level `depth`.
double campanato_seminorm(const WeightExpr& w, double begin, double end, double gamma, int depth);
double campanato_seminorm(const WeightExpr& w, double length, double gamma, int depth);

/// Relative gap between shooting and Weyl eigenvalues for each k, with the
/// log-log slope of the gap.
RemainderFit remainder_rate(const Problem& problem, double t, const std::vector<int>& k_values,
                            const ToleranceConfig& tol, Sign sign = Sign::Plus, std::size_t threads = 0);

}  // namespace fucik
