#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

#include "fucik/expr.hpp"

namespace fucik {

enum class Boundary { Dirichlet, Neumann };

/// Sign of the eigenfunction next to the left endpoint.
enum class Sign { Plus, Minus };

/// Which weight drives the angle: m where u > 0, t*n where u < 0.
enum class Branch { Positive, Negative };

char to_char(Sign sign) noexcept;
const char* to_string(Boundary bc) noexcept;

/// Problem -u'' = lambda (m u^+ - t n u^-) on [begin, end] with Dirichlet or
/// Neumann conditions at each end. Weights are checked for positivity on the
/// interval at construction.
class Problem {
 public:
  Problem(double length, WeightExpr m, WeightExpr n, Boundary left = Boundary::Dirichlet,
          Boundary right = Boundary::Dirichlet);

  static Problem on_interval(double begin, double end, WeightExpr m, WeightExpr n,
                             Boundary left = Boundary::Dirichlet, Boundary right = Boundary::Dirichlet);

  double begin() const noexcept { return begin_; }
  double end() const noexcept { return end_; }
  double length() const noexcept { return end_ - begin_; }
  const WeightExpr& m() const noexcept { return m_; }
  const WeightExpr& n() const noexcept { return n_; }
  Boundary left() const noexcept { return left_; }
  Boundary right() const noexcept { return right_; }

  /// Same weights on a sub-interval with new boundary conditions.
  Problem restricted(double begin, double end, Boundary left, Boundary right) const;
  /// Same interval and boundary conditions, new weights.
  Problem with_weights(WeightExpr m, WeightExpr n) const;

 private:
  Problem(double begin, double end, WeightExpr m, WeightExpr n, Boundary left, Boundary right, int);

  double begin_;
  double end_;
  WeightExpr m_;
  WeightExpr n_;
  Boundary left_;
  Boundary right_;
};

struct ToleranceConfig {
  double ode_rel_tol = 1e-10;
  double ode_abs_tol = 1e-10;
  double event_x_tol = 1e-12;
  /// Absolute width at which eigenvalue bisection stops.
  double bisection_eps = 1e-4;
  int max_bisection_iters = 200;

  /// Throws `Error` (InvalidArgument) unless every field is strictly positive.
  void validate() const;
};

/// Sampled Prufer trajectory. `phi` is the global angle; `rho` is filled only
/// when the amplitude was tracked, and `events` holds the x positions where
/// phi reached a multiple of pi (branch switches).
struct PruferPath {
  double lambda = 0.0;
  double t = 1.0;
  Sign sign = Sign::Plus;
  std::vector<double> x;
  std::vector<double> phi;
  std::vector<double> rho;
  std::vector<double> events;
  double terminal_angle = 0.0;
  /// x where integration stopped; equals the requested end unless
  /// `IntegrateOptions::max_events` cut it short.
  double terminal_x = 0.0;

  bool has_amplitude() const noexcept { return !rho.empty(); }
};

struct IntegrateOptions {
  bool record_path = false;
  bool track_amplitude = false;
  /// Stop at the given number of branch switches (negative: never).
  int max_events = -1;
};

/// Angle derivative sqrt(lambda f) + f'/(2f) cos(phi) sin(phi) with f = m on
/// the positive branch and f = t n on the negative one.
double prufer_rhs(const Problem& problem, double lambda, double t, Branch branch, double x, double phi);

/// Integrates the angle equation from (x0, phi0) to x1. The branch follows
/// the parity of floor(phi/pi); each crossing of the next multiple of pi is
/// located to `event_x_tol` and the branch switches there.
PruferPath integrate_angle(const Problem& problem, double lambda, double t, double phi0, double x0, double x1,
                           const ToleranceConfig& tol, const IntegrateOptions& options = {});

/// Starting angle implied by the left boundary condition and the sign.
double start_angle(Boundary left, Sign sign) noexcept;

/// phi(end) for a shot from the left end of the problem.
double terminal_angle(const Problem& problem, double lambda, double t, Sign sign, const ToleranceConfig& tol);

/// Angle phi(end) must reach for the k-th half-eigenvalue of the given sign,
/// taking both boundary conditions into account (k >= 1).
double target_angle(const Problem& problem, Sign sign, int k);

/// Number of half-eigenvalues of the given sign that a terminal angle
/// certifies as <= lambda. Angles within 1e-9 (1 + |target|) of a target
/// count as reaching it.
int count_reached(const Problem& problem, Sign sign, double terminal);

bool angle_reached(double angle, double target) noexcept;

struct SampledFunction {
  std::vector<double> x;
  std::vector<double> u;
};

/// u = rho sin(phi) / sqrt(lambda f) on the recorded samples, with rho(x0) = 1
/// so that +-u'(x0) = 1 for a Dirichlet start. Requires a path recorded with
/// amplitude tracking.
SampledFunction reconstruct_eigenfunction(const PruferPath& path, const Problem& problem);

/// Zeros of a sampled function: samples with |u| <= rel_tol * max|u| plus
/// strict sign changes between samples. Near-zero samples closer than
/// 1e-9 of the sampled span count once.
int count_zeros(const SampledFunction& f, double rel_tol = 1e-8);

/// CSV dump with header `x,phi` or `x,phi,rho`.
void write_path_csv(std::ostream& os, const PruferPath& path);

}  // namespace fucik
