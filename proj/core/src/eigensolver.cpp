#include "fucik/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fucik/error.hpp"

namespace fucik {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBoundsMargin = 1e-3;
constexpr int kMaxExpansions = 60;

void check_k_t(int k, double t) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "k must be >= 1");
  if (!(t > 0) || !std::isfinite(t)) throw Error(ErrorKind::InvalidArgument, "t must be positive and finite");
}

bool nodal_march(const Problem& problem, double lambda, double t, Sign sign, int k, const ToleranceConfig& tol) {
  if (problem.left() != Boundary::Dirichlet || problem.right() != Boundary::Dirichlet) {
    throw Error(ErrorKind::InvalidArgument, "nodal march supports Dirichlet problems only");
  }
  const double end = problem.end();
  double last_zero = problem.begin();
  bool positive = sign == Sign::Plus;
  IntegrateOptions once;
  once.max_events = 1;
  for (int i = 0; i < k; ++i) {
    if (end - last_zero <= 1e-14 * std::max(1.0, std::fabs(end))) return false;
    const PruferPath hump =
        integrate_angle(problem, lambda, t, positive ? 0.0 : kPi, last_zero, end, tol, once);
    if (hump.events.empty()) {
      // The last hump may close exactly at the end point.
      return i == k - 1 && angle_reached(hump.terminal_angle, positive ? kPi : 2 * kPi);
    }
    last_zero = hump.events.front();
    positive = !positive;
  }
  return true;
}

}  // namespace

double const_eigenvalue(double m0, double n0, double length, int k, double t, Sign sign) {
  check_k_t(k, t);
  if (!(m0 > 0) || !(n0 > 0) || !(length > 0)) {
    throw Error(ErrorKind::InvalidArgument, "weights and length must be positive");
  }
  const double a = 1.0 / std::sqrt(m0);
  const double b = 1.0 / std::sqrt(n0 * t);
  const double scale = kPi / (2.0 * length);
  double root = 0.0;
  if (k % 2 == 0) {
    root = scale * k * (a + b);
  } else if (sign == Sign::Plus) {
    root = scale * ((k + 1) * a + (k - 1) * b);
  } else {
    root = scale * ((k - 1) * a + (k + 1) * b);
  }
  return root * root;
}

WeightBounds weight_bounds(const Problem& problem) {
  WeightBounds b{std::numeric_limits<double>::infinity(), 0.0, std::numeric_limits<double>::infinity(), 0.0};
  const int n = kWeightSampleCount;
  for (int i = 0; i < n; ++i) {
    const double x = problem.begin() + problem.length() * static_cast<double>(i) / (n - 1);
    const double mv = problem.m().eval(x);
    const double nv = problem.n().eval(x);
    b.m_inf = std::min(b.m_inf, mv);
    b.m_sup = std::max(b.m_sup, mv);
    b.n_inf = std::min(b.n_inf, nv);
    b.n_sup = std::max(b.n_sup, nv);
  }
  b.m_inf *= 1.0 - kBoundsMargin;
  b.n_inf *= 1.0 - kBoundsMargin;
  b.m_sup *= 1.0 + kBoundsMargin;
  b.n_sup *= 1.0 + kBoundsMargin;
  return b;
}

bool reaches_target(const Problem& problem, double lambda, double t, Sign sign, int k, const ToleranceConfig& tol,
                    Predicate predicate) {
  if (predicate == Predicate::NodalMarch) return nodal_march(problem, lambda, t, sign, k, tol);
  return angle_reached(terminal_angle(problem, lambda, t, sign, tol), target_angle(problem, sign, k));
}

Bracket initial_bracket(const Problem& problem, int k, double t, Sign sign, const ToleranceConfig& tol) {
  check_k_t(k, t);
  const WeightBounds wb = weight_bounds(problem);
  Bracket br{const_eigenvalue(wb.m_sup, wb.n_sup, problem.length(), k, t, sign),
             const_eigenvalue(wb.m_inf, wb.n_inf, problem.length(), k, t, sign)};
  int expansions = 0;
  while (reaches_target(problem, br.lo, t, sign, k, tol)) {
    if (++expansions > kMaxExpansions) break;
    br.lo *= 0.5;
  }
  while (!reaches_target(problem, br.hi, t, sign, k, tol)) {
    if (++expansions > kMaxExpansions) break;
    br.hi *= 2.0;
  }
  if (expansions > kMaxExpansions) {
    std::ostringstream os;
    os << "could not bracket eigenvalue k=" << k << " t=" << t << " sign=" << to_char(sign);
    throw Error(ErrorKind::BracketFailure, os.str());
  }
  return br;
}

HalfEigenvalue eigenvalue(const Problem& problem, int k, double t, Sign sign, const ToleranceConfig& tol,
                          Predicate predicate) {
  tol.validate();
  Bracket br = initial_bracket(problem, k, t, sign, tol);
  // Bisect on the exact crossing; the tolerant comparison would bias the
  // root low by the angle slack.
  const double target = target_angle(problem, sign, k);
  int it = 0;
  while (br.hi - br.lo >= tol.bisection_eps && it < tol.max_bisection_iters) {
    const double mid = 0.5 * (br.lo + br.hi);
    if (mid <= br.lo || mid >= br.hi) break;
    ++it;
    const bool above = predicate == Predicate::TerminalAngle
                           ? terminal_angle(problem, mid, t, sign, tol) >= target
                           : reaches_target(problem, mid, t, sign, k, tol, predicate);
    if (above) {
      br.hi = mid;
    } else {
      br.lo = mid;
    }
  }
  HalfEigenvalue ev;
  ev.k = k;
  ev.t = t;
  ev.sign = sign;
  ev.lambda = 0.5 * (br.lo + br.hi);
  ev.alpha = ev.lambda;
  ev.beta = t * ev.lambda;
  ev.achieved_eps = br.hi - br.lo;
  ev.iterations = it;
  return ev;
}

double linear_eigenvalue(const WeightExpr& weight, double length, int k, const ToleranceConfig& tol) {
  const Problem problem(length, weight, weight);
  return eigenvalue(problem, k, 1.0, Sign::Plus, tol).lambda;
}

}  // namespace fucik
