#include "fucik/prufer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "fucik/detail/dopri5.hpp"
#include "fucik/error.hpp"
#include "fucik/numfmt.hpp"

namespace fucik {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr long kMaxSteps = 10'000'000;

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::InvalidArgument, what); }

// Offsets in units of pi/2.
int start_index(Boundary left, Sign sign) noexcept {
  const int base = left == Boundary::Dirichlet ? 0 : 1;
  return sign == Sign::Plus ? base : base + 2;
}

int first_target_index(const Problem& problem, Sign sign) noexcept {
  const int s = start_index(problem.left(), sign);
  const int parity = problem.right() == Boundary::Dirichlet ? 0 : 1;
  return (s + 1) % 2 == parity ? s + 1 : s + 2;
}

double target_from_index(int first, int k) noexcept { return first * (kPi / 2) + (k - 1) * kPi; }

template <std::size_t N>
PruferPath run(const Problem& problem, double lambda, double t, double phi0, double x0, double x1,
               const ToleranceConfig& tol, const IntegrateOptions& options) {
  using Stepper = detail::Dopri5<N>;
  using State = typename Stepper::State;

  PruferPath path;
  path.lambda = lambda;
  path.t = t;

  // Work with the angle inside the current half-turn, theta = phi - j pi, so
  // the relative tolerance does not loosen as phi grows.
  long j = static_cast<long>(std::floor(phi0 / kPi));
  double theta = phi0 - static_cast<double>(j) * kPi;
  if (theta >= kPi) {
    ++j;
    theta -= kPi;
  }
  path.sign = j % 2 == 0 ? Sign::Plus : Sign::Minus;

  const WeightExpr* weight = nullptr;
  double scale = 1.0;
  auto select_branch = [&] {
    if (j % 2 == 0) {
      weight = &problem.m();
      scale = 1.0;
    } else {
      weight = &problem.n();
      scale = t;
    }
  };
  select_branch();

  auto rhs = [&](double x, const State& y) {
    const double f = scale * weight->eval(x);
    const double half_log_slope = 0.5 * weight->eval_derivative(x) / weight->eval(x);
    const double s = std::sin(y[0]);
    const double c = std::cos(y[0]);
    State d;
    d[0] = std::sqrt(lambda * f) + half_log_slope * s * c;
    if constexpr (N == 2) d[1] = half_log_slope * s * s;
    return d;
  };

  auto record = [&](double x, double phi, double log_rho) {
    if (!options.record_path) return;
    path.x.push_back(x);
    path.phi.push_back(phi);
    if constexpr (N == 2) path.rho.push_back(std::exp(log_rho));
  };

  State y{};
  y[0] = theta;
  double x = x0;
  Stepper stepper;
  stepper.reset(rhs, x, y);
  record(x, static_cast<double>(j) * kPi + theta, 0.0);

  detail::StepController controller;
  const double span = x1 - x0;
  const double end_slack = 1e-14 * std::max(1.0, std::fabs(x1));
  double h = std::min(span, 0.1 * std::pow(tol.ode_rel_tol, 0.2) / std::max(std::fabs(stepper.slope()[0]), 1e-8));
  long steps = 0;

  while (x1 - x > end_slack) {
    if (++steps > kMaxSteps) {
      std::ostringstream os;
      os << "step limit exceeded at x=" << x;
      throw Error(ErrorKind::StepUnderflow, os.str());
    }
    h = std::min(h, x1 - x);
    const double err = stepper.attempt(rhs, h, tol.ode_rel_tol, tol.ode_abs_tol);
    if (!std::isfinite(err) || err > 1.0) {
      h *= std::isfinite(err) ? controller.rejected(err) : 0.2;
      if (h < 1e-14 * std::max(1.0, std::fabs(x))) {
        std::ostringstream os;
        os << (std::isfinite(err) ? "step size underflow" : "non-finite state") << " at x=" << x;
        throw Error(std::isfinite(err) ? ErrorKind::StepUnderflow : ErrorKind::NonFinite, os.str());
      }
      continue;
    }
    stepper.accept();
    const double next_h = h * controller.accepted(err);
    const State& y_new = stepper.y();

    if (y_new[0] >= kPi) {
      // Locate the crossing of the next multiple of pi on the dense output
      // with the Illinois variant of regula falsi.
      double a = stepper.step_start();
      double b = stepper.x();
      double ga = stepper.dense(a)[0] - kPi;
      double gb = y_new[0] - kPi;
      int side = 0;
      for (int it = 0; it < 200 && b - a > tol.event_x_tol && gb != 0.0; ++it) {
        double c = b - gb * (b - a) / (gb - ga);
        if (!(c > a && c < b)) c = 0.5 * (a + b);
        const double gc = stepper.dense(c)[0] - kPi;
        if (gc >= 0.0) {
          b = c;
          gb = gc;
          if (side == 1) ga *= 0.5;
          side = 1;
        } else {
          a = c;
          ga = gc;
          if (side == -1) gb *= 0.5;
          side = -1;
        }
      }
      // Polish on true RK steps from the step start; the dense output is one
      // order lower than the step itself.
      const double start = stepper.step_start();
      State at_event = stepper.dense(b);
      for (int it = 0; it < 4 && b > start; ++it) {
        at_event = stepper.step_from_start(rhs, b - start);
        const double g = at_event[0] - kPi;
        if (std::fabs(g) <= 1e-15 * kPi) break;
        const double moved = std::clamp(b - g / rhs(b, at_event)[0], start, stepper.x());
        if (moved == b) break;
        b = moved;
      }
      x = b;
      ++j;
      path.events.push_back(x);
      const double log_rho = N == 2 ? at_event[N - 1] : 0.0;
      record(x, static_cast<double>(j) * kPi, log_rho);

      State restart{};
      if constexpr (N == 2) restart[1] = at_event[1];
      select_branch();
      stepper.reset(rhs, x, restart);
      h = std::min(h, next_h);

      if (options.max_events >= 0 && static_cast<long>(path.events.size()) >= options.max_events) break;
      continue;
    }

    x = stepper.x();
    record(x, static_cast<double>(j) * kPi + y_new[0], N == 2 ? y_new[N - 1] : 0.0);
    h = next_h;
  }

  path.terminal_angle = static_cast<double>(j) * kPi + stepper.y()[0];
  path.terminal_x = x;
  if (!std::isfinite(path.terminal_angle)) throw Error(ErrorKind::NonFinite, "non-finite terminal angle");
  return path;
}

}  // namespace

char to_char(Sign sign) noexcept { return sign == Sign::Plus ? '+' : '-'; }

const char* to_string(Boundary bc) noexcept { return bc == Boundary::Dirichlet ? "dirichlet" : "neumann"; }

Problem::Problem(double length, WeightExpr m, WeightExpr n, Boundary left, Boundary right)
    : Problem(0.0, length, std::move(m), std::move(n), left, right, 0) {}

Problem Problem::on_interval(double begin, double end, WeightExpr m, WeightExpr n, Boundary left,
                             Boundary right) {
  return Problem(begin, end, std::move(m), std::move(n), left, right, 0);
}

Problem::Problem(double begin, double end, WeightExpr m, WeightExpr n, Boundary left, Boundary right, int)
    : begin_(begin), end_(end), m_(std::move(m)), n_(std::move(n)), left_(left), right_(right) {
  if (!std::isfinite(begin) || !std::isfinite(end) || !(end > begin)) {
    invalid("interval must satisfy begin < end with finite endpoints");
  }
  m_.require_positive(begin_, end_);
  n_.require_positive(begin_, end_);
}

Problem Problem::restricted(double begin, double end, Boundary left, Boundary right) const {
  if (begin < begin_ || end > end_) invalid("sub-interval must lie inside the problem interval");
  return Problem(begin, end, m_, n_, left, right, 0);
}

Problem Problem::with_weights(WeightExpr m, WeightExpr n) const {
  return Problem(begin_, end_, std::move(m), std::move(n), left_, right_, 0);
}

void ToleranceConfig::validate() const {
  if (!(ode_rel_tol > 0) || !(ode_abs_tol > 0) || !(event_x_tol > 0) || !(bisection_eps > 0) ||
      max_bisection_iters <= 0) {
    invalid("all tolerances must be strictly positive");
  }
}

double prufer_rhs(const Problem& problem, double lambda, double t, Branch branch, double x, double phi) {
  const WeightExpr& w = branch == Branch::Positive ? problem.m() : problem.n();
  const double scale = branch == Branch::Positive ? 1.0 : t;
  const double f = scale * w.eval(x);
  return std::sqrt(lambda * f) + 0.5 * (w.eval_derivative(x) / w.eval(x)) * std::cos(phi) * std::sin(phi);
}

PruferPath integrate_angle(const Problem& problem, double lambda, double t, double phi0, double x0, double x1,
                           const ToleranceConfig& tol, const IntegrateOptions& options) {
  if (!(lambda > 0) || !std::isfinite(lambda)) invalid("lambda must be positive and finite");
  if (!(t > 0) || !std::isfinite(t)) invalid("t must be positive and finite");
  if (!(phi0 >= 0) || !std::isfinite(phi0)) invalid("initial angle must be non-negative");
  const double slack = 1e-12 * std::max(1.0, problem.length());
  if (!(x0 < x1) || x0 < problem.begin() - slack || x1 > problem.end() + slack) {
    invalid("integration range must satisfy begin <= x0 < x1 <= end");
  }
  tol.validate();
  if (options.track_amplitude) return run<2>(problem, lambda, t, phi0, x0, x1, tol, options);
  return run<1>(problem, lambda, t, phi0, x0, x1, tol, options);
}

double start_angle(Boundary left, Sign sign) noexcept { return start_index(left, sign) * (kPi / 2); }

double terminal_angle(const Problem& problem, double lambda, double t, Sign sign, const ToleranceConfig& tol) {
  return integrate_angle(problem, lambda, t, start_angle(problem.left(), sign), problem.begin(), problem.end(), tol)
      .terminal_angle;
}

double target_angle(const Problem& problem, Sign sign, int k) {
  if (k < 1) invalid("k must be >= 1");
  return target_from_index(first_target_index(problem, sign), k);
}

bool angle_reached(double angle, double target) noexcept {
  return angle >= target - 1e-9 * (1.0 + std::fabs(target));
}

int count_reached(const Problem& problem, Sign sign, double terminal) {
  const int first = first_target_index(problem, sign);
  const double base = first * (kPi / 2);
  long k = static_cast<long>(std::floor((terminal - base) / kPi)) + 1;
  if (k < 0) k = 0;
  while (angle_reached(terminal, target_from_index(first, static_cast<int>(k + 1)))) ++k;
  while (k > 0 && !angle_reached(terminal, target_from_index(first, static_cast<int>(k)))) --k;
  return static_cast<int>(k);
}

SampledFunction reconstruct_eigenfunction(const PruferPath& path, const Problem& problem) {
  if (!path.has_amplitude()) invalid("path was recorded without amplitude samples");
  SampledFunction out;
  out.x = path.x;
  out.u.reserve(path.x.size());
  for (std::size_t i = 0; i < path.x.size(); ++i) {
    const double phi = path.phi[i];
    const long half_turn = static_cast<long>(std::floor(phi / kPi));
    const double local = phi - static_cast<double>(half_turn) * kPi;
    const bool positive = half_turn % 2 == 0;
    const double f = positive ? problem.m().eval(path.x[i]) : path.t * problem.n().eval(path.x[i]);
    const double s = positive ? std::sin(local) : -std::sin(local);
    out.u.push_back(path.rho[i] * s / std::sqrt(path.lambda * f));
  }
  return out;
}

int count_zeros(const SampledFunction& f, double rel_tol) {
  if (f.u.empty()) return 0;
  double peak = 0.0;
  for (double v : f.u) peak = std::max(peak, std::fabs(v));
  const double tol = rel_tol * peak;
  const double merge = 1e-9 * (f.x.back() - f.x.front());
  int zeros = 0;
  int prev_sign = 0;
  double last_zero = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < f.u.size(); ++i) {
    const double v = f.u[i];
    if (std::fabs(v) <= tol) {
      if (f.x[i] - last_zero > merge) ++zeros;
      last_zero = f.x[i];
      prev_sign = 0;
      continue;
    }
    const int s = v > 0 ? 1 : -1;
    if (prev_sign != 0 && s != prev_sign) ++zeros;
    prev_sign = s;
  }
  return zeros;
}

void write_path_csv(std::ostream& os, const PruferPath& path) {
  const bool amp = path.has_amplitude();
  os << (amp ? "x,phi,rho\n" : "x,phi\n");
  for (std::size_t i = 0; i < path.x.size(); ++i) {
    os << format_number(path.x[i]) << ',' << format_number(path.phi[i]);
    if (amp) os << ',' << format_number(path.rho[i]);
    os << '\n';
  }
}

}  // namespace fucik
