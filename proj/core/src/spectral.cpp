#include "fucik/spectral.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "fucik/error.hpp"
#include "fucik/parallel.hpp"
#include "fucik/quadrature.hpp"

namespace fucik {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double v, const char* name) {
  if (!(v > 0) || !std::isfinite(v)) {
    throw Error(ErrorKind::InvalidArgument, std::string(name) + " must be positive and finite");
  }
}

std::size_t resolve_threads(std::size_t threads) { return threads == 0 ? thread_count() : threads; }

}  // namespace

CountResult count(const Problem& problem, double lambda, double t, const ToleranceConfig& tol) {
  require_positive(lambda, "lambda");
  require_positive(t, "t");
  CountResult r;
  r.lambda = lambda;
  r.t = t;
  r.n_plus = count_reached(problem, Sign::Plus, terminal_angle(problem, lambda, t, Sign::Plus, tol));
  r.n_minus = count_reached(problem, Sign::Minus, terminal_angle(problem, lambda, t, Sign::Minus, tol));
  r.total = r.n_plus + r.n_minus;
  return r;
}

BracketingCounts bracketing_counts(const Problem& problem, double lambda, double t, double c,
                                   const ToleranceConfig& tol) {
  if (!(c > problem.begin() && c < problem.end())) {
    throw Error(ErrorKind::InvalidArgument, "cut point c must lie strictly inside the interval");
  }
  const Problem left = problem.restricted(problem.begin(), c, problem.left(), Boundary::Neumann);
  const Problem right = problem.restricted(c, problem.end(), Boundary::Neumann, problem.right());
  BracketingCounts b;
  b.lambda = lambda;
  b.whole = count(problem, lambda, t, tol).total;
  b.left = count(left, lambda, t, tol).total;
  b.right = count(right, lambda, t, tol).total;
  b.defect = b.whole - b.left - b.right;
  return b;
}

int bracketing_defect(const Problem& problem, double lambda, double t, double c, const ToleranceConfig& tol) {
  return bracketing_counts(problem, lambda, t, c, tol).defect;
}

TraceResult trace_curve(const Problem& problem, int k, Sign sign, const std::vector<double>& t_values,
                        const ToleranceConfig& tol, std::size_t threads) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "k must be >= 1");
  for (std::size_t i = 0; i < t_values.size(); ++i) {
    require_positive(t_values[i], "t");
    if (i > 0 && !(t_values[i] > t_values[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "slopes must be strictly increasing");
    }
  }

  std::vector<std::optional<CurvePoint>> points(t_values.size());
  std::vector<std::string> errors(t_values.size());
  parallel_for(
      t_values.size(),
      [&](std::size_t i) {
        try {
          const HalfEigenvalue ev = eigenvalue(problem, k, t_values[i], sign, tol);
          points[i] = CurvePoint{ev.t, ev.alpha, ev.beta};
        } catch (const Error& e) {
          errors[i] = e.what();
        }
      },
      resolve_threads(threads));

  TraceResult out;
  out.curve.k = k;
  out.curve.sign = sign;
  for (std::size_t i = 0; i < t_values.size(); ++i) {
    if (points[i]) {
      out.curve.points.push_back(*points[i]);
    } else {
      out.failures.push_back({t_values[i], errors[i]});
    }
  }
  return out;
}

std::vector<double> slope_grid(double t_min, double t_max, int points, bool logarithmic) {
  require_positive(t_min, "t-min");
  require_positive(t_max, "t-max");
  if (points < 1) throw Error(ErrorKind::InvalidArgument, "points must be >= 1");
  if (t_max < t_min) throw Error(ErrorKind::InvalidArgument, "t-max must be >= t-min");
  if (points == 1) return {t_min};
  if (t_max == t_min) throw Error(ErrorKind::InvalidArgument, "t-max must exceed t-min for more than one point");
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double lo = logarithmic ? std::log10(t_min) : t_min;
  const double hi = logarithmic ? std::log10(t_max) : t_max;
  for (int i = 0; i < points; ++i) {
    const double s = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
    grid[static_cast<std::size_t>(i)] = logarithmic ? std::pow(10.0, s) : s;
  }
  grid.front() = t_min;
  grid.back() = t_max;
  return grid;
}

WeylEstimate weyl_integral(const Problem& problem, double t, double quad_tol) {
  require_positive(t, "t");
  const auto integrand = [&](double x) {
    return 1.0 / (1.0 / std::sqrt(problem.m().eval(x)) + 1.0 / std::sqrt(t * problem.n().eval(x)));
  };
  const QuadratureResult q = adaptive_simpson(integrand, problem.begin(), problem.end(), quad_tol);
  return {t, q.value, q.error};
}

double asymptotic_eigenvalue(const Problem& problem, int k, double t, double quad_tol) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "k must be >= 1");
  const double root = kPi * k / (2.0 * weyl_integral(problem, t, quad_tol).integral);
  return root * root;
}

double asymptotic_count(const Problem& problem, double lambda, double t, double quad_tol) {
  require_positive(lambda, "lambda");
  return 4.0 * std::sqrt(lambda) / kPi * weyl_integral(problem, t, quad_tol).integral;
}

double campanato_seminorm(const WeightExpr& w, double begin, double end, double gamma, int depth) {
  require_positive(gamma, "gamma");
  if (depth < 1) throw Error(ErrorKind::InvalidArgument, "depth must be >= 1");
  if (!(end > begin)) throw Error(ErrorKind::InvalidArgument, "interval must satisfy begin < end");
  constexpr int kPanels = 16;
  const auto f = [&](double x) { return w.eval(x); };
  double sup = 0.0;
  for (int level = 0; level <= depth; ++level) {
    const long pieces = 1L << level;
    const double width = (end - begin) / static_cast<double>(pieces);
    for (long i = 0; i < pieces; ++i) {
      const double a = begin + width * static_cast<double>(i);
      const double b = a + width;
      const double mean = gauss_legendre(f, a, b, kPanels) / width;
      const double oscillation = gauss_legendre([&](double x) { return std::fabs(w.eval(x) - mean); }, a, b, kPanels);
      sup = std::max(sup, oscillation / std::pow(width, gamma));
    }
  }
  return sup;
}

double campanato_seminorm(const WeightExpr& w, double length, double gamma, int depth) {
  return campanato_seminorm(w, 0.0, length, gamma, depth);
}

RemainderFit remainder_rate(const Problem& problem, double t, const std::vector<int>& k_values,
                            const ToleranceConfig& tol, Sign sign, std::size_t threads) {
  if (k_values.size() < 4) throw Error(ErrorKind::InvalidArgument, "remainder fit needs at least 4 values of k");
  for (std::size_t i = 0; i < k_values.size(); ++i) {
    if (k_values[i] < 1 || (i > 0 && k_values[i] <= k_values[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "k values must be positive and strictly increasing");
    }
  }
  const double integral = weyl_integral(problem, t).integral;

  RemainderFit fit;
  fit.rows.resize(k_values.size());
  std::vector<double> floors(k_values.size());
  parallel_for(
      k_values.size(),
      [&](std::size_t i) {
        const int k = k_values[i];
        const HalfEigenvalue ev = eigenvalue(problem, k, t, sign, tol);
        const double root = kPi * k / (2.0 * integral);
        RemainderRow& row = fit.rows[i];
        row.k = k;
        row.numeric = ev.lambda;
        row.asymptotic = root * root;
        row.relative_error = std::fabs(1.0 - row.asymptotic / row.numeric);
        floors[i] = (ev.achieved_eps + 1e-8 * ev.lambda) / ev.lambda;
      },
      resolve_threads(threads));

  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < fit.rows.size(); ++i) {
    if (fit.rows[i].relative_error > floors[i]) {
      lx.push_back(std::log(static_cast<double>(fit.rows[i].k)));
      ly.push_back(std::log(fit.rows[i].relative_error));
    }
  }
  fit.exact = lx.empty();
  if (lx.size() < 2) {
    fit.slope = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(lx.size());
  my /= static_cast<double>(ly.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  fit.slope = sxy / sxx;
  return fit;
}

}  // namespace fucik
