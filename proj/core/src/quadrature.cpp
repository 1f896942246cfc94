#include "fucik/quadrature.hpp"

#include <cmath>
#include <sstream>

#include "fucik/error.hpp"

namespace fucik {

namespace {

struct Panel {
  double a, fa, m, fm, b, fb, whole;
};

class Simpson {
 public:
  Simpson(const std::function<double(double)>& f, int max_depth) : f_(f), max_depth_(max_depth) {}

  double eval(double x) {
    ++result.evaluations;
    return f_(x);
  }

  double recurse(const Panel& p, double tol, int depth) {
    const double lm = 0.5 * (p.a + p.m);
    const double rm = 0.5 * (p.m + p.b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (p.m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
    const double right = (p.b - p.m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
    const double delta = left + right - p.whole;
    // Below ~1e-15 relative the estimate is roundoff, not truncation.
    const double floor = 1e-15 * std::fabs(left + right);
    if (std::fabs(delta) <= 15.0 * tol || std::fabs(delta) <= floor) {
      result.error += std::fabs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    if (depth >= max_depth_) {
      std::ostringstream os;
      os << "adaptive Simpson did not converge on [" << p.a << ", " << p.b << "]";
      throw Error(ErrorKind::QuadratureFailure, os.str());
    }
    return recurse({p.a, p.fa, lm, flm, p.m, p.fm, left}, 0.5 * tol, depth + 1) +
           recurse({p.m, p.fm, rm, frm, p.b, p.fb, right}, 0.5 * tol, depth + 1);
  }

  QuadratureResult result;

 private:
  const std::function<double(double)>& f_;
  int max_depth_;
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                  int max_depth) {
  if (!(abs_tol > 0)) throw Error(ErrorKind::InvalidArgument, "quadrature tolerance must be positive");
  if (!(b > a)) throw Error(ErrorKind::InvalidArgument, "quadrature interval must satisfy a < b");
  Simpson s(f, max_depth);
  const double m = 0.5 * (a + b);
  const double fa = s.eval(a);
  const double fm = s.eval(m);
  const double fb = s.eval(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  s.result.value = s.recurse({a, fa, m, fm, b, fb, whole}, abs_tol, 0);
  return s.result;
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b, int panels) {
  static constexpr double nodes[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                      0.9061798459386640};
  static constexpr double weights[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                        0.4786286704993665, 0.2369268850561891};
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    double local = 0.0;
    for (int i = 0; i < 5; ++i) local += weights[i] * f(mid + 0.5 * h * nodes[i]);
    sum += 0.5 * h * local;
  }
  return sum;
}

}  // namespace fucik
