#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "fucik/error.hpp"
#include "fucik/expr.hpp"
#include "fucik/parallel.hpp"
#include "fucik/prufer.hpp"
#include "support/oracles.hpp"

using fucik::Error;
using fucik::ErrorKind;
using fucik::ParseError;
using fucik::WeightExpr;

namespace {

double at(const char* text, double x) { return WeightExpr::parse(text).eval(x); }
double slope(const char* text, double x) { return WeightExpr::parse(text).eval_derivative(x); }

template <class Fn>
ParseError parse_failure(Fn&& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a ParseError");
  return ParseError(ErrorKind::Syntax, 0, "");
}

// Random smooth expressions that stay defined on [0, 1].
class ExprGen {
 public:
  explicit ExprGen(unsigned seed) : rng_(seed) {}

  std::string gen(int depth) {
    if (depth == 0) return leaf();
    switch (pick(12)) {
      case 0: return "(" + gen(depth - 1) + "+" + gen(depth - 1) + ")";
      case 1: return "(" + gen(depth - 1) + "-" + gen(depth - 1) + ")";
      case 2: return gen(depth - 1) + "*" + gen(depth - 1);
      case 3: return "(" + gen(depth - 1) + ")/(1.5+" + gen(depth - 1) + "^2)";
      case 4: return "sin(" + gen(depth - 1) + ")";
      case 5: return "cos(" + gen(depth - 1) + ")";
      case 6: return "exp(" + gen(depth - 1) + "/4)";
      case 7: return "sqrt(1+" + gen(depth - 1) + "^2)";
      case 8: return "log(2+sin(" + gen(depth - 1) + "))";
      case 9: return "(" + gen(depth - 1) + ")^3";
      case 10: return "(-" + gen(depth - 1) + ")";
      default: return "2^(" + gen(depth - 1) + "/3)";
    }
  }

 private:
  std::string leaf() {
    if (pick(2) == 0) return "x";
    std::uniform_real_distribution<double> d(0.1, 3.0);
    return std::to_string(d(rng_));
  }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  std::mt19937 rng_;
};

}  // namespace

TEST_CASE("parse follows standard precedence") {
  CHECK(at("1+1/(x+1)", 0) == doctest::Approx(2.0));
  CHECK(at("1+cos(2*x)^2", 0) == doctest::Approx(2.0));
  CHECK(at("2^3^2", 0.37) == 512.0);
  CHECK(at("-x^2", 3) == -9.0);
  CHECK(at("2*3+4", 0) == 10.0);
  CHECK(at("2^-1", 0) == 0.5);
  CHECK(at("8/4/2", 0) == 1.0);
  CHECK(at("2-3-4", 0) == -5.0);
  CHECK(at("--x", 2) == 2.0);
  CHECK(at(" 1.5e1 * x ", 2) == 30.0);
  CHECK(at("+x", 4) == 4.0);
}

TEST_CASE("eval and domain errors") {
  CHECK(at("1+1/(x+1)", 1) == doctest::Approx(1.5));
  CHECK(at("sqrt(x)", 4) == doctest::Approx(2.0));
  CHECK(at("abs(x-2)", 0.5) == doctest::Approx(1.5));
  CHECK(at("tan(x)", 0.3) == doctest::Approx(std::tan(0.3)));

  const WeightExpr inv = WeightExpr::parse("1/x");
  try {
    inv.eval(0.0);
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
    const std::string what = e.what();
    CHECK(what.find("division by zero") != std::string::npos);
    CHECK(what.find("1/x") != std::string::npos);
  }
  CHECK_THROWS_AS(WeightExpr::parse("log(x)").eval(0.0), Error);
  CHECK_THROWS_AS(WeightExpr::parse("sqrt(x-2)").eval(1.0), Error);
  CHECK_THROWS_AS(WeightExpr::parse("(x-1)^0.5").eval(0.0), Error);
}

TEST_CASE("symbolic derivative examples") {
  CHECK(slope("x^2", 3) == doctest::Approx(6.0));
  CHECK(slope("1+cos(2*x)^2", 0) == doctest::Approx(0.0));
  CHECK(slope("1+1/(x+1)", 0) == doctest::Approx(-1.0));
  CHECK(slope("7", 0.4) == 0.0);
  CHECK(slope("x^x", 1) == doctest::Approx(1.0));
  CHECK(slope("2^x", 0) == doctest::Approx(std::log(2.0)));
  CHECK(slope("tan(x)", 0) == doctest::Approx(1.0));
  CHECK(slope("abs(x-2)", 0.5) == doctest::Approx(-1.0));
}

TEST_CASE("syntax, identifier and arity errors") {
  auto e1 = parse_failure([] { fucik::parse_expr("1+"); });
  CHECK(e1.kind() == ErrorKind::Syntax);
  CHECK(e1.position() == 2);

  auto e2 = parse_failure([] { fucik::parse_expr("y+1"); });
  CHECK(e2.kind() == ErrorKind::UnknownIdentifier);
  CHECK(e2.position() == 0);

  auto e3 = parse_failure([] { fucik::parse_expr("1 + sin(x, 2)"); });
  CHECK(e3.kind() == ErrorKind::Arity);
  CHECK(e3.position() == 4);

  CHECK(parse_failure([] { fucik::parse_expr("sin()"); }).kind() == ErrorKind::Arity);
  CHECK(parse_failure([] { fucik::parse_expr("sin x"); }).kind() == ErrorKind::Syntax);
  CHECK(parse_failure([] { fucik::parse_expr("2x"); }).kind() == ErrorKind::Syntax);
  CHECK(parse_failure([] { fucik::parse_expr("x(2)"); }).kind() == ErrorKind::Syntax);
  CHECK(parse_failure([] { fucik::parse_expr("(1+x"); }).kind() == ErrorKind::Syntax);
  CHECK(parse_failure([] { fucik::parse_expr(""); }).kind() == ErrorKind::Syntax);
  CHECK(parse_failure([] { fucik::parse_expr("   "); }).kind() == ErrorKind::Syntax);
  CHECK(parse_failure([] { fucik::parse_expr("1 $ 2"); }).position() == 2);
  CHECK(parse_failure([] { fucik::parse_expr("pi*x"); }).kind() == ErrorKind::UnknownIdentifier);
}

TEST_CASE("canonical printer") {
  CHECK(WeightExpr::parse("1+cos(2*x)^2").value().str() == "1+cos(2*x)^2");
  CHECK(WeightExpr::parse("1 + 1/(x+1)").value().str() == "1+1/(x+1)");
  CHECK(WeightExpr::parse("2^(x^2)").value().str() == "2^(x^2)");
  CHECK(WeightExpr::parse("(2^x)^2").value().str() == "(2^x)^2");
  CHECK(WeightExpr::parse("-(x+1)*3").value().str() == "-(x+1)*3");
  CHECK(WeightExpr::parse("x-(1-x)").value().str() == "x-(1-x)");
  CHECK(WeightExpr::parse("x/(2*x)").value().str() == "x/(2*x)");
  CHECK(WeightExpr::parse("-3*x").value().str() == "(-3)*x");
}

TEST_CASE("derivative agrees with central differences on random expressions") {
  ExprGen gen(20261018);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> point(0.0, 1.0);
  int checked = 0;
  for (int e = 0; e < 60; ++e) {
    const std::string text = gen.gen(1 + e % 4);
    CAPTURE(text);
    const WeightExpr w = WeightExpr::parse(text);
    const auto f = [&](double x) { return w.eval(x); };
    for (int i = 0; i < 100; ++i) {
      const double x = 1e-5 + (1.0 - 2e-5) * point(rng);
      const double exact = w.eval_derivative(x);
      const double fd = oracle::central_difference(f, x, 1e-6);
      // Relative to the scale of the function: round-off in the difference
      // quotient is ~1e-16 |f| / h.
      const double scale = 1.0 + std::fabs(exact) + 1e-4 * std::fabs(w.eval(x));
      CAPTURE(x);
      CHECK(std::fabs(exact - fd) / scale < 1e-6);
      ++checked;
    }
  }
  CHECK(checked == 6000);
}

TEST_CASE("print then parse evaluates identically") {
  ExprGen gen(99);
  for (int e = 0; e < 80; ++e) {
    const std::string text = gen.gen(1 + e % 5);
    const WeightExpr a = WeightExpr::parse(text);
    const WeightExpr b = WeightExpr::parse(a.value().str());
    const WeightExpr c = WeightExpr::parse(a.derivative().str());
    CAPTURE(text);
    CHECK(b.value().str() == a.value().str());
    for (int i = 0; i <= 32; ++i) {
      const double x = i / 32.0;
      CHECK(a.eval(x) == b.eval(x));
      CHECK(a.eval_derivative(x) == c.eval(x));
    }
  }
}

TEST_CASE("positivity check on a 4097-point grid") {
  CHECK_NOTHROW(WeightExpr::parse("1+x").require_positive(0, 1));
  CHECK_THROWS_AS(WeightExpr::parse("x-0.5").require_positive(0, 1), Error);
  CHECK_THROWS_AS(WeightExpr::parse("x").require_positive(0, 1), Error);
  // A dip that only the dense grid sees: zero at x = 1/4096 * 1001.
  CHECK_THROWS_AS(WeightExpr::parse("abs(x-1001/4096)").require_positive(0, 1), Error);
  CHECK_NOTHROW(WeightExpr::parse("1+x").require_positive(0, 1, 0.5));
  CHECK_THROWS_AS(WeightExpr::parse("1+x").require_positive(0, 1, 1.0), Error);
  CHECK_THROWS_AS(fucik::Problem(1.0, WeightExpr::parse("1"), WeightExpr::parse("cos(3*x)")), Error);
}

TEST_CASE("weights can be evaluated concurrently") {
  const WeightExpr w = WeightExpr::parse("1+cos(2*x)^2+exp(-x)/(x+1)");
  std::vector<double> serial(4096);
  std::vector<double> threaded(4096);
  for (std::size_t i = 0; i < serial.size(); ++i) serial[i] = w.eval_derivative(i / 4096.0);
  fucik::parallel_for(threaded.size(), [&](std::size_t i) { threaded[i] = w.eval_derivative(i / 4096.0); }, 8);
  CHECK(serial == threaded);
}
