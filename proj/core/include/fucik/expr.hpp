#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace fucik {

enum class OpCode : std::uint8_t {
  Constant,
  Variable,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Neg,
  Sin,
  Cos,
  Tan,
  Exp,
  Log,
  Sqrt,
  Abs,
};

bool is_binary(OpCode op) noexcept;
bool is_function(OpCode op) noexcept;
const char* function_name(OpCode op) noexcept;

/// Immutable expression tree in the single variable `x`.
///
/// Nodes are shared between trees, so copies are cheap and derivative trees
/// reuse subtrees of the original. Evaluation throws `Error` with
/// `ErrorKind::Domain` naming the offending subexpression.
class Expr {
 public:
  struct Node;

  /// The constant 0.
  Expr();

  static Expr constant(double value);
  static Expr variable();
  /// Unary node: `Neg` or one of the named functions. Folds constant arguments.
  static Expr unary(OpCode op, Expr arg);
  /// Binary node. Folds two constant operands when the result is finite.
  static Expr binary(OpCode op, Expr lhs, Expr rhs);

  OpCode op() const noexcept;
  bool is_constant() const noexcept { return op() == OpCode::Constant; }
  bool is_constant(double value) const noexcept;
  /// Value of a `Constant` node (0 for every other node).
  double constant_value() const noexcept;
  /// First operand of a unary or binary node.
  const Expr& lhs() const;
  /// Second operand of a binary node.
  const Expr& rhs() const;

  double eval(double x) const;
  Expr derivative() const;

  /// Canonical text in the same grammar `parse_expr` accepts.
  std::string str() const;

  /// Number of nodes, counting shared subtrees once per reference.
  std::size_t size() const;

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;

  friend class CompiledExpr;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, const Expr& exponent);

/// Parses the weight grammar:
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('-' | '+') unary | power
///   power   := primary ('^' unary)?
///   primary := number | 'x' | name '(' expr ')' | '(' expr ')'
///
/// with name one of sin, cos, tan, exp, log, sqrt, abs. `^` is right
/// associative and binds tighter than unary minus, so -x^2 = -(x^2).
/// Throws `ParseError`.
Expr parse_expr(std::string_view text);

/// Flattened postfix form of an expression used on the hot path of the ODE
/// right-hand side.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  explicit CompiledExpr(const Expr& expr);

  double operator()(double x) const;

 private:
  struct Instr {
    OpCode op;
    double value;
    const Expr::Node* node;
  };
  std::vector<Instr> code_;
  std::size_t max_depth_ = 0;
};

/// A positive weight function given as text, with its exact symbolic
/// derivative. Immutable after construction.
class WeightExpr {
 public:
  /// Parses `text` and differentiates it. Throws `ParseError` on bad input.
  static WeightExpr parse(std::string_view text);
  static WeightExpr from_expr(Expr value);
  static WeightExpr constant(double value);

  double eval(double x) const { return value_fn_(x); }
  double eval_derivative(double x) const { return derivative_fn_(x); }

  const Expr& value() const noexcept { return value_; }
  const Expr& derivative() const noexcept { return derivative_; }
  const std::string& source_text() const noexcept { return source_; }
  bool is_constant() const noexcept { return value_.is_constant(); }

  /// Rejects weights that are not finite and > margin at every point of a
  /// 4097-point uniform grid on [a, b]. Throws `Error` (Domain).
  void require_positive(double a, double b, double margin = 0.0) const;

 private:
  WeightExpr(Expr value, std::string source);

  Expr value_;
  Expr derivative_;
  std::string source_;
  CompiledExpr value_fn_;
  CompiledExpr derivative_fn_;
};

inline double eval(const WeightExpr& w, double x) { return w.eval(x); }
inline double eval_derivative(const WeightExpr& w, double x) { return w.eval_derivative(x); }

/// Number of grid points used for positivity checks and weight bounds.
inline constexpr int kWeightSampleCount = 4097;

}  // namespace fucik
