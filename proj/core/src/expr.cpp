#include "fucik/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <system_error>
#include <utility>

#include "fucik/error.hpp"

namespace fucik {

struct Expr::Node {
  OpCode op = OpCode::Constant;
  double value = 0.0;
  Expr a;
  Expr b;
};

bool is_binary(OpCode op) noexcept {
  switch (op) {
    case OpCode::Add:
    case OpCode::Sub:
    case OpCode::Mul:
    case OpCode::Div:
    case OpCode::Pow:
      return true;
    default:
      return false;
  }
}

bool is_function(OpCode op) noexcept { return op >= OpCode::Sin; }

const char* function_name(OpCode op) noexcept {
  switch (op) {
    case OpCode::Sin: return "sin";
    case OpCode::Cos: return "cos";
    case OpCode::Tan: return "tan";
    case OpCode::Exp: return "exp";
    case OpCode::Log: return "log";
    case OpCode::Sqrt: return "sqrt";
    case OpCode::Abs: return "abs";
    default: return "";
  }
}

std::string node_str(const Expr::Node& node);

namespace {

const Expr::Node kZeroNode{};

[[noreturn]] void domain_error(const char* what, const Expr::Node* node, double x) {
  std::ostringstream os;
  os << what;
  if (node != nullptr) os << " in '" << node_str(*node) << "'";
  os << " at x=" << x;
  throw Error(ErrorKind::Domain, os.str());
}

// Applies one operation. `node` is only used for error messages.
double apply(OpCode op, double a, double b, const Expr::Node* node, double x) {
  double r = 0.0;
  switch (op) {
    case OpCode::Add: r = a + b; break;
    case OpCode::Sub: r = a - b; break;
    case OpCode::Mul: r = a * b; break;
    case OpCode::Div:
      if (b == 0.0) domain_error("division by zero", node, x);
      r = a / b;
      break;
    case OpCode::Pow:
      if (a == 0.0 && b < 0.0) domain_error("zero raised to a negative power", node, x);
      if (a < 0.0 && b != std::trunc(b)) domain_error("negative base with non-integer exponent", node, x);
      r = std::pow(a, b);
      break;
    case OpCode::Neg: r = -a; break;
    case OpCode::Sin: r = std::sin(a); break;
    case OpCode::Cos: r = std::cos(a); break;
    case OpCode::Tan: r = std::tan(a); break;
    case OpCode::Exp: r = std::exp(a); break;
    case OpCode::Log:
      if (!(a > 0.0)) domain_error("log of non-positive argument", node, x);
      r = std::log(a);
      break;
    case OpCode::Sqrt:
      if (a < 0.0) domain_error("sqrt of negative argument", node, x);
      r = std::sqrt(a);
      break;
    case OpCode::Abs: r = std::fabs(a); break;
    case OpCode::Constant:
    case OpCode::Variable:
      break;
  }
  if (!std::isfinite(r)) domain_error("non-finite value", node, x);
  return r;
}

// Tries to fold an operation on constants; returns false if evaluation fails.
bool try_fold(OpCode op, double a, double b, double& out) {
  try {
    out = apply(op, a, b, nullptr, 0.0);
    return true;
  } catch (const Error&) {
    return false;
  }
}

int precedence(const Expr& e) {
  switch (e.op()) {
    case OpCode::Add:
    case OpCode::Sub: return 1;
    case OpCode::Mul:
    case OpCode::Div: return 2;
    case OpCode::Neg: return 3;
    case OpCode::Pow: return 4;
    default: return 5;
  }
}

std::string format_constant(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

void print(const Expr& e, std::string& out);

void print_wrapped(const Expr& e, bool wrap, std::string& out) {
  if (wrap) out += '(';
  print(e, out);
  if (wrap) out += ')';
}

void print(const Expr& e, std::string& out) {
  const OpCode op = e.op();
  switch (op) {
    case OpCode::Constant: {
      const double v = e.constant_value();
      if (std::signbit(v)) {
        out += "(-";
        out += format_constant(-v);
        out += ')';
      } else {
        out += format_constant(v);
      }
      return;
    }
    case OpCode::Variable:
      out += 'x';
      return;
    case OpCode::Add:
    case OpCode::Sub:
      print(e.lhs(), out);
      out += op == OpCode::Add ? '+' : '-';
      print_wrapped(e.rhs(), precedence(e.rhs()) <= 1, out);
      return;
    case OpCode::Mul:
    case OpCode::Div:
      print_wrapped(e.lhs(), precedence(e.lhs()) <= 1, out);
      out += op == OpCode::Mul ? '*' : '/';
      print_wrapped(e.rhs(), precedence(e.rhs()) <= 2, out);
      return;
    case OpCode::Pow:
      print_wrapped(e.lhs(), precedence(e.lhs()) < 5, out);
      out += '^';
      print_wrapped(e.rhs(), precedence(e.rhs()) < 5, out);
      return;
    case OpCode::Neg:
      out += '-';
      print_wrapped(e.lhs(), precedence(e.lhs()) <= 2, out);
      return;
    default:
      out += function_name(op);
      out += '(';
      print(e.lhs(), out);
      out += ')';
      return;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Expr

Expr::Expr() : node_(std::shared_ptr<const Node>(&kZeroNode, [](const Node*) {})) {}

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->op = OpCode::Constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable() {
  auto n = std::make_shared<Node>();
  n->op = OpCode::Variable;
  return Expr(std::move(n));
}

Expr Expr::unary(OpCode op, Expr arg) {
  if (arg.is_constant()) {
    double folded = 0.0;
    if (try_fold(op, arg.constant_value(), 0.0, folded)) return constant(folded);
  }
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(arg);
  return Expr(std::move(n));
}

Expr Expr::binary(OpCode op, Expr lhs, Expr rhs) {
  if (lhs.is_constant() && rhs.is_constant()) {
    double folded = 0.0;
    if (try_fold(op, lhs.constant_value(), rhs.constant_value(), folded)) return constant(folded);
  }
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(lhs);
  n->b = std::move(rhs);
  return Expr(std::move(n));
}

OpCode Expr::op() const noexcept { return node_->op; }

bool Expr::is_constant(double value) const noexcept {
  return is_constant() && node_->value == value;
}

double Expr::constant_value() const noexcept { return is_constant() ? node_->value : 0.0; }

const Expr& Expr::lhs() const { return node_->a; }
const Expr& Expr::rhs() const { return node_->b; }

double Expr::eval(double x) const {
  switch (op()) {
    case OpCode::Constant: return node_->value;
    case OpCode::Variable: return x;
    default: break;
  }
  const double a = node_->a.eval(x);
  const double b = is_binary(op()) ? node_->b.eval(x) : 0.0;
  return apply(op(), a, b, node_.get(), x);
}

std::string Expr::str() const {
  std::string out;
  print(*this, out);
  return out;
}

std::size_t Expr::size() const {
  switch (op()) {
    case OpCode::Constant:
    case OpCode::Variable: return 1;
    default: break;
  }
  return 1 + node_->a.size() + (is_binary(op()) ? node_->b.size() : 0);
}

// Error-path only: rebuilds an owning tree around the node's children.
std::string node_str(const Expr::Node& node) {
  switch (node.op) {
    case OpCode::Constant: return Expr::constant(node.value).str();
    case OpCode::Variable: return "x";
    default: break;
  }
  if (is_binary(node.op)) return Expr::binary(node.op, node.a, node.b).str();
  return Expr::unary(node.op, node.a).str();
}

// ---------------------------------------------------------------------------
// Algebra. Operators fold constants only; the derivative builder below adds
// identity simplifications on top.

Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(OpCode::Add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(OpCode::Sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::binary(OpCode::Mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::binary(OpCode::Div, a, b); }
Expr operator-(const Expr& a) { return Expr::unary(OpCode::Neg, a); }
Expr pow(const Expr& base, const Expr& exponent) { return Expr::binary(OpCode::Pow, base, exponent); }

namespace {

Expr s_add(const Expr& a, const Expr& b) {
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  if (b.op() == OpCode::Neg) return Expr::binary(OpCode::Sub, a, b.lhs());
  return a + b;
}

Expr s_neg(const Expr& a) {
  if (a.op() == OpCode::Neg) return a.lhs();
  return -a;
}

Expr s_sub(const Expr& a, const Expr& b) {
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return s_neg(b);
  return a - b;
}

Expr s_mul(const Expr& a, const Expr& b) {
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(-1.0)) return s_neg(b);
  if (b.is_constant(-1.0)) return s_neg(a);
  if (a.op() == OpCode::Neg) return s_neg(s_mul(a.lhs(), b));
  if (b.op() == OpCode::Neg) return s_neg(s_mul(a, b.lhs()));
  return a * b;
}

Expr s_div(const Expr& a, const Expr& b) {
  if (a.is_constant(0.0)) return Expr::constant(0.0);
  if (b.is_constant(1.0)) return a;
  return a / b;
}

Expr s_pow(const Expr& base, const Expr& exponent) {
  if (exponent.is_constant(1.0)) return base;
  if (exponent.is_constant(0.0)) return Expr::constant(1.0);
  return pow(base, exponent);
}

Expr differentiate(const Expr& e) {
  const OpCode op = e.op();
  switch (op) {
    case OpCode::Constant: return Expr::constant(0.0);
    case OpCode::Variable: return Expr::constant(1.0);
    default: break;
  }
  const Expr& u = e.lhs();
  const Expr du = differentiate(u);
  switch (op) {
    case OpCode::Add: return s_add(du, differentiate(e.rhs()));
    case OpCode::Sub: return s_sub(du, differentiate(e.rhs()));
    case OpCode::Mul: {
      const Expr& v = e.rhs();
      return s_add(s_mul(du, v), s_mul(u, differentiate(v)));
    }
    case OpCode::Div: {
      const Expr& v = e.rhs();
      const Expr dv = differentiate(v);
      if (dv.is_constant(0.0)) return s_div(du, v);
      return s_sub(s_div(du, v), s_div(s_mul(u, dv), s_pow(v, Expr::constant(2.0))));
    }
    case OpCode::Pow: {
      const Expr& v = e.rhs();
      if (v.is_constant()) {
        const double c = v.constant_value();
        return s_mul(s_mul(Expr::constant(c), s_pow(u, Expr::constant(c - 1.0))), du);
      }
      const Expr dv = differentiate(v);
      if (u.is_constant()) {
        return s_mul(s_mul(Expr::unary(OpCode::Log, u), e), dv);
      }
      // u^v (v' log u + v u'/u)
      return s_mul(e, s_add(s_mul(dv, Expr::unary(OpCode::Log, u)), s_div(s_mul(v, du), u)));
    }
    case OpCode::Neg: return s_neg(du);
    case OpCode::Sin: return s_mul(Expr::unary(OpCode::Cos, u), du);
    case OpCode::Cos: return s_neg(s_mul(Expr::unary(OpCode::Sin, u), du));
    case OpCode::Tan:
      return s_div(du, s_pow(Expr::unary(OpCode::Cos, u), Expr::constant(2.0)));
    case OpCode::Exp: return s_mul(e, du);
    case OpCode::Log: return s_div(du, u);
    case OpCode::Sqrt: return s_div(du, s_mul(Expr::constant(2.0), e));
    case OpCode::Abs: return s_mul(s_div(u, e), du);
    default: break;
  }
  return Expr::constant(0.0);
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError(ErrorKind::Syntax, pos_, "empty expression");
    Expr e = expr();
    skip_space();
    if (pos_ != text_.size()) {
      throw ParseError(ErrorKind::Syntax, pos_, std::string("unexpected '") + text_[pos_] + "'");
    }
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ == text_.size()) {
        throw ParseError(ErrorKind::Syntax, pos_, std::string("expected '") + c + "' before end of input");
      }
      throw ParseError(ErrorKind::Syntax, pos_,
                       std::string("expected '") + c + "', found '" + text_[pos_] + "'");
    }
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = lhs + term();
      } else if (accept('-')) {
        lhs = lhs - term();
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = lhs * unary();
      } else if (accept('/')) {
        lhs = lhs / unary();
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) return pow(base, unary());
    return base;
  }

  Expr primary() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError(ErrorKind::Syntax, pos_, "unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = expr();
      expect(')');
      return inner;
    }
    if ((c >= '0' && c <= '9') || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError(ErrorKind::Syntax, pos_, std::string("unexpected '") + c + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      const std::size_t exp_start = pos_;
      digits();
      if (pos_ == exp_start) pos_ = save;  // "2e" is 2 followed by identifier e
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_) {
      throw ParseError(ErrorKind::Syntax, start, "malformed number '" + std::string(text_.substr(start, pos_ - start)) + "'");
    }
    return Expr::constant(value);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x") return Expr::variable();

    static constexpr std::array<OpCode, 7> kFunctions = {OpCode::Sin, OpCode::Cos,  OpCode::Tan, OpCode::Exp,
                                                        OpCode::Log, OpCode::Sqrt, OpCode::Abs};
    for (OpCode fn : kFunctions) {
      if (name != function_name(fn)) continue;
      skip_space();
      if (pos_ == text_.size() || text_[pos_] != '(') {
        throw ParseError(ErrorKind::Syntax, pos_, "expected '(' after function '" + std::string(name) + "'");
      }
      ++pos_;
      skip_space();
      if (accept(')')) {
        throw ParseError(ErrorKind::Arity, start, "function '" + std::string(name) + "' takes 1 argument, got 0");
      }
      Expr arg = expr();
      std::size_t count = 1;
      while (accept(',')) {
        expr();
        ++count;
      }
      if (count != 1) {
        throw ParseError(ErrorKind::Arity, start,
                         "function '" + std::string(name) + "' takes 1 argument, got " + std::to_string(count));
      }
      expect(')');
      return Expr::unary(fn, std::move(arg));
    }
    throw ParseError(ErrorKind::UnknownIdentifier, start, "unknown identifier '" + std::string(name) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr Expr::derivative() const { return differentiate(*this); }

Expr parse_expr(std::string_view text) { return Parser(text).parse(); }

// ---------------------------------------------------------------------------
// CompiledExpr

CompiledExpr::CompiledExpr(const Expr& expr) {
  std::size_t depth = 0;
  // Post-order walk; tracks the evaluation stack depth.
  auto emit = [&](auto&& self, const Expr& e) -> void {
    const OpCode op = e.op();
    if (op == OpCode::Constant || op == OpCode::Variable) {
      code_.push_back({op, e.constant_value(), e.node_.get()});
      max_depth_ = std::max(max_depth_, ++depth);
      return;
    }
    self(self, e.lhs());
    if (is_binary(op)) {
      self(self, e.rhs());
      --depth;
    }
    code_.push_back({op, 0.0, e.node_.get()});
  };
  emit(emit, expr);
}

double CompiledExpr::operator()(double x) const {
  constexpr std::size_t kInline = 64;
  std::array<double, kInline> inline_stack;
  std::vector<double> heap_stack;
  double* stack = inline_stack.data();
  if (max_depth_ > kInline) {
    heap_stack.resize(max_depth_);
    stack = heap_stack.data();
  }
  std::size_t top = 0;
  for (const Instr& in : code_) {
    switch (in.op) {
      case OpCode::Constant: stack[top++] = in.value; break;
      case OpCode::Variable: stack[top++] = x; break;
      default:
        if (is_binary(in.op)) {
          const double b = stack[--top];
          stack[top - 1] = apply(in.op, stack[top - 1], b, in.node, x);
        } else {
          stack[top - 1] = apply(in.op, stack[top - 1], 0.0, in.node, x);
        }
    }
  }
  return top == 0 ? 0.0 : stack[0];
}

// ---------------------------------------------------------------------------
// WeightExpr

WeightExpr::WeightExpr(Expr value, std::string source)
    : value_(std::move(value)),
      derivative_(value_.derivative()),
      source_(std::move(source)),
      value_fn_(value_),
      derivative_fn_(derivative_) {}

WeightExpr WeightExpr::parse(std::string_view text) { return WeightExpr(parse_expr(text), std::string(text)); }

WeightExpr WeightExpr::from_expr(Expr value) {
  std::string text = value.str();
  return WeightExpr(std::move(value), std::move(text));
}

WeightExpr WeightExpr::constant(double value) { return from_expr(Expr::constant(value)); }

void WeightExpr::require_positive(double a, double b, double margin) const {
  const int n = kWeightSampleCount;
  for (int i = 0; i < n; ++i) {
    const double x = a + (b - a) * static_cast<double>(i) / (n - 1);
    const double v = eval(x);
    if (!(v > margin)) {
      std::ostringstream os;
      os << "weight '" << source_ << "' is not positive: value " << v << " at x=" << x;
      throw Error(ErrorKind::Domain, os.str());
    }
    eval_derivative(x);
  }
}

}  // namespace fucik
