#include "corrugate/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

#include "corrugate/errors.hpp"

namespace corrugate {

using Jet = ScalarField::Jet;

struct Expression::Node {
  enum class Op { Number, Var, Add, Sub, Mul, Div, Neg, Pow, Call };
  Op op = Op::Number;
  double value = 0.0;
  std::string function;
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

Jet chain(const Jet& u, double f, double f1, double f2) { return {f, f1 * u[1], f2 * u[1] * u[1] + f1 * u[2]}; }

Jet apply_function(const std::string& name, const Jet& u) {
  const double x = u[0];
  if (name == "sin") return chain(u, std::sin(x), std::cos(x), -std::sin(x));
  if (name == "cos") return chain(u, std::cos(x), -std::sin(x), -std::cos(x));
  if (name == "tan") {
    const double tn = std::tan(x), sec2 = 1.0 + tn * tn;
    return chain(u, tn, sec2, 2.0 * tn * sec2);
  }
  if (name == "exp") return chain(u, std::exp(x), std::exp(x), std::exp(x));
  if (name == "log") return chain(u, std::log(x), 1.0 / x, -1.0 / (x * x));
  if (name == "sqrt") {
    const double r = std::sqrt(x);
    return chain(u, r, 0.5 / r, -0.25 / (r * x));
  }
  if (name == "sinh") return chain(u, std::sinh(x), std::cosh(x), std::sinh(x));
  if (name == "cosh") return chain(u, std::cosh(x), std::sinh(x), std::cosh(x));
  if (name == "tanh") {
    const double th = std::tanh(x), s = 1.0 - th * th;
    return chain(u, th, s, -2.0 * th * s);
  }
  throw ConfigError("unknown function '" + name + "'");
}

Jet eval(const Node& node, double t) {
  switch (node.op) {
    case Node::Op::Number: return {node.value, 0.0, 0.0};
    case Node::Op::Var: return {t, 1.0, 0.0};
    case Node::Op::Neg: {
      const Jet u = eval(*node.lhs, t);
      return {-u[0], -u[1], -u[2]};
    }
    case Node::Op::Add:
    case Node::Op::Sub: {
      const Jet u = eval(*node.lhs, t), v = eval(*node.rhs, t);
      const double s = node.op == Node::Op::Add ? 1.0 : -1.0;
      return {u[0] + s * v[0], u[1] + s * v[1], u[2] + s * v[2]};
    }
    case Node::Op::Mul: {
      const Jet u = eval(*node.lhs, t), v = eval(*node.rhs, t);
      return {u[0] * v[0], u[1] * v[0] + u[0] * v[1], u[2] * v[0] + 2.0 * u[1] * v[1] + u[0] * v[2]};
    }
    case Node::Op::Div: {
      const Jet u = eval(*node.lhs, t), v = eval(*node.rhs, t);
      const double q = u[0] / v[0];
      const double q1 = (u[1] - q * v[1]) / v[0];
      const double q2 = (u[2] - 2.0 * q1 * v[1] - q * v[2]) / v[0];
      return {q, q1, q2};
    }
    case Node::Op::Pow: {
      const Jet u = eval(*node.lhs, t);
      const double p = node.value;
      return chain(u, std::pow(u[0], p), p * std::pow(u[0], p - 1.0), p * (p - 1.0) * std::pow(u[0], p - 2.0));
    }
    case Node::Op::Call: return apply_function(node.function, eval(*node.lhs, t));
  }
  return {};
}

bool depends_on_t(const Node& node) {
  if (node.op == Node::Op::Var) return true;
  return (node.lhs && depends_on_t(*node.lhs)) || (node.rhs && depends_on_t(*node.rhs));
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr parse() {
    NodePtr root = expression();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("expression '" + text_ + "' at position " + std::to_string(pos_) + ": " + what);
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  static NodePtr make(Node::Op op, NodePtr lhs, NodePtr rhs = nullptr) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }

  NodePtr expression() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(Node::Op::Add, lhs, term());
      else if (accept('-')) lhs = make(Node::Op::Sub, lhs, term());
      else return lhs;
    }
  }
  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(Node::Op::Mul, lhs, unary());
      else if (accept('/')) lhs = make(Node::Op::Div, lhs, unary());
      else return lhs;
    }
  }
  NodePtr unary() {
    if (accept('-')) return make(Node::Op::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }
  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) {
      NodePtr exponent = unary();
      if (depends_on_t(*exponent)) fail("exponent must not depend on t");
      auto n = std::make_shared<Node>();
      n->op = Node::Op::Pow;
      n->lhs = base;
      n->value = eval(*exponent, 0.0)[0];
      return n;
    }
    return base;
  }
  NodePtr primary() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (accept('(')) {
      NodePtr inner = expression();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(text_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      pos_ += used;
      auto n = std::make_shared<Node>();
      n->op = Node::Op::Number;
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
      const std::string name = text_.substr(start, pos_ - start);
      if (name == "t") {
        auto n = std::make_shared<Node>();
        n->op = Node::Op::Var;
        return n;
      }
      if (name == "pi") {
        auto n = std::make_shared<Node>();
        n->value = std::numbers::pi;
        return n;
      }
      static const char* known[] = {"sin", "cos", "tan", "exp", "log", "sqrt", "sinh", "cosh", "tanh"};
      bool ok = false;
      for (const char* k : known) ok = ok || name == k;
      if (!ok) fail("unknown identifier '" + name + "'");
      if (!accept('(')) fail("expected '(' after " + name);
      NodePtr arg = expression();
      if (!accept(')')) fail("expected ')'");
      auto n = std::make_shared<Node>();
      n->op = Node::Op::Call;
      n->function = name;
      n->lhs = arg;
      return n;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(text).parse();
  return e;
}

ScalarField::Jet Expression::evaluate(double t) const { return eval(*root_, t); }

ScalarField Expression::field() const {
  auto root = root_;
  return ScalarField::from_function([root](double t) { return eval(*root, t); }, text_);
}

ScalarField scalar_field_from_text(const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return ScalarField::constant(v);
  } catch (const std::exception&) {
  }
  return Expression::parse(text).field();
}

}  // namespace corrugate
