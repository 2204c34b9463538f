#pragma once

// Tiny expression language for target curvatures, e.g. "2 + 0.5*sin(t)".
// Grammar: numbers, t, pi, + - * / ^ (constant exponent), parentheses and
// sin cos tan exp log sqrt cosh sinh tanh. Evaluation carries first and
// second derivatives in t.

#include <memory>
#include <string>

#include "corrugate/curve.hpp"

namespace corrugate {

class Expression {
 public:
  /// Throws ConfigError on syntax errors.
  static Expression parse(const std::string& text);

  ScalarField::Jet evaluate(double t) const;
  const std::string& text() const { return text_; }
  ScalarField field() const;

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

/// Constant when the text is a plain number, otherwise an Expression.
ScalarField scalar_field_from_text(const std::string& text);

}  // namespace corrugate
