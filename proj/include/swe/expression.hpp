#pragma once

#include <memory>
#include <string>

#include "swe/vec2.hpp"

namespace swe {

// Arithmetic expression of a point, for Coriolis parameters and custom
// initial data. Variables: x, y, r (radius), theta (angle). Operators
// + - * / ^ with the usual precedence, unary minus, parentheses.
// Functions: sin cos tan exp log sqrt abs tanh. Constant: pi.
class Expression {
 public:
  explicit Expression(const std::string& text);  // throws on parse errors
  double operator()(Vec2 p) const;

  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace swe
