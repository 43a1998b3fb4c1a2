#include "swe/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace swe {

struct Expression::Node {
  enum class Kind { constant, var_x, var_y, var_r, var_theta, unary, binary };
  Kind kind = Kind::constant;
  double value = 0;
  char op = 0;                       // + - * / ^ for binary, function id for unary
  std::string fn;                    // function name for unary
  std::shared_ptr<const Node> a, b;

  double eval(Vec2 p) const {
    switch (kind) {
      case Kind::constant: return value;
      case Kind::var_x: return p.x;
      case Kind::var_y: return p.y;
      case Kind::var_r: return norm(p);
      case Kind::var_theta: return std::atan2(p.y, p.x);
      case Kind::unary: {
        const double v = a->eval(p);
        if (fn == "sin") return std::sin(v);
        if (fn == "cos") return std::cos(v);
        if (fn == "tan") return std::tan(v);
        if (fn == "exp") return std::exp(v);
        if (fn == "log") return std::log(v);
        if (fn == "sqrt") return std::sqrt(v);
        if (fn == "abs") return std::abs(v);
        if (fn == "tanh") return std::tanh(v);
        return -v;  // unary minus
      }
      case Kind::binary: {
        const double l = a->eval(p), r = b->eval(p);
        switch (op) {
          case '+': return l + r;
          case '-': return l - r;
          case '*': return l * r;
          case '/': return l / r;
          default: return std::pow(l, r);
        }
      }
    }
    return 0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = sum();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("expression error at position " + std::to_string(pos_) +
                                ": " + what + " in \"" + s_ + "\"");
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  NodePtr make_binary(char op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::binary;
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }

  NodePtr sum() {
    NodePtr left = product();
    while (true) {
      if (eat('+')) left = make_binary('+', left, product());
      else if (eat('-')) left = make_binary('-', left, product());
      else return left;
    }
  }

  NodePtr product() {
    NodePtr left = power();
    while (true) {
      if (eat('*')) left = make_binary('*', left, power());
      else if (eat('/')) left = make_binary('/', left, power());
      else return left;
    }
  }

  // '^' binds tighter than unary minus (-2^2 = -4) and associates right
  NodePtr power() {
    if (eat('-')) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::unary;
      n->a = power();
      return n;
    }
    NodePtr base = atom();
    if (eat('^')) return make_binary('^', base, power());
    return base;
  }

  NodePtr atom() {
    skip_ws();
    if (eat('(')) {
      NodePtr e = sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return name();
    fail("expected a number, name or '('");
  }

  NodePtr number() {
    const char* start = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(start, &end);
    if (end == start) fail("bad number");
    pos_ += end - start;
    auto n = std::make_shared<Node>();
    n->value = v;
    return n;
  }

  NodePtr name() {
    std::string id;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      id += s_[pos_++];
    auto n = std::make_shared<Node>();
    if (id == "x") { n->kind = Node::Kind::var_x; return n; }
    if (id == "y") { n->kind = Node::Kind::var_y; return n; }
    if (id == "r") { n->kind = Node::Kind::var_r; return n; }
    if (id == "theta") { n->kind = Node::Kind::var_theta; return n; }
    if (id == "pi") { n->value = M_PI; return n; }
    static const char* fns[] = {"sin", "cos", "tan", "exp", "log", "sqrt", "abs", "tanh"};
    for (const char* f : fns) {
      if (id == f) {
        if (!eat('(')) fail("expected '(' after function name");
        n->kind = Node::Kind::unary;
        n->fn = id;
        n->a = sum();
        if (!eat(')')) fail("expected ')'");
        return n;
      }
    }
    fail("unknown name '" + id + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression(const std::string& text) : text_(text) {
  root_ = Parser(text).parse();
}

double Expression::operator()(Vec2 p) const { return root_->eval(p); }

}  // namespace swe
