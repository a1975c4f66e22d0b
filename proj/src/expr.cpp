#include "gsf/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "gsf/error.hpp"

namespace gsf {

struct Expression::Node {
  enum class Kind { number, variable, add, sub, mul, div, pow, neg, call } kind;
  double number = 0.0;
  std::string name;
  std::vector<std::shared_ptr<const Node>> args;

  double eval(double s) const {
    switch (kind) {
      case Kind::number:
        return number;
      case Kind::variable:
        return s;
      case Kind::add:
        return args[0]->eval(s) + args[1]->eval(s);
      case Kind::sub:
        return args[0]->eval(s) - args[1]->eval(s);
      case Kind::mul:
        return args[0]->eval(s) * args[1]->eval(s);
      case Kind::div:
        return args[0]->eval(s) / args[1]->eval(s);
      case Kind::pow:
        return std::pow(args[0]->eval(s), args[1]->eval(s));
      case Kind::neg:
        return -args[0]->eval(s);
      case Kind::call:
        break;
    }
    const double a = args[0]->eval(s);
    if (name == "exp") return std::exp(a);
    if (name == "log") return std::log(a);
    if (name == "sqrt") return std::sqrt(a);
    if (name == "sin") return std::sin(a);
    if (name == "cos") return std::cos(a);
    if (name == "tan") return std::tan(a);
    if (name == "atan") return std::atan(a);
    if (name == "sinh") return std::sinh(a);
    if (name == "cosh") return std::cosh(a);
    if (name == "tanh") return std::tanh(a);
    if (name == "abs") return std::abs(a);
    if (name == "pow") return std::pow(a, args[1]->eval(s));
    return std::nan("");
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind kind, std::vector<NodePtr> args = {}, double number = 0.0, std::string name = {}) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = kind;
  n->args = std::move(args);
  n->number = number;
  n->name = std::move(name);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr parse() {
    NodePtr n = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw SpecError("expr", what + " at offset " + std::to_string(pos_) + " in '" + text_ + "'");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expression() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = make(Kind::add, {lhs, term()});
      else if (accept('-'))
        lhs = make(Kind::sub, {lhs, term()});
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = make(Kind::mul, {lhs, unary()});
      else if (accept('/'))
        lhs = make(Kind::div, {lhs, unary()});
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Kind::neg, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  // Right associative; binds tighter than unary minus on its left operand.
  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Kind::pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (accept('(')) {
      NodePtr n = expression();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = text_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<size_t>(end - begin);
      return make(Kind::number, {}, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string name = text_.substr(start, pos_ - start);
      if (name == "s") return make(Kind::variable);
      if (name == "pi") return make(Kind::number, {}, std::numbers::pi);
      if (name == "e") return make(Kind::number, {}, std::numbers::e);
      static const char* unary_fns[] = {"exp",  "log",  "sqrt", "sin",  "cos", "tan",
                                        "atan", "sinh", "cosh", "tanh", "abs"};
      bool known = name == "pow";
      for (const char* fn : unary_fns) known = known || name == fn;
      if (!known) fail("unknown identifier '" + name + "'");
      if (!accept('(')) fail("expected '(' after " + name);
      std::vector<NodePtr> args{expression()};
      if (name == "pow") {
        if (!accept(',')) fail("pow expects two arguments");
        args.push_back(expression());
      }
      if (!accept(')')) fail("expected ')'");
      return make(Kind::call, std::move(args), 0.0, name);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  const std::string& text_;
  size_t pos_ = 0;
};

}  // namespace

Expression::Expression(std::string text) : text_(std::move(text)) { root_ = Parser(text_).parse(); }

double Expression::operator()(double s) const { return root_->eval(s); }

}  // namespace gsf
