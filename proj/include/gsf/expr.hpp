#pragma once

#include <memory>
#include <string>

namespace gsf {

// Arithmetic expression in one variable `s`: + - * / ^, parentheses,
// constants pi and e, and exp log sqrt sin cos tan atan sinh cosh tanh abs
// and pow(a, b). Parse errors throw SpecError with the character offset.
class Expression {
 public:
  explicit Expression(std::string text);
  double operator()(double s) const;
  const std::string& text() const noexcept { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace gsf
