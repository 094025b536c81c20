// SPDX-License-Identifier: Apache-2.0

#ifndef YSL_EXPR_HPP
#define YSL_EXPR_HPP

#include <map>
#include <memory>
#include <string>

namespace ysl {

/// Compiled arithmetic expression over named scalar variables.
/// Grammar: + - * / ^ (right-assoc), unary minus, parentheses, number
/// literals, variables, 1-argument functions (sin cos tan exp log sqrt
/// abs tanh sinh cosh), constants pi and e. Used for analytic
/// micro-rotation profiles in solver configs.
class Expr {
 public:
  struct Node;

  static Expr parse(const std::string& text);

  double eval(const std::map<std::string, double>& vars) const;

  const std::string& text() const { return text_; }

  Expr() = default;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace ysl

#endif
