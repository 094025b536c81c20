// SPDX-License-Identifier: Apache-2.0

#include "ysl/expr.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace ysl {

struct Expr::Node {
  enum class Kind { Number, Var, Unary, Binary, Call } kind;
  double value = 0.0;
  std::string name;
  char op = 0;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

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
  const std::string& s_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& why) {
    throw std::invalid_argument("expression parse error at position " + std::to_string(pos_) +
                                ": " + why);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool consume(char c) {
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
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Node::Kind::Binary;
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }

  NodePtr sum() {
    NodePtr left = product();
    for (;;) {
      if (consume('+'))
        left = make_binary('+', left, product());
      else if (consume('-'))
        left = make_binary('-', left, product());
      else
        return left;
    }
  }

  NodePtr product() {
    NodePtr left = unary();
    for (;;) {
      if (consume('*'))
        left = make_binary('*', left, unary());
      else if (consume('/'))
        left = make_binary('/', left, unary());
      else
        return left;
    }
  }

  // '^' binds tighter than unary minus: -2^2 = -(2^2)
  NodePtr unary() {
    if (consume('-')) {
      auto n = std::make_shared<Expr::Node>();
      n->kind = Expr::Node::Kind::Unary;
      n->op = '-';
      n->a = unary();
      return n;
    }
    consume('+');
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (consume('^')) return make_binary('^', base, unary());  // right assoc
    return base;
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = sum();
      if (!consume(')')) fail("missing ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    size_t end = pos_;
    while (end < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[end])) || s_[end] == '.' ||
            s_[end] == 'e' || s_[end] == 'E' ||
            ((s_[end] == '+' || s_[end] == '-') && end > pos_ &&
             (s_[end - 1] == 'e' || s_[end - 1] == 'E'))))
      ++end;
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Node::Kind::Number;
    try {
      n->value = std::stod(s_.substr(pos_, end - pos_));
    } catch (const std::exception&) {
      fail("bad number literal");
    }
    pos_ = end;
    return n;
  }

  NodePtr ident() {
    size_t end = pos_;
    while (end < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_'))
      ++end;
    std::string name = s_.substr(pos_, end - pos_);
    pos_ = end;
    if (peek() == '(') {
      ++pos_;
      NodePtr arg = sum();
      if (!consume(')')) fail("missing ')' after function argument");
      auto n = std::make_shared<Expr::Node>();
      n->kind = Expr::Node::Kind::Call;
      n->name = name;
      n->a = arg;
      return n;
    }
    auto n = std::make_shared<Expr::Node>();
    if (name == "pi") {
      n->kind = Expr::Node::Kind::Number;
      n->value = M_PI;
    } else if (name == "e") {
      n->kind = Expr::Node::Kind::Number;
      n->value = M_E;
    } else {
      n->kind = Expr::Node::Kind::Var;
      n->name = name;
    }
    return n;
  }
};

double eval_node(const Expr::Node& n, const std::map<std::string, double>& vars) {
  using K = Expr::Node::Kind;
  switch (n.kind) {
    case K::Number:
      return n.value;
    case K::Var: {
      auto it = vars.find(n.name);
      if (it == vars.end())
        throw std::invalid_argument("expression references unknown variable '" + n.name + "'");
      return it->second;
    }
    case K::Unary:
      return -eval_node(*n.a, vars);
    case K::Binary: {
      double a = eval_node(*n.a, vars);
      double b = eval_node(*n.b, vars);
      switch (n.op) {
        case '+':
          return a + b;
        case '-':
          return a - b;
        case '*':
          return a * b;
        case '/':
          return a / b;
        case '^':
          return std::pow(a, b);
      }
      throw std::logic_error("bad operator");
    }
    case K::Call: {
      double a = eval_node(*n.a, vars);
      if (n.name == "sin") return std::sin(a);
      if (n.name == "cos") return std::cos(a);
      if (n.name == "tan") return std::tan(a);
      if (n.name == "exp") return std::exp(a);
      if (n.name == "log") return std::log(a);
      if (n.name == "sqrt") return std::sqrt(a);
      if (n.name == "abs") return std::abs(a);
      if (n.name == "tanh") return std::tanh(a);
      if (n.name == "sinh") return std::sinh(a);
      if (n.name == "cosh") return std::cosh(a);
      throw std::invalid_argument("unknown function '" + n.name + "'");
    }
  }
  throw std::logic_error("bad node");
}

}  // namespace

Expr Expr::parse(const std::string& text) {
  Expr e;
  e.root_ = Parser(text).parse();
  e.text_ = text;
  return e;
}

double Expr::eval(const std::map<std::string, double>& vars) const {
  if (!root_) throw std::logic_error("evaluating empty expression");
  return eval_node(*root_, vars);
}

}  // namespace ysl
