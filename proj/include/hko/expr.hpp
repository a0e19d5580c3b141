#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hko/errors.hpp"

namespace hko {

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

// Immutable arithmetic expression tree over variables x1..xn.
struct ExprNode {
    enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
    Kind kind{};
    double number = 0.0;      // Number
    int var = 0;              // Var, 0-based index
    std::string call;         // Call: sin cos exp log abs min max
    std::vector<ExprPtr> kids;
};

// Grammar (precedence climbing, '^' right-associative, '-' binds tighter
// than a '^' base):
//   expr   := term (("+" | "-") term)*
//   term   := factor (("*" | "/") factor)*
//   factor := unary ("^" factor)?
//   unary  := "-" unary | atom
//   atom   := NUMBER | IDENT | IDENT "(" expr ("," expr)* ")" | "(" expr ")"
// Variables are x1..x<dim>; anything else throws ParseError with the
// character offset of the offending token.
ExprPtr parse_expr(const std::string& text, int dim);

// Inverse of parse_expr up to evaluation: parse_expr(print_expr(e), dim)
// evaluates identically to e (numbers are printed with 17 significant
// digits, and floating-point association is preserved with parentheses).
std::string print_expr(const ExprPtr& e);

// Evaluate at x. Throws EvalError on math-domain violations (log of a
// nonpositive value, division by zero, 0^negative, ...) and whenever a
// subexpression produces a non-finite value.
double eval_expr(const ExprNode& e, std::span<const double> x);

} // namespace hko
