#pragma once
// Single-variable expression language for initial-data profiles.
//
// Grammar:
//   expr   := term { ("+"|"-") term }
//   term   := factor { ("*"|"/") factor }
//   factor := unary [ "^" integer ]
//   unary  := [ "-" ] base
//   base   := number | "x" | ident "(" expr ")" | "(" expr ")"
//
// Functions: sin cos exp ln sqrt atan tanh sinh cosh. Exponents are integer
// literals. Note the grammar puts unary minus inside the power operand, so
// "-x^2" means (-x)^2; write "-(x^2)" for the other reading.
//
// Evaluation raises DomainError eagerly (ln of a non-positive value, sqrt of
// a negative, division by zero, 0 to a negative power) instead of returning
// NaN, so threshold code never consumes poisoned numbers.

#include <memory>
#include <stdexcept>
#include <string>

namespace epcrit {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, size_t offset)
        : std::runtime_error(what + " at offset " + std::to_string(offset)),
          offset(offset) {}
    size_t offset;
};

class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class Func { Sin, Cos, Exp, Ln, Sqrt, Atan, Tanh, Sinh, Cosh };

struct Expr {
    enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
    Kind kind;
    double number = 0.0;   // Kind::Number
    int exponent = 0;      // Kind::Pow
    Func func = Func::Sin; // Kind::Call
    ExprPtr a, b;          // operands (b unused for unary kinds)
};

// Parse the full input; trailing characters are a syntax error.
ExprPtr parse_expression(const std::string& text);

double eval_expr(const Expr& e, double x);

// Symbolic d/dx with light constant folding (enough to keep derivative trees
// printable; no general simplification).
ExprPtr differentiate(const ExprPtr& e);

// Minimal-parenthesis rendering; re-parsing the output yields an
// evaluation-identical expression.
std::string to_string(const ExprPtr& e);

}  // namespace epcrit
