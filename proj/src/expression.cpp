#include "epcrit/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>

namespace epcrit {

namespace {

ExprPtr make_number(double v) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Number;
    e->number = v;
    return e;
}

ExprPtr make_var() {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Var;
    return e;
}

ExprPtr make_unary(Expr::Kind k, ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->a = std::move(a);
    return e;
}

ExprPtr make_binary(Expr::Kind k, ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->a = std::move(a);
    e->b = std::move(b);
    return e;
}

ExprPtr make_pow(ExprPtr a, int n) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Pow;
    e->a = std::move(a);
    e->exponent = n;
    return e;
}

ExprPtr make_call(Func f, ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Call;
    e->func = f;
    e->a = std::move(a);
    return e;
}

bool is_number(const ExprPtr& e, double v) {
    return e->kind == Expr::Kind::Number && e->number == v;
}

// Folding constructors used by the differentiator.
ExprPtr add(ExprPtr a, ExprPtr b) {
    if (is_number(a, 0)) return b;
    if (is_number(b, 0)) return a;
    if (a->kind == Expr::Kind::Number && b->kind == Expr::Kind::Number)
        return make_number(a->number + b->number);
    return make_binary(Expr::Kind::Add, std::move(a), std::move(b));
}

ExprPtr sub(ExprPtr a, ExprPtr b) {
    if (is_number(b, 0)) return a;
    if (a->kind == Expr::Kind::Number && b->kind == Expr::Kind::Number)
        return make_number(a->number - b->number);
    if (is_number(a, 0)) return make_unary(Expr::Kind::Neg, std::move(b));
    return make_binary(Expr::Kind::Sub, std::move(a), std::move(b));
}

ExprPtr mul(ExprPtr a, ExprPtr b) {
    if (is_number(a, 0) || is_number(b, 0)) return make_number(0);
    if (is_number(a, 1)) return b;
    if (is_number(b, 1)) return a;
    if (a->kind == Expr::Kind::Number && b->kind == Expr::Kind::Number)
        return make_number(a->number * b->number);
    return make_binary(Expr::Kind::Mul, std::move(a), std::move(b));
}

ExprPtr divide(ExprPtr a, ExprPtr b) {
    if (is_number(a, 0)) return make_number(0);
    if (is_number(b, 1)) return a;
    return make_binary(Expr::Kind::Div, std::move(a), std::move(b));
}

ExprPtr neg(ExprPtr a) {
    if (a->kind == Expr::Kind::Number) return make_number(-a->number);
    if (a->kind == Expr::Kind::Neg) return a->a;
    return make_unary(Expr::Kind::Neg, std::move(a));
}

ExprPtr pow_node(ExprPtr a, int n) {
    if (n == 0) return make_number(1);
    if (n == 1) return a;
    return make_pow(std::move(a), n);
}

const std::map<std::string, Func>& function_table() {
    static const std::map<std::string, Func> table = {
        {"sin", Func::Sin},   {"cos", Func::Cos},   {"exp", Func::Exp},
        {"ln", Func::Ln},     {"sqrt", Func::Sqrt}, {"atan", Func::Atan},
        {"tanh", Func::Tanh}, {"sinh", Func::Sinh}, {"cosh", Func::Cosh},
    };
    return table;
}

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    ExprPtr run() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("empty expression", pos_);
        ExprPtr e = expr();
        skip_ws();
        if (pos_ < s_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    const std::string& s_;
    size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    ExprPtr expr() {
        ExprPtr e = term();
        for (;;) {
            if (eat('+')) e = make_binary(Expr::Kind::Add, e, term());
            else if (eat('-')) e = make_binary(Expr::Kind::Sub, e, term());
            else return e;
        }
    }

    ExprPtr term() {
        ExprPtr e = factor();
        for (;;) {
            if (eat('*')) e = make_binary(Expr::Kind::Mul, e, factor());
            else if (eat('/')) e = make_binary(Expr::Kind::Div, e, factor());
            else return e;
        }
    }

    ExprPtr factor() {
        ExprPtr e = unary();
        if (eat('^')) {
            skip_ws();
            const size_t at = pos_;
            bool negative = false;
            if (pos_ < s_.size() && s_[pos_] == '-') { negative = true; ++pos_; }
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
            if (pos_ == start) throw ParseError("expected integer exponent", at);
            int n = std::atoi(s_.substr(start, pos_ - start).c_str());
            e = make_pow(e, negative ? -n : n);
        }
        return e;
    }

    ExprPtr unary() {
        if (eat('-')) return make_unary(Expr::Kind::Neg, base());
        return base();
    }

    ExprPtr base() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("expected operand", pos_);
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr e = expr();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit((unsigned char)c) || c == '.') return number();
        if (std::isalpha((unsigned char)c)) {
            const size_t start = pos_;
            while (pos_ < s_.size() && std::isalpha((unsigned char)s_[pos_])) ++pos_;
            const std::string name = s_.substr(start, pos_ - start);
            if (name == "x") return make_var();
            auto it = function_table().find(name);
            if (it == function_table().end())
                throw ParseError("unknown function '" + name + "'", start);
            if (!eat('(')) throw ParseError("expected '(' after '" + name + "'", pos_);
            ExprPtr arg = expr();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            return make_call(it->second, arg);
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    ExprPtr number() {
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) throw ParseError("malformed number", pos_);
        pos_ += (size_t)(end - begin);
        return make_number(v);
    }
};

double ipow(double base, int n, double x_for_msg) {
    if (n < 0) {
        if (base == 0.0)
            throw DomainError("zero raised to a negative power at x = " + std::to_string(x_for_msg));
        return 1.0 / ipow(base, -n, x_for_msg);
    }
    double r = 1.0;
    while (n > 0) {
        if (n & 1) r *= base;
        base *= base;
        n >>= 1;
    }
    return r;
}

}  // namespace

ExprPtr parse_expression(const std::string& text) { return Parser(text).run(); }

double eval_expr(const Expr& e, double x) {
    switch (e.kind) {
        case Expr::Kind::Number: return e.number;
        case Expr::Kind::Var: return x;
        case Expr::Kind::Neg: return -eval_expr(*e.a, x);
        case Expr::Kind::Add: return eval_expr(*e.a, x) + eval_expr(*e.b, x);
        case Expr::Kind::Sub: return eval_expr(*e.a, x) - eval_expr(*e.b, x);
        case Expr::Kind::Mul: return eval_expr(*e.a, x) * eval_expr(*e.b, x);
        case Expr::Kind::Div: {
            const double num = eval_expr(*e.a, x);
            const double den = eval_expr(*e.b, x);
            if (den == 0.0)
                throw DomainError("division by zero at x = " + std::to_string(x));
            return num / den;
        }
        case Expr::Kind::Pow: return ipow(eval_expr(*e.a, x), e.exponent, x);
        case Expr::Kind::Call: {
            const double u = eval_expr(*e.a, x);
            switch (e.func) {
                case Func::Sin: return std::sin(u);
                case Func::Cos: return std::cos(u);
                case Func::Exp: return std::exp(u);
                case Func::Ln:
                    if (u <= 0.0)
                        throw DomainError("ln of non-positive value at x = " + std::to_string(x));
                    return std::log(u);
                case Func::Sqrt:
                    if (u < 0.0)
                        throw DomainError("sqrt of negative value at x = " + std::to_string(x));
                    return std::sqrt(u);
                case Func::Atan: return std::atan(u);
                case Func::Tanh: return std::tanh(u);
                case Func::Sinh: return std::sinh(u);
                case Func::Cosh: return std::cosh(u);
            }
        }
    }
    throw DomainError("corrupt expression node");
}

ExprPtr differentiate(const ExprPtr& e) {
    switch (e->kind) {
        case Expr::Kind::Number: return make_number(0);
        case Expr::Kind::Var: return make_number(1);
        case Expr::Kind::Neg: return neg(differentiate(e->a));
        case Expr::Kind::Add: return add(differentiate(e->a), differentiate(e->b));
        case Expr::Kind::Sub: return sub(differentiate(e->a), differentiate(e->b));
        case Expr::Kind::Mul:
            return add(mul(differentiate(e->a), e->b), mul(e->a, differentiate(e->b)));
        case Expr::Kind::Div:
            // (u/v)' = u'/v - u v'/v^2
            return sub(divide(differentiate(e->a), e->b),
                       divide(mul(e->a, differentiate(e->b)), pow_node(e->b, 2)));
        case Expr::Kind::Pow:
            // (u^n)' = n u^(n-1) u'
            return mul(mul(make_number(e->exponent), pow_node(e->a, e->exponent - 1)),
                       differentiate(e->a));
        case Expr::Kind::Call: {
            const ExprPtr du = differentiate(e->a);
            switch (e->func) {
                case Func::Sin: return mul(make_call(Func::Cos, e->a), du);
                case Func::Cos: return neg(mul(make_call(Func::Sin, e->a), du));
                case Func::Exp: return mul(make_call(Func::Exp, e->a), du);
                case Func::Ln: return divide(du, e->a);
                case Func::Sqrt:
                    return divide(du, mul(make_number(2), make_call(Func::Sqrt, e->a)));
                case Func::Atan:
                    return divide(du, add(make_number(1), pow_node(e->a, 2)));
                case Func::Tanh:
                    return mul(sub(make_number(1), pow_node(make_call(Func::Tanh, e->a), 2)), du);
                case Func::Sinh: return mul(make_call(Func::Cosh, e->a), du);
                case Func::Cosh: return mul(make_call(Func::Sinh, e->a), du);
            }
        }
    }
    throw DomainError("corrupt expression node");
}

namespace {

const char* func_name(Func f) {
    switch (f) {
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Exp: return "exp";
        case Func::Ln: return "ln";
        case Func::Sqrt: return "sqrt";
        case Func::Atan: return "atan";
        case Func::Tanh: return "tanh";
        case Func::Sinh: return "sinh";
        case Func::Cosh: return "cosh";
    }
    return "?";
}

// Precedence levels used only for printing: additive 1, multiplicative 2,
// power/unary 3, atoms 4.
int precedence(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Add:
        case Expr::Kind::Sub: return 1;
        case Expr::Kind::Mul:
        case Expr::Kind::Div: return 2;
        case Expr::Kind::Neg:
        case Expr::Kind::Pow: return 3;
        default: return 4;
    }
}

void print(const ExprPtr& e, std::string& out);

void print_wrapped(const ExprPtr& e, std::string& out, int min_prec) {
    if (precedence(*e) < min_prec) {
        out += '(';
        print(e, out);
        out += ')';
    } else {
        print(e, out);
    }
}

void print(const ExprPtr& e, std::string& out) {
    switch (e->kind) {
        case Expr::Kind::Number: {
            char buf[40];
            if (e->number < 0) {
                // Negative literals do not exist in the grammar; print through
                // unary minus so the output re-parses.
                std::snprintf(buf, sizeof buf, "%.17g", -e->number);
                out += '-';
                out += buf;
            } else {
                std::snprintf(buf, sizeof buf, "%.17g", e->number);
                out += buf;
            }
            return;
        }
        case Expr::Kind::Var: out += 'x'; return;
        case Expr::Kind::Neg:
            out += '-';
            // The grammar binds unary minus to a base, so anything composite
            // needs parentheses to survive a round trip.
            print_wrapped(e->a, out, 4);
            return;
        case Expr::Kind::Add:
            print_wrapped(e->a, out, 1);
            out += " + ";
            print_wrapped(e->b, out, 2);
            return;
        case Expr::Kind::Sub:
            print_wrapped(e->a, out, 1);
            out += " - ";
            print_wrapped(e->b, out, 2);
            return;
        case Expr::Kind::Mul:
            print_wrapped(e->a, out, 2);
            out += "*";
            print_wrapped(e->b, out, 3);
            return;
        case Expr::Kind::Div:
            print_wrapped(e->a, out, 2);
            out += "/";
            print_wrapped(e->b, out, 3);
            return;
        case Expr::Kind::Pow: {
            // Power operands must be bases: atoms or parenthesized.
            if (e->a->kind == Expr::Kind::Var || e->a->kind == Expr::Kind::Call ||
                (e->a->kind == Expr::Kind::Number && e->a->number >= 0)) {
                print(e->a, out);
            } else {
                out += '(';
                print(e->a, out);
                out += ')';
            }
            out += '^';
            if (e->exponent < 0) out += '-';
            out += std::to_string(std::abs(e->exponent));
            return;
        }
        case Expr::Kind::Call:
            out += func_name(e->func);
            out += '(';
            print(e->a, out);
            out += ')';
            return;
    }
}

}  // namespace

std::string to_string(const ExprPtr& e) {
    std::string out;
    print(e, out);
    return out;
}

}  // namespace epcrit
