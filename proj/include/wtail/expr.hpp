#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>

#include "wtail/error.hpp"

namespace wtail {
namespace detail {

// Recursive-descent parser for one-variable arithmetic expressions:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := unary ('^' factor)?          (right-associative power)
//   unary  := '-' unary | primary
//   primary:= number | 'x' | fn '(' expr ')' | '(' expr ')'
// with fn in {log, exp, sqrt, abs}.  Used for user-defined score functions.
class ExprParser {
  public:
    explicit ExprParser(const std::string& src) : src_(src) {}

    std::function<double(double)> parse() {
        auto f = expr();
        skip_ws();
        if (pos_ != src_.size()) err("trailing characters");
        return f;
    }

  private:
    using Fn = std::function<double(double)>;

    [[noreturn]] void err(const std::string& what) {
        fail(errc::bad_spec, "expression error at position " + std::to_string(pos_) + ": " + what);
    }

    void skip_ws() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Fn expr() {
        Fn lhs = term();
        for (;;) {
            if (eat('+')) {
                Fn rhs = term();
                lhs = [lhs, rhs](double x) { return lhs(x) + rhs(x); };
            } else if (eat('-')) {
                Fn rhs = term();
                lhs = [lhs, rhs](double x) { return lhs(x) - rhs(x); };
            } else {
                return lhs;
            }
        }
    }

    Fn term() {
        Fn lhs = factor();
        for (;;) {
            if (eat('*')) {
                Fn rhs = factor();
                lhs = [lhs, rhs](double x) { return lhs(x) * rhs(x); };
            } else if (eat('/')) {
                Fn rhs = factor();
                lhs = [lhs, rhs](double x) { return lhs(x) / rhs(x); };
            } else {
                return lhs;
            }
        }
    }

    Fn factor() {
        Fn base = unary();
        if (eat('^')) {
            Fn exp = factor();
            return [base, exp](double x) { return std::pow(base(x), exp(x)); };
        }
        return base;
    }

    Fn unary() {
        if (eat('-')) {
            Fn f = unary();
            return [f](double x) { return -f(x); };
        }
        return primary();
    }

    Fn primary() {
        skip_ws();
        if (pos_ >= src_.size()) err("unexpected end of expression");
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Fn f = expr();
            if (!eat(')')) err("missing ')'");
            return f;
        }
        if ((c >= '0' && c <= '9') || c == '.') return number();
        if (is_ident_char(c)) {
            std::string name;
            while (pos_ < src_.size() && is_ident_char(src_[pos_])) name += src_[pos_++];
            if (name == "x") return [](double x) { return x; };
            if (!eat('(')) err("unknown symbol '" + name + "'");
            Fn arg = expr();
            if (!eat(')')) err("missing ')' after " + name);
            if (name == "log") return [arg](double x) { return std::log(arg(x)); };
            if (name == "exp") return [arg](double x) { return std::exp(arg(x)); };
            if (name == "sqrt") return [arg](double x) { return std::sqrt(arg(x)); };
            if (name == "abs") return [arg](double x) { return std::abs(arg(x)); };
            err("unknown function '" + name + "'");
        }
        err(std::string("unexpected character '") + c + "'");
    }

    Fn number() {
        std::size_t end = pos_;
        while (end < src_.size() &&
               ((src_[end] >= '0' && src_[end] <= '9') || src_[end] == '.' || src_[end] == 'e' ||
                src_[end] == 'E' ||
                ((src_[end] == '+' || src_[end] == '-') && end > pos_ &&
                 (src_[end - 1] == 'e' || src_[end - 1] == 'E'))))
            ++end;
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(src_.data() + pos_, src_.data() + end, v);
        if (ec != std::errc()) err("bad number");
        pos_ = static_cast<std::size_t>(ptr - src_.data());
        return [v](double) { return v; };
    }

    static bool is_ident_char(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
    }

    const std::string& src_;
    std::size_t pos_ = 0;
};

}  // namespace detail

// Compile a one-variable expression in "x" into a callable.
inline std::function<double(double)> parse_expression(const std::string& src) {
    detail::ExprParser p(src);
    return p.parse();
}

}  // namespace wtail
