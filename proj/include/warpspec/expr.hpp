#pragma once

// Scalar expression trees in one variable r: closed-form warping profiles,
// barriers and eigenfunction candidates, with exact structural first and
// second derivatives.
//
// Grammar accepted by parse_expr / emitted by Expr::str():
//   floating literals, r, + - * / ^, exp, log, sin, cos, sinh, cosh, sqrt,
//   parentheses.  log is the natural logarithm.  Printed literals use the
//   shortest round-trip decimal form, so str() -> parse_expr -> str() is the
//   identity.
//
// Multiplication evaluates to 0 whenever one factor is exactly 0, without
// touching the other factor.  Glued profiles contain exp(-1/x)-style steps
// whose derivative subterms produce 0 * inf exactly at a gluing endpoint;
// the limit there is 0, and this rule makes endpoint evaluation return it.

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace warpspec {

namespace detail {

// Shortest decimal string that parses back to exactly the same double.
inline std::string fmt_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
    double v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument("bad floating literal: '" + std::string(s) + "'");
    return v;
}

} // namespace detail

class Expr {
public:
    enum class Kind : std::uint8_t {
        Constant, Var, Add, Sub, Mul, Div, Pow,
        Exp, Log, Sin, Cos, Sinh, Cosh, Sqrt
    };

    Expr() : Expr(constant(0.0)) {}

    static Expr constant(double v) { return Expr(std::make_shared<Node>(Node{Kind::Constant, v, nullptr, nullptr})); }
    static Expr var() { return Expr(std::make_shared<Node>(Node{Kind::Var, 0.0, nullptr, nullptr})); }

    bool is_constant() const { return node_->kind == Kind::Constant; }
    bool is_constant(double v) const { return is_constant() && node_->value == v; }
    double constant_value() const { return node_->value; }
    Kind kind() const { return node_->kind; }

    double operator()(double r) const { return eval(node_.get(), r); }

    Expr derivative() const { return diff(*this); }
    Expr second_derivative() const { return diff(diff(*this)); }

    std::string str() const {
        std::string out;
        print(node_.get(), 0, out);
        return out;
    }

    friend Expr operator+(const Expr& a, const Expr& b) {
        if (a.is_constant() && b.is_constant()) return constant(a.constant_value() + b.constant_value());
        if (a.is_constant(0.0)) return b;
        if (b.is_constant(0.0)) return a;
        return Expr::binary(Kind::Add, a, b);
    }
    friend Expr operator-(const Expr& a, const Expr& b) {
        if (a.is_constant() && b.is_constant()) return constant(a.constant_value() - b.constant_value());
        if (b.is_constant(0.0)) return a;
        return Expr::binary(Kind::Sub, a, b);
    }
    friend Expr operator*(const Expr& a, const Expr& b) {
        if (a.is_constant() && b.is_constant()) return constant(a.constant_value() * b.constant_value());
        if (a.is_constant(0.0) || b.is_constant(0.0)) return constant(0.0);
        if (a.is_constant(1.0)) return b;
        if (b.is_constant(1.0)) return a;
        return Expr::binary(Kind::Mul, a, b);
    }
    friend Expr operator/(const Expr& a, const Expr& b) {
        if (a.is_constant() && b.is_constant() && b.constant_value() != 0.0)
            return constant(a.constant_value() / b.constant_value());
        if (a.is_constant(0.0)) return constant(0.0);
        if (b.is_constant(1.0)) return a;
        return Expr::binary(Kind::Div, a, b);
    }
    friend Expr operator+(double a, const Expr& b) { return constant(a) + b; }
    friend Expr operator+(const Expr& a, double b) { return a + constant(b); }
    friend Expr operator-(double a, const Expr& b) { return constant(a) - b; }
    friend Expr operator-(const Expr& a, double b) { return a - constant(b); }
    friend Expr operator*(double a, const Expr& b) { return constant(a) * b; }
    friend Expr operator*(const Expr& a, double b) { return a * constant(b); }
    friend Expr operator/(double a, const Expr& b) { return constant(a) / b; }
    friend Expr operator/(const Expr& a, double b) { return a / constant(b); }
    friend Expr operator-(const Expr& a) { return constant(0.0) - a; }

    friend Expr pow(const Expr& a, const Expr& b) {
        if (b.is_constant(1.0)) return a;
        if (b.is_constant(0.0)) return constant(1.0);
        if (a.is_constant() && b.is_constant())
            return constant(std::pow(a.constant_value(), b.constant_value()));
        return Expr::binary(Kind::Pow, a, b);
    }
    friend Expr pow(const Expr& a, double b) { return pow(a, constant(b)); }
    friend Expr exp(const Expr& a) { return unary_fold(Kind::Exp, a); }
    friend Expr log(const Expr& a) { return unary_fold(Kind::Log, a); }
    friend Expr sin(const Expr& a) { return unary_fold(Kind::Sin, a); }
    friend Expr cos(const Expr& a) { return unary_fold(Kind::Cos, a); }
    friend Expr sinh(const Expr& a) { return unary_fold(Kind::Sinh, a); }
    friend Expr cosh(const Expr& a) { return unary_fold(Kind::Cosh, a); }
    friend Expr sqrt(const Expr& a) { return unary_fold(Kind::Sqrt, a); }

private:
    struct Node {
        Kind kind;
        double value;
        std::shared_ptr<const Node> a, b;
    };

    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static Expr binary(Kind k, const Expr& a, const Expr& b) {
        return Expr(std::make_shared<Node>(Node{k, 0.0, a.node_, b.node_}));
    }
    static Expr unary(Kind k, const Expr& a) {
        return Expr(std::make_shared<Node>(Node{k, 0.0, a.node_, nullptr}));
    }
    static Expr unary_fold(Kind k, const Expr& a) {
        if (a.is_constant()) return constant(eval_unary(k, a.constant_value()));
        return unary(k, a);
    }

    static double eval_unary(Kind k, double x) {
        switch (k) {
            case Kind::Exp: return std::exp(x);
            case Kind::Log: return std::log(x);
            case Kind::Sin: return std::sin(x);
            case Kind::Cos: return std::cos(x);
            case Kind::Sinh: return std::sinh(x);
            case Kind::Cosh: return std::cosh(x);
            case Kind::Sqrt: return std::sqrt(x);
            default: throw std::logic_error("not a unary kind");
        }
    }

    static double eval(const Node* n, double r) {
        switch (n->kind) {
            case Kind::Constant: return n->value;
            case Kind::Var: return r;
            case Kind::Add: return eval(n->a.get(), r) + eval(n->b.get(), r);
            case Kind::Sub: return eval(n->a.get(), r) - eval(n->b.get(), r);
            case Kind::Mul: {
                double va = eval(n->a.get(), r);
                if (va == 0.0) return 0.0;
                double vb = eval(n->b.get(), r);
                if (vb == 0.0) return 0.0;
                return va * vb;
            }
            case Kind::Div: return eval(n->a.get(), r) / eval(n->b.get(), r);
            case Kind::Pow: return std::pow(eval(n->a.get(), r), eval(n->b.get(), r));
            default: return eval_unary(n->kind, eval(n->a.get(), r));
        }
    }

    static Expr wrap(const std::shared_ptr<const Node>& n) { return Expr(n); }

    static Expr diff(const Expr& e) {
        const Node* n = e.node_.get();
        switch (n->kind) {
            case Kind::Constant: return constant(0.0);
            case Kind::Var: return constant(1.0);
            case Kind::Add: return diff(wrap(n->a)) + diff(wrap(n->b));
            case Kind::Sub: return diff(wrap(n->a)) - diff(wrap(n->b));
            case Kind::Mul: {
                Expr a = wrap(n->a), b = wrap(n->b);
                return diff(a) * b + a * diff(b);
            }
            case Kind::Div: {
                Expr a = wrap(n->a), b = wrap(n->b);
                return (diff(a) * b - a * diff(b)) / pow(b, 2.0);
            }
            case Kind::Pow: {
                Expr u = wrap(n->a), v = wrap(n->b);
                if (v.is_constant()) {
                    double c = v.constant_value();
                    return constant(c) * pow(u, c - 1.0) * diff(u);
                }
                return pow(u, v) * (diff(v) * log(u) + v * diff(u) / u);
            }
            case Kind::Exp: { Expr u = wrap(n->a); return exp(u) * diff(u); }
            case Kind::Log: { Expr u = wrap(n->a); return diff(u) / u; }
            case Kind::Sin: { Expr u = wrap(n->a); return cos(u) * diff(u); }
            case Kind::Cos: { Expr u = wrap(n->a); return constant(-1.0) * sin(u) * diff(u); }
            case Kind::Sinh: { Expr u = wrap(n->a); return cosh(u) * diff(u); }
            case Kind::Cosh: { Expr u = wrap(n->a); return sinh(u) * diff(u); }
            case Kind::Sqrt: { Expr u = wrap(n->a); return diff(u) / (constant(2.0) * sqrt(u)); }
        }
        throw std::logic_error("unreachable");
    }

    // Precedence: Add/Sub 1, Mul/Div 2, Pow 3, atoms 4.  Parenthesization is
    // conservative enough that reparsing reproduces the exact tree shape.
    static int precedence(Kind k) {
        switch (k) {
            case Kind::Add: case Kind::Sub: return 1;
            case Kind::Mul: case Kind::Div: return 2;
            case Kind::Pow: return 3;
            default: return 4;
        }
    }

    static void print(const Node* n, int parent_prec, std::string& out) {
        int prec = precedence(n->kind);
        switch (n->kind) {
            case Kind::Constant: {
                bool neg = std::signbit(n->value);
                if (neg && parent_prec > 0) out += '(';
                out += detail::fmt_double(n->value);
                if (neg && parent_prec > 0) out += ')';
                return;
            }
            case Kind::Var: out += 'r'; return;
            case Kind::Add: case Kind::Sub: case Kind::Mul: case Kind::Div: case Kind::Pow: {
                const char* op = n->kind == Kind::Add ? " + "
                               : n->kind == Kind::Sub ? " - "
                               : n->kind == Kind::Mul ? "*"
                               : n->kind == Kind::Div ? "/" : "^";
                bool need = prec < parent_prec;
                if (need) out += '(';
                print(n->a.get(), n->kind == Kind::Pow ? prec + 1 : prec, out);
                out += op;
                print(n->b.get(), n->kind == Kind::Pow ? prec : prec + 1, out);
                if (need) out += ')';
                return;
            }
            case Kind::Exp: out += "exp("; break;
            case Kind::Log: out += "log("; break;
            case Kind::Sin: out += "sin("; break;
            case Kind::Cos: out += "cos("; break;
            case Kind::Sinh: out += "sinh("; break;
            case Kind::Cosh: out += "cosh("; break;
            case Kind::Sqrt: out += "sqrt("; break;
        }
        print(n->a.get(), 0, out);
        out += ')';
    }

    std::shared_ptr<const Node> node_;
};

namespace detail {

class ExprParser {
public:
    explicit ExprParser(std::string_view s) : s_(s) {}

    Expr parse() {
        Expr e = parse_sum();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing input");
        return e;
    }

private:
    Expr parse_sum() {
        Expr e = parse_term();
        for (;;) {
            skip_ws();
            if (peek() == '+') { ++pos_; e = e + parse_term(); }
            else if (peek() == '-') { ++pos_; e = e - parse_term(); }
            else return e;
        }
    }
    Expr parse_term() {
        Expr e = parse_factor();
        for (;;) {
            skip_ws();
            if (peek() == '*') { ++pos_; e = e * parse_factor(); }
            else if (peek() == '/') { ++pos_; e = e / parse_factor(); }
            else return e;
        }
    }
    Expr parse_factor() {
        Expr base = parse_unary();
        skip_ws();
        if (peek() == '^') {
            ++pos_;
            return pow(base, parse_factor());
        }
        return base;
    }
    Expr parse_unary() {
        skip_ws();
        if (peek() == '-') {
            ++pos_;
            Expr inner = parse_unary();
            if (inner.is_constant()) return Expr::constant(-inner.constant_value());
            return Expr::constant(0.0) - inner;
        }
        if (peek() == '+') { ++pos_; return parse_unary(); }
        return parse_primary();
    }
    Expr parse_primary() {
        skip_ws();
        char c = peek();
        if (c == '(') {
            ++pos_;
            Expr e = parse_sum();
            skip_ws();
            if (peek() != ')') fail("expected ')'");
            ++pos_;
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
        fail("unexpected character");
        return Expr();
    }
    Expr parse_number() {
        size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
                s_[pos_] == 'e' || s_[pos_] == 'E' ||
                ((s_[pos_] == '+' || s_[pos_] == '-') && pos_ > start &&
                 (s_[pos_ - 1] == 'e' || s_[pos_ - 1] == 'E'))))
            ++pos_;
        return Expr::constant(parse_double(s_.substr(start, pos_ - start)));
    }
    Expr parse_ident() {
        size_t start = pos_;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        std::string_view id = s_.substr(start, pos_ - start);
        if (id == "r") return Expr::var();
        skip_ws();
        if (peek() != '(') fail("expected '(' after function name");
        ++pos_;
        Expr arg = parse_sum();
        skip_ws();
        if (peek() != ')') fail("expected ')'");
        ++pos_;
        if (id == "exp") return exp(arg);
        if (id == "log") return log(arg);
        if (id == "sin") return sin(arg);
        if (id == "cos") return cos(arg);
        if (id == "sinh") return sinh(arg);
        if (id == "cosh") return cosh(arg);
        if (id == "sqrt") return sqrt(arg);
        fail("unknown function '" + std::string(id) + "'");
        return Expr();
    }

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    void skip_ws() { while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_; }
    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument("expression parse error at offset " + std::to_string(pos_) +
                                    ": " + msg + " in '" + std::string(s_) + "'");
    }

    std::string_view s_;
    size_t pos_ = 0;
};

} // namespace detail

inline Expr parse_expr(std::string_view s) { return detail::ExprParser(s).parse(); }

} // namespace warpspec
