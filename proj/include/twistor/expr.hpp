#pragma once

#include <memory>
#include <string>
#include <vector>

#include "twistor/jet.hpp"

namespace twistor {

// Exact rational while it fits in 64 bits, a double afterwards.
class Number {
public:
    Number(long long n = 0, long long d = 1);
    static Number real(double v);
    // decimal literal such as "12", "0.25" or "1e-3", exact when it fits
    static Number parse(const std::string& s);

    bool exact() const { return exact_; }
    long long num() const { return n_; }
    long long den() const { return d_; }
    double value() const;
    bool is_zero() const;
    bool is_one() const;
    bool is_integer() const;
    bool negative() const { return value() < 0.0; }
    Number pow(long long e) const;
    std::string str() const;

    friend Number operator+(const Number& a, const Number& b);
    friend Number operator-(const Number& a, const Number& b);
    friend Number operator*(const Number& a, const Number& b);
    friend Number operator/(const Number& a, const Number& b);
    Number operator-() const;
    bool operator==(const Number& o) const;

private:
    bool exact_ = true;
    long long n_ = 0, d_ = 1;
    double v_ = 0.0;
};

// Immutable expression tree over indexed variables.
class Expr {
public:
    enum class Kind { Number, Var, Add, Mul, Pow, Exp, Log };

    Expr();  // zero
    Expr(Number c);
    Expr(long long c) : Expr(Number(c)) {}
    static Expr var(int index);
    static Expr add(std::vector<Expr> terms);
    static Expr mul(std::vector<Expr> factors);
    static Expr pow(const Expr& base, const Number& exponent);
    // numeric exponents give a power node, others exp(e log b)
    static Expr pow(const Expr& base, const Expr& exponent);
    static Expr exp(const Expr& a);
    static Expr log(const Expr& a);

    Kind kind() const;
    const Number& number() const;    // Number nodes, and the exponent of Pow nodes
    int var_index() const;           // Var nodes
    const std::vector<Expr>& args() const;

    bool is_number() const { return kind() == Kind::Number; }
    bool is_zero() const { return is_number() && number().is_zero(); }
    int max_var() const;  // -1 when constant

    // printed with the given variable names; v0, v1, ... when names run out
    std::string str(const std::vector<std::string>& names = {}) const;

    cd eval(const std::vector<cd>& vars) const;
    Jet eval(const std::vector<Jet>& vars) const;
    // unsimplified partial derivative
    Expr diff(int var) const;

    // Distance of the point from the nearest singularity: zeros of denominators
    // and logarithm arguments, and the branch cut of fractional powers.
    double singular_distance(const std::vector<cd>& vars) const;

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
    std::shared_ptr<const Node> n_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

// Canonical sum-of-monomials form: like terms collected, powers of equal bases
// merged, products and small positive integer powers of sums expanded.
// A result of zero is a proof that the expression vanishes identically.
Expr simplify(const Expr& e);

// Infix grammar: numbers, names, + - * / ^, parentheses, and the functions
// pow(a, b), exp(a), log(a), sqrt(a). names[i] denotes variable i.
Expr parse_expr(const std::string& text, const std::vector<std::string>& names);

}  // namespace twistor
