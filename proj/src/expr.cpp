#include "twistor/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>

#include "twistor/error.hpp"

namespace twistor {

// ---------------------------------------------------------------- Number

namespace {

bool mul_ok(long long a, long long b, long long& r) { return !__builtin_mul_overflow(a, b, &r); }
bool add_ok(long long a, long long b, long long& r) { return !__builtin_add_overflow(a, b, &r); }

}  // namespace

Number::Number(long long n, long long d) {
    if (d == 0) throw Error("division by zero");
    if (d < 0) {
        if (n == std::numeric_limits<long long>::min() || d == std::numeric_limits<long long>::min()) {
            *this = real(static_cast<double>(n) / static_cast<double>(d));
            return;
        }
        n = -n;
        d = -d;
    }
    long long g = std::gcd(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    n_ = n;
    d_ = d;
    v_ = static_cast<double>(n) / static_cast<double>(d);
}

Number Number::real(double v) {
    Number r;
    r.exact_ = false;
    r.v_ = v;
    return r;
}

Number Number::parse(const std::string& s) {
    // digits [. digits] [e [+-] digits]
    size_t i = 0;
    long long mant = 0;
    int scale = 0;
    bool fits = true, any = false;
    auto digit = [&](char c, bool frac) {
        any = true;
        long long t;
        if (fits && mul_ok(mant, 10, t) && add_ok(t, c - '0', t)) {
            mant = t;
            if (frac) --scale;
        } else {
            fits = false;
        }
    };
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digit(s[i++], false);
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digit(s[i++], true);
    }
    if (!any) throw Error("malformed number '" + s + "'");
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        int sign = 1;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) sign = s[i++] == '-' ? -1 : 1;
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) throw Error("malformed number '" + s + "'");
        int e = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            e = std::min(e * 10 + (s[i++] - '0'), 10000);
        }
        scale += sign * e;
    }
    if (i != s.size()) throw Error("malformed number '" + s + "'");
    if (!fits) return real(std::stod(s));
    long long p = 1;
    for (int k = 0; k < std::abs(scale); ++k)
        if (!mul_ok(p, 10, p)) return real(std::stod(s));
    return scale >= 0 ? (mul_ok(mant, p, mant) ? Number(mant) : real(std::stod(s))) : Number(mant, p);
}

double Number::value() const { return v_; }
bool Number::is_zero() const { return exact_ ? n_ == 0 : v_ == 0.0; }
bool Number::is_one() const { return exact_ ? (n_ == 1 && d_ == 1) : v_ == 1.0; }
bool Number::is_integer() const { return exact_ ? d_ == 1 : std::floor(v_) == v_ && std::abs(v_) < 1e15; }

Number Number::operator-() const {
    if (exact_ && n_ != std::numeric_limits<long long>::min()) return Number(-n_, d_);
    return real(-v_);
}

Number operator+(const Number& a, const Number& b) {
    if (a.exact_ && b.exact_) {
        long long x, y, n, d;
        if (mul_ok(a.n_, b.d_, x) && mul_ok(b.n_, a.d_, y) && add_ok(x, y, n) && mul_ok(a.d_, b.d_, d)) return Number(n, d);
    }
    return Number::real(a.v_ + b.v_);
}

Number operator-(const Number& a, const Number& b) { return a + (-b); }

Number operator*(const Number& a, const Number& b) {
    if (a.exact_ && b.exact_) {
        long long n, d;
        if (mul_ok(a.n_, b.n_, n) && mul_ok(a.d_, b.d_, d)) return Number(n, d);
    }
    return Number::real(a.v_ * b.v_);
}

Number operator/(const Number& a, const Number& b) {
    if (b.is_zero()) throw Error("division by zero");
    if (a.exact_ && b.exact_) {
        long long n, d;
        if (mul_ok(a.n_, b.d_, n) && mul_ok(a.d_, b.n_, d)) return Number(n, d);
    }
    return Number::real(a.v_ / b.v_);
}

bool Number::operator==(const Number& o) const {
    if (exact_ && o.exact_) return n_ == o.n_ && d_ == o.d_;
    return v_ == o.v_;
}

Number Number::pow(long long e) const {
    if (e < 0) return Number(1) / pow(-e);
    Number r(1), b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

std::string Number::str() const {
    if (exact_) return d_ == 1 ? std::to_string(n_) : std::to_string(n_) + "/" + std::to_string(d_);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v_);
    return buf;
}

// ---------------------------------------------------------------- Expr

struct Expr::Node {
    Kind kind;
    Number num;
    int var = -1;
    std::vector<Expr> args;
};

Expr::Expr() : Expr(Number(0)) {}

Expr::Expr(Number c) : n_(std::make_shared<const Node>(Node{Kind::Number, c, -1, {}})) {}

Expr Expr::var(int index) {
    if (index < 0) throw Error("variable index must be non-negative");
    return Expr(std::make_shared<const Node>(Node{Kind::Var, Number(0), index, {}}));
}

Expr Expr::add(std::vector<Expr> terms) {
    if (terms.empty()) return Expr();
    if (terms.size() == 1) return terms[0];
    return Expr(std::make_shared<const Node>(Node{Kind::Add, Number(0), -1, std::move(terms)}));
}

Expr Expr::mul(std::vector<Expr> factors) {
    if (factors.empty()) return Expr(Number(1));
    if (factors.size() == 1) return factors[0];
    return Expr(std::make_shared<const Node>(Node{Kind::Mul, Number(0), -1, std::move(factors)}));
}

Expr Expr::pow(const Expr& base, const Number& exponent) {
    return Expr(std::make_shared<const Node>(Node{Kind::Pow, exponent, -1, {base}}));
}

Expr Expr::pow(const Expr& base, const Expr& exponent) {
    Expr e = simplify(exponent);
    if (e.is_number()) return pow(base, e.number());
    return exp(exponent * log(base));
}

Expr Expr::exp(const Expr& a) { return Expr(std::make_shared<const Node>(Node{Kind::Exp, Number(0), -1, {a}})); }
Expr Expr::log(const Expr& a) { return Expr(std::make_shared<const Node>(Node{Kind::Log, Number(0), -1, {a}})); }

Expr::Kind Expr::kind() const { return n_->kind; }
const Number& Expr::number() const { return n_->num; }
int Expr::var_index() const { return n_->var; }
const std::vector<Expr>& Expr::args() const { return n_->args; }

int Expr::max_var() const {
    int m = kind() == Kind::Var ? var_index() : -1;
    for (const auto& a : args()) m = std::max(m, a.max_var());
    return m;
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::add({a, b}); }
Expr operator-(const Expr& a) { return Expr::mul({Expr(Number(-1)), a}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::add({a, -b}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::mul({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::mul({a, Expr::pow(b, Number(-1))}); }

namespace {

// precedence: 0 sum, 1 product, 2 power, 3 atom
int precedence(const Expr& e) {
    switch (e.kind()) {
        case Expr::Kind::Add: return 0;
        case Expr::Kind::Mul: return 1;
        case Expr::Kind::Pow: return 2;
        case Expr::Kind::Number:
            return e.number().negative() || (e.number().exact() && e.number().den() != 1) ? 1 : 3;
        default: return 3;
    }
}

std::string wrap(const Expr& e, int min_prec, const std::vector<std::string>& names) {
    std::string s = e.str(names);
    return precedence(e) < min_prec ? "(" + s + ")" : s;
}

}  // namespace

std::string Expr::str(const std::vector<std::string>& names) const {
    switch (kind()) {
        case Kind::Number: return number().str();
        case Kind::Var:
            return var_index() < static_cast<int>(names.size()) ? names[var_index()] : "v" + std::to_string(var_index());
        case Kind::Add: {
            std::string s;
            for (size_t i = 0; i < args().size(); ++i) s += (i ? " + " : "") + wrap(args()[i], 1, names);
            return s;
        }
        case Kind::Mul: {
            std::string s;
            for (size_t i = 0; i < args().size(); ++i) s += (i ? "*" : "") + wrap(args()[i], 2, names);
            return s;
        }
        case Kind::Pow: return wrap(args()[0], 3, names) + "^" + wrap(Expr(number()), 3, names);
        case Kind::Exp: return "exp(" + args()[0].str(names) + ")";
        case Kind::Log: return "log(" + args()[0].str(names) + ")";
    }
    return "";
}

namespace {

cd ipow(cd b, long long e) {
    if (e < 0) return 1.0 / ipow(b, -e);
    cd r = 1.0;
    while (e > 0) {
        if (e & 1) r *= b;
        e >>= 1;
        if (e) b *= b;
    }
    return r;
}

cd lift(const cd&, cd c) { return c; }
Jet lift(const Jet& like, cd c) { return Jet(like.vars(), like.order(), c); }
cd power(const cd& b, const Number& q) {
    return q.is_integer() ? ipow(b, static_cast<long long>(q.value())) : std::pow(b, q.value());
}
Jet power(const Jet& b, const Number& q) {
    return q.is_integer() ? pow(b, static_cast<int>(q.value())) : pow(b, q.value());
}
cd expf(const cd& a) { return std::exp(a); }
Jet expf(const Jet& a) { return exp(a); }
cd logf(const cd& a) { return std::log(a); }
Jet logf(const Jet& a) { return log(a); }

template <class T>
T eval_t(const Expr& e, const std::vector<T>& v) {
    switch (e.kind()) {
        case Expr::Kind::Number: return lift(v.at(0), e.number().value());
        case Expr::Kind::Var:
            if (e.var_index() >= static_cast<int>(v.size())) throw Error("expression uses an unbound variable");
            return v[e.var_index()];
        case Expr::Kind::Add: {
            T r = eval_t(e.args()[0], v);
            for (size_t i = 1; i < e.args().size(); ++i) r = r + eval_t(e.args()[i], v);
            return r;
        }
        case Expr::Kind::Mul: {
            T r = eval_t(e.args()[0], v);
            for (size_t i = 1; i < e.args().size(); ++i) r = r * eval_t(e.args()[i], v);
            return r;
        }
        case Expr::Kind::Pow: return power(eval_t(e.args()[0], v), e.number());
        case Expr::Kind::Exp: return expf(eval_t(e.args()[0], v));
        case Expr::Kind::Log: return logf(eval_t(e.args()[0], v));
    }
    throw Error("bad expression node");
}

}  // namespace

cd Expr::eval(const std::vector<cd>& vars) const {
    if (vars.empty()) {
        std::vector<cd> one{0.0};
        if (max_var() >= 0) throw Error("expression uses an unbound variable");
        return eval_t<cd>(*this, one);
    }
    return eval_t<cd>(*this, vars);
}

Jet Expr::eval(const std::vector<Jet>& vars) const {
    if (vars.empty()) throw Error("jet evaluation needs at least one variable");
    return eval_t<Jet>(*this, vars);
}

Expr Expr::diff(int v) const {
    switch (kind()) {
        case Kind::Number: return Expr();
        case Kind::Var: return Expr(Number(var_index() == v ? 1 : 0));
        case Kind::Add: {
            std::vector<Expr> t;
            for (const auto& a : args()) t.push_back(a.diff(v));
            return add(t);
        }
        case Kind::Mul: {
            std::vector<Expr> t;
            for (size_t i = 0; i < args().size(); ++i) {
                std::vector<Expr> f = args();
                f[i] = f[i].diff(v);
                t.push_back(mul(f));
            }
            return add(t);
        }
        case Kind::Pow:
            return mul({Expr(number()), pow(args()[0], number() - Number(1)), args()[0].diff(v)});
        case Kind::Exp: return mul({*this, args()[0].diff(v)});
        case Kind::Log: return mul({args()[0].diff(v), pow(args()[0], Number(-1))});
    }
    throw Error("bad expression node");
}

double Expr::singular_distance(const std::vector<cd>& vars) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& a : args()) d = std::min(d, a.singular_distance(vars));
    const bool frac = kind() == Kind::Pow && !number().is_integer();
    const bool pole = kind() == Kind::Pow && number().negative();
    if (frac || pole || kind() == Kind::Log) {
        cd b = args()[0].eval(vars);
        d = std::min(d, std::abs(b));
        if ((frac || kind() == Kind::Log) && b.real() < 0.0) d = std::min(d, std::abs(b.imag()));
    }
    return d;
}

// ---------------------------------------------------------------- simplify

namespace {

struct Factor {
    Expr base;
    Number exp;
};
using Mono = std::map<std::string, Factor>;
struct Term {
    Number coef;
    Mono mono;
};
using SumForm = std::map<std::string, Term>;

constexpr int kMaxExpand = 8;

std::string mono_key(const Mono& m) {
    std::string k;
    for (const auto& [key, f] : m) k += key + "^" + f.exp.str() + ";";
    return k;
}

void add_term(SumForm& s, const Term& t) {
    if (t.coef.is_zero()) return;
    const std::string k = mono_key(t.mono);
    auto it = s.find(k);
    if (it == s.end()) {
        s.emplace(k, t);
        return;
    }
    it->second.coef = it->second.coef + t.coef;
    if (it->second.coef.is_zero()) s.erase(it);
}

SumForm sf_add(SumForm a, const SumForm& b) {
    for (const auto& [k, t] : b) add_term(a, t);
    return a;
}

SumForm one() { return {{"", Term{Number(1), {}}}}; }

SumForm to_sumform(const Expr& e);
SumForm sf_mul(const SumForm& a, const SumForm& b);
Expr from_sumform(const SumForm& s);

SumForm sf_pow_int(const SumForm& s, long long q) {
    SumForm r = one();
    for (long long i = 0; i < q; ++i) r = sf_mul(r, s);
    return r;
}

// a term whose factors may include sums raised to small positive integer powers
SumForm term_form(const Number& coef, const Mono& mono) {
    if (coef.is_zero()) return {};
    Mono rest;
    std::vector<SumForm> expand;
    for (const auto& [k, f] : mono) {
        if (f.base.kind() == Expr::Kind::Add && f.exp.is_integer() && !f.exp.negative() && f.exp.value() <= kMaxExpand)
            expand.push_back(sf_pow_int(to_sumform(f.base), static_cast<long long>(f.exp.value())));
        else
            rest.emplace(k, f);
    }
    SumForm out{{mono_key(rest), Term{coef, rest}}};
    for (const auto& s : expand) out = sf_mul(out, s);
    return out;
}

SumForm sf_mul(const SumForm& a, const SumForm& b) {
    SumForm r;
    for (const auto& [ka, ta] : a)
        for (const auto& [kb, tb] : b) {
            Mono m = ta.mono;
            bool needs_expand = false;
            for (const auto& [k, f] : tb.mono) {
                auto it = m.find(k);
                if (it == m.end()) {
                    m.emplace(k, f);
                    continue;
                }
                it->second.exp = it->second.exp + f.exp;
                if (it->second.exp.is_zero()) m.erase(it);
                else if (it->second.base.kind() == Expr::Kind::Add) needs_expand = true;
            }
            Number c = ta.coef * tb.coef;
            if (needs_expand) r = sf_add(r, term_form(c, m));
            else add_term(r, Term{c, m});
        }
    return r;
}

SumForm atom(const Expr& base, const Number& exp) {
    Mono m;
    m.emplace(base.str(), Factor{base, exp});
    return {{mono_key(m), Term{Number(1), m}}};
}

SumForm to_sumform(const Expr& e) {
    switch (e.kind()) {
        case Expr::Kind::Number:
            if (e.number().is_zero()) return {};
            return {{"", Term{e.number(), {}}}};
        case Expr::Kind::Var: return atom(e, Number(1));
        case Expr::Kind::Add: {
            SumForm s;
            for (const auto& a : e.args()) s = sf_add(s, to_sumform(a));
            return s;
        }
        case Expr::Kind::Mul: {
            SumForm s = one();
            for (const auto& a : e.args()) {
                s = sf_mul(s, to_sumform(a));
                if (s.empty()) break;
            }
            return s;
        }
        case Expr::Kind::Pow: {
            const Number& q = e.number();
            if (q.is_zero()) return one();
            SumForm s = to_sumform(e.args()[0]);
            if (s.empty()) {
                if (q.negative()) throw Error("division by zero");
                return {};
            }
            if (s.size() == 1) {
                const Term& t = s.begin()->second;
                if (q.is_integer()) {
                    const long long qi = static_cast<long long>(q.value());
                    Mono m;
                    for (const auto& [k, f] : t.mono) {
                        Number ex = f.exp * q;
                        if (!ex.is_zero()) m.emplace(k, Factor{f.base, ex});
                    }
                    return term_form(t.coef.pow(qi), m);
                }
                if (t.mono.empty() && t.coef.is_one()) return one();
                if (t.coef.is_one() && t.mono.size() == 1 && t.mono.begin()->second.exp.is_one())
                    return atom(t.mono.begin()->second.base, q);
                return atom(from_sumform(s), q);
            }
            if (q.is_integer() && !q.negative() && q.value() <= kMaxExpand)
                return sf_pow_int(s, static_cast<long long>(q.value()));
            return atom(from_sumform(s), q);
        }
        case Expr::Kind::Exp: {
            SumForm a = to_sumform(e.args()[0]);
            if (a.empty()) return one();
            return atom(Expr::exp(from_sumform(a)), Number(1));
        }
        case Expr::Kind::Log: {
            SumForm a = to_sumform(e.args()[0]);
            if (a.size() == 1 && a.begin()->second.mono.empty() && a.begin()->second.coef.is_one()) return {};
            if (a.empty()) throw Error("logarithm of zero");
            return atom(Expr::log(from_sumform(a)), Number(1));
        }
    }
    throw Error("bad expression node");
}

Expr from_sumform(const SumForm& s) {
    std::vector<Expr> terms;
    for (const auto& [k, t] : s) {
        std::vector<Expr> f;
        if (!t.coef.is_one() || t.mono.empty()) f.push_back(Expr(t.coef));
        for (const auto& [fk, fac] : t.mono) f.push_back(fac.exp.is_one() ? fac.base : Expr::pow(fac.base, fac.exp));
        terms.push_back(Expr::mul(f));
    }
    return Expr::add(terms);
}

}  // namespace

Expr simplify(const Expr& e) { return from_sumform(to_sumform(e)); }

// ---------------------------------------------------------------- parser

namespace {

class Parser {
public:
    Parser(const std::string& s, const std::vector<std::string>& names) : s_(s), names_(names) {}

    Expr parse() {
        Expr e = sum();
        skip();
        if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw Error("parse error at " + std::to_string(i_) + ": " + msg);
    }
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eat(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    Expr sum() {
        Expr e = product();
        for (;;) {
            if (eat('+')) e = e + product();
            else if (eat('-')) e = e - product();
            else return e;
        }
    }
    Expr product() {
        Expr e = unary();
        for (;;) {
            if (eat('*')) e = e * unary();
            else if (eat('/')) e = e / unary();
            else return e;
        }
    }
    Expr unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }
    Expr power() {
        Expr b = primary();
        if (eat('^')) return Expr::pow(b, unary());
        return b;
    }
    Expr primary() {
        skip();
        if (i_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[i_];
        if (eat('(')) {
            Expr e = sum();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t j = i_;
            while (j < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[j])) || s_[j] == '.')) ++j;
            if (j < s_.size() && (s_[j] == 'e' || s_[j] == 'E')) {
                size_t k = j + 1;
                if (k < s_.size() && (s_[k] == '+' || s_[k] == '-')) ++k;
                if (k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]))) {
                    j = k;
                    while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
                }
            }
            Number n = Number::parse(s_.substr(i_, j - i_));
            i_ = j;
            return Expr(n);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i_;
            while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) ++j;
            std::string id = s_.substr(i_, j - i_);
            i_ = j;
            if (eat('(')) return call(id);
            for (size_t v = 0; v < names_.size(); ++v)
                if (names_[v] == id) return Expr::var(static_cast<int>(v));
            fail("unknown name '" + id + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
    Expr call(const std::string& f) {
        std::vector<Expr> a{sum()};
        while (eat(',')) a.push_back(sum());
        if (!eat(')')) fail("expected ')'");
        auto arity = [&](size_t n) {
            if (a.size() != n) fail(f + " takes " + std::to_string(n) + " argument" + (n == 1 ? "" : "s"));
        };
        if (f == "pow") {
            arity(2);
            return Expr::pow(a[0], a[1]);
        }
        arity(1);
        if (f == "exp") return Expr::exp(a[0]);
        if (f == "log") return Expr::log(a[0]);
        if (f == "sqrt") return Expr::pow(a[0], Number(1, 2));
        fail("unknown function '" + f + "'");
    }

    const std::string& s_;
    const std::vector<std::string>& names_;
    size_t i_ = 0;
};

}  // namespace

Expr parse_expr(const std::string& text, const std::vector<std::string>& names) { return Parser(text, names).parse(); }

}  // namespace twistor
