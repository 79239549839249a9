#pragma once

#include <complex>
#include <memory>
#include <vector>

namespace twistor {

using cd = std::complex<double>;

struct JetShape;

// Truncated multivariate Taylor polynomial in `vars` variables, all terms of
// total degree <= order. Monomials are stored graded by degree, so the
// coefficients of a lower-order jet are a prefix of a higher-order one.
class Jet {
public:
    Jet() = default;
    Jet(int vars, int order, cd value = 0.0);

    static Jet variable(int vars, int order, int index, cd value);

    int vars() const { return vars_; }
    int order() const { return order_; }
    cd value() const { return c_.empty() ? cd(0.0) : c_[0]; }

    // Taylor coefficient of the given multi-index
    cd coeff(const std::vector<int>& exps) const;
    // partial derivative value at the expansion point (coefficient times factorials)
    cd derivative(const std::vector<int>& exps) const;
    const std::vector<cd>& coeffs() const { return c_; }

    Jet truncate(int order) const;
    // d/d(var); valid order drops by one
    Jet partial(int var) const;

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(cd s);
    Jet operator-() const;

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);
    friend Jet operator*(Jet a, cd s) { return a *= s; }
    friend Jet operator*(cd s, Jet a) { return a *= s; }
    friend Jet operator+(Jet a, cd s) { a.c_[0] += s; return a; }
    friend Jet operator+(cd s, Jet a) { a.c_[0] += s; return a; }
    friend Jet operator-(Jet a, cd s) { a.c_[0] -= s; return a; }
    friend Jet operator-(cd s, const Jet& a) { return (-a) + s; }
    friend Jet operator/(const Jet& a, cd s) { return a * (1.0 / s); }
    friend Jet operator/(cd s, const Jet& a);

    friend Jet pow(const Jet& a, int n);
    // principal branch; constant term must be nonzero
    friend Jet pow(const Jet& a, double alpha);
    friend Jet exp(const Jet& a);
    friend Jet log(const Jet& a);
    friend Jet sqrt(const Jet& a);

private:
    // sum_m f[m] (a - a0)^m
    static Jet compose(const Jet& a, const std::vector<cd>& f);
    void match(const Jet& o);

    int vars_ = 0;
    int order_ = 0;
    std::shared_ptr<const JetShape> shape_;
    std::vector<cd> c_;
};

}  // namespace twistor
