#pragma once

#include <complex>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace twistor {

using cd = std::complex<double>;

// Dense univariate polynomial with complex coefficients, ascending degree.
// Trailing exact zeros are stripped, so the zero polynomial has no coefficients
// and degree -1.
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(std::initializer_list<cd> c);
    explicit Polynomial(std::vector<cd> c);

    static Polynomial constant(cd c);
    static Polynomial monomial(int k, cd c = 1.0);
    // prod (x - r_i), scaled by lead
    static Polynomial from_roots(const std::vector<cd>& roots, cd lead = 1.0);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<cd>& coeffs() const { return c_; }
    // coefficient of x^k, zero outside the stored range
    cd operator[](int k) const;
    cd leading() const;

    cd operator()(cd x) const;
    Polynomial derivative() const;
    // coefficients of p(x0 + h) in powers of h
    Polynomial taylor_shift(cd x0) const;
    Polynomial pow(int n) const;
    // coefficients padded to length n+1 and reversed: x^n p(1/x)
    Polynomial reversed(int n) const;
    double norm() const;  // max |coefficient|

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const Polynomial& o);
    Polynomial& operator*=(cd s);

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(Polynomial a, cd s) { return a *= s; }
    friend Polynomial operator*(cd s, Polynomial a) { return a *= s; }
    Polynomial operator-() const;

    // quotient and remainder; throws on division by zero
    std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const;

    // max |a_k - b_k|
    static double distance(const Polynomial& a, const Polynomial& b);

private:
    void trim();
    std::vector<cd> c_;
};

struct Root {
    cd value;
    int multiplicity;
};

// Companion-matrix roots with a Newton polish and multiplicity clustering.
std::vector<Root> poly_roots(const Polynomial& p);

// q with q^n = p, or nullopt when p has no polynomial nth root.
// The leading coefficient of q is the principal nth root of that of p, so q is
// unique only up to an nth root of unity.
std::optional<Polynomial> poly_nth_root(const Polynomial& p, int n);

// JSON {"coeffs":[[re,im],...]}
nlohmann::json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const nlohmann::json& j);

std::string to_string(const Polynomial& p);

}  // namespace twistor
