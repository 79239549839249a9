#include "twistor/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <Eigen/Dense>

#include "twistor/error.hpp"

namespace twistor {

Polynomial::Polynomial(std::initializer_list<cd> c) : c_(c) { trim(); }

Polynomial::Polynomial(std::vector<cd> c) : c_(std::move(c)) { trim(); }

Polynomial Polynomial::constant(cd c) { return Polynomial(std::vector<cd>{c}); }

Polynomial Polynomial::monomial(int k, cd c) {
    std::vector<cd> v(static_cast<size_t>(k) + 1, 0.0);
    v[k] = c;
    return Polynomial(std::move(v));
}

Polynomial Polynomial::from_roots(const std::vector<cd>& roots, cd lead) {
    std::vector<cd> v{lead};
    for (cd r : roots) {
        v.push_back(0.0);
        for (size_t k = v.size() - 1; k > 0; --k) v[k] = v[k - 1] - r * v[k];
        v[0] = -r * v[0];
    }
    return Polynomial(std::move(v));
}

void Polynomial::trim() {
    while (!c_.empty() && c_.back() == cd(0.0)) c_.pop_back();
}

cd Polynomial::operator[](int k) const {
    if (k < 0 || k >= static_cast<int>(c_.size())) return 0.0;
    return c_[k];
}

cd Polynomial::leading() const { return c_.empty() ? cd(0.0) : c_.back(); }

cd Polynomial::operator()(cd x) const {
    cd r = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
    return r;
}

Polynomial Polynomial::derivative() const {
    std::vector<cd> v;
    for (size_t k = 1; k < c_.size(); ++k) v.push_back(c_[k] * static_cast<double>(k));
    return Polynomial(std::move(v));
}

Polynomial Polynomial::taylor_shift(cd x0) const {
    std::vector<cd> v = c_;
    const int n = static_cast<int>(v.size());
    for (int i = 0; i < n; ++i)
        for (int k = n - 2; k >= i; --k) v[k] += x0 * v[k + 1];
    return Polynomial(std::move(v));
}

Polynomial Polynomial::pow(int n) const {
    if (n < 0) throw Error("negative polynomial power");
    Polynomial r = constant(1.0), b = *this;
    while (n > 0) {
        if (n & 1) r *= b;
        n >>= 1;
        if (n) b *= b;
    }
    return r;
}

Polynomial Polynomial::reversed(int n) const {
    if (degree() > n) throw Error("degree exceeds reversal length");
    std::vector<cd> v(static_cast<size_t>(n) + 1, 0.0);
    for (int k = 0; k <= degree(); ++k) v[n - k] = c_[k];
    return Polynomial(std::move(v));
}

double Polynomial::norm() const {
    double m = 0.0;
    for (cd c : c_) m = std::max(m, std::abs(c));
    return m;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<cd> v(a.c_.size() + b.c_.size() - 1, 0.0);
    for (size_t i = 0; i < a.c_.size(); ++i)
        for (size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(v));
}

Polynomial& Polynomial::operator*=(const Polynomial& o) { return *this = *this * o; }

Polynomial& Polynomial::operator*=(cd s) {
    for (cd& c : c_) c *= s;
    trim();
    return *this;
}

Polynomial Polynomial::operator-() const {
    Polynomial r = *this;
    for (cd& c : r.c_) c = -c;
    return r;
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& d) const {
    if (d.is_zero()) throw Error("polynomial division by zero");
    if (degree() < d.degree()) return {Polynomial{}, *this};
    std::vector<cd> r = c_;
    std::vector<cd> q(c_.size() - d.c_.size() + 1, 0.0);
    const int dd = d.degree();
    for (int k = degree(); k >= dd; --k) {
        cd f = r[k] / d.c_.back();
        q[k - dd] = f;
        for (int j = 0; j <= dd; ++j) r[k - dd + j] -= f * d.c_[j];
    }
    r.resize(static_cast<size_t>(dd));
    return {Polynomial(std::move(q)), Polynomial(std::move(r))};
}

double Polynomial::distance(const Polynomial& a, const Polynomial& b) { return (a - b).norm(); }

namespace {

// Scale of the rounding error of p evaluated near c.
// size of the coefficient perturbation left by the companion eigensolver,
// which is normwise, evaluated at c
double eval_scale(const Polynomial& p, cd c) {
    double s = 0.0, a = std::abs(c), pw = 1.0;
    for (size_t k = 0; k < p.coeffs().size(); ++k) {
        s += pw;
        pw *= a;
    }
    return p.norm() * s;
}

// |p^(m)(c)/m!|
double taylor_coeff_abs(const Polynomial& p, cd c, int m) {
    return std::abs(p.taylor_shift(c)[m]);
}

struct Cluster {
    std::vector<cd> members;
    cd centre() const {
        cd s = std::accumulate(members.begin(), members.end(), cd(0.0));
        return s / static_cast<double>(members.size());
    }
};

}  // namespace

std::vector<Root> poly_roots(const Polynomial& p) {
    if (p.is_zero()) throw Error("undefined roots");
    const auto& c = p.coeffs();
    int zeros = 0;
    while (c[zeros] == cd(0.0)) ++zeros;
    std::vector<cd> rest(c.begin() + zeros, c.end());
    const int n = static_cast<int>(rest.size()) - 1;

    std::vector<cd> raw(static_cast<size_t>(zeros), 0.0);
    if (n > 0) {
        Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
        for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
        for (int i = 0; i < n; ++i) comp(i, n - 1) = -rest[i] / rest[n];
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
        Polynomial q(rest);
        Polynomial dq = q.derivative();
        for (int i = 0; i < n; ++i) {
            cd r = es.eigenvalues()[i];
            cd d = dq(r);
            if (d != cd(0.0)) {
                cd r2 = r - q(r) / d;
                if (std::isfinite(r2.real()) && std::isfinite(r2.imag()) &&
                    std::abs(q(r2)) < std::abs(q(r)))
                    r = r2;
            }
            raw.push_back(r);
        }
    }

    // single-linkage clustering at a relative radius
    std::vector<Cluster> cl;
    for (cd r : raw) {
        std::vector<size_t> hits;
        for (size_t i = 0; i < cl.size(); ++i)
            for (cd m : cl[i].members)
                if (std::abs(m - r) <= 1e-7 * (1.0 + std::abs(r))) {
                    hits.push_back(i);
                    break;
                }
        if (hits.empty()) {
            cl.push_back({{r}});
            continue;
        }
        Cluster& into = cl[hits[0]];
        into.members.push_back(r);
        for (size_t h = hits.size(); h-- > 1;) {
            auto& src = cl[hits[h]].members;
            into.members.insert(into.members.end(), src.begin(), src.end());
            cl.erase(cl.begin() + static_cast<long>(hits[h]));
        }
    }

    // A root of multiplicity m is only resolved to about eps^(1/m); merge
    // clusters that sit inside that perturbation disc.
    bool merged = true;
    while (merged && cl.size() > 1) {
        merged = false;
        for (size_t i = 0; i < cl.size() && !merged; ++i) {
            for (size_t j = i + 1; j < cl.size() && !merged; ++j) {
                Cluster u = cl[i];
                u.members.insert(u.members.end(), cl[j].members.begin(), cl[j].members.end());
                const int m = static_cast<int>(u.members.size());
                cd ctr = u.centre();
                double tm = taylor_coeff_abs(p, ctr, m);
                if (tm == 0.0) continue;
                double delta = 10.0 * std::pow(1e-15 * eval_scale(p, ctr) / tm, 1.0 / m);
                bool ok = std::all_of(u.members.begin(), u.members.end(),
                                      [&](cd z) { return std::abs(z - ctr) <= delta; });
                if (ok) {
                    cl[i] = u;
                    cl.erase(cl.begin() + static_cast<long>(j));
                    merged = true;
                }
            }
        }
    }

    std::vector<Root> out;
    for (const auto& k : cl) {
        const int m = static_cast<int>(k.members.size());
        cd ctr = k.centre();
        if (m > 1) {
            // the cluster centre is a simple root of p^(m-1)
            Polynomial d = p;
            for (int i = 1; i < m; ++i) d = d.derivative();
            Polynomial dd = d.derivative();
            for (int it = 0; it < 3; ++it) {
                cd den = dd(ctr);
                if (den == cd(0.0)) break;
                cd next = ctr - d(ctr) / den;
                if (!(std::abs(d(next)) < std::abs(d(ctr)))) break;
                ctr = next;
            }
        }
        out.push_back({ctr, m});
    }
    std::sort(out.begin(), out.end(), [](const Root& a, const Root& b) {
        double tol = 1e-6 * (1.0 + std::abs(a.value) + std::abs(b.value));
        if (std::abs(a.value.real() - b.value.real()) > tol) return a.value.real() < b.value.real();
        return a.value.imag() < b.value.imag();
    });
    return out;
}

namespace {

// b = a^alpha as a power series truncated after `len` terms, a[0] != 0
std::vector<cd> series_pow(const std::vector<cd>& a, double alpha, size_t len) {
    std::vector<cd> b(len, 0.0);
    b[0] = std::pow(a[0], alpha);
    for (size_t k = 1; k < len; ++k) {
        cd s = 0.0;
        for (size_t j = 1; j <= k && j < a.size(); ++j)
            s += ((alpha + 1.0) * static_cast<double>(j) - static_cast<double>(k)) * a[j] * b[k - j];
        b[k] = s / (static_cast<double>(k) * a[0]);
    }
    return b;
}

}  // namespace

std::optional<Polynomial> poly_nth_root(const Polynomial& p, int n) {
    if (n < 2) throw Error("nth root needs n >= 2");
    if (p.is_zero()) return Polynomial{};
    const int d = p.degree();
    if (d % n != 0) return std::nullopt;
    const int e = d / n;
    // series in u = 1/x of x^-d p(x), whose nth root is read top-down
    std::vector<cd> rev(p.coeffs().rbegin(), p.coeffs().rend());
    std::vector<cd> s = series_pow(rev, 1.0 / n, static_cast<size_t>(e) + 1);
    Polynomial q(std::vector<cd>(s.rbegin(), s.rend()));
    if (Polynomial::distance(q.pow(n), p) > 1e-9 * p.norm()) return std::nullopt;
    return q;
}

nlohmann::json to_json(const Polynomial& p) {
    nlohmann::json arr = nlohmann::json::array();
    for (cd c : p.coeffs()) arr.push_back({c.real(), c.imag()});
    return {{"coeffs", arr}};
}

Polynomial polynomial_from_json(const nlohmann::json& j) {
    std::vector<cd> v;
    for (const auto& c : j.at("coeffs")) v.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
    return Polynomial(std::move(v));
}

std::string to_string(const Polynomial& p) {
    if (p.is_zero()) return "0";
    std::string s;
    char buf[96];
    for (int k = 0; k <= p.degree(); ++k) {
        cd c = p[k];
        if (c == cd(0.0)) continue;
        std::snprintf(buf, sizeof buf, "%s(%.6g%+.6gi)", s.empty() ? "" : " + ", c.real(), c.imag());
        s += buf;
        if (k == 1) s += "x";
        if (k > 1) s += "x^" + std::to_string(k);
    }
    return s;
}

}  // namespace twistor
