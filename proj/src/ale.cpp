#include "twistor/ale.hpp"

#include <cctype>
#include <numeric>

#include "twistor/error.hpp"
#include "twistor/linalg.hpp"

namespace twistor {

void KleinianType::validate() const {
    if (family == AdeFamily::A && k < 1) throw Error("A_k needs k >= 1");
    if (family == AdeFamily::D && k < 3) throw Error("the D row needs k >= 3");
}

KleinianType KleinianType::parse(const std::string& s) {
    if (s.size() < 2) throw Error("unknown Kleinian type '" + s + "'");
    const char f = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    const std::string rest = s.substr(1);
    for (char c : rest)
        if (!std::isdigit(static_cast<unsigned char>(c))) throw Error("unknown Kleinian type '" + s + "'");
    const int n = std::stoi(rest);
    KleinianType t;
    if (f == 'A') t = {AdeFamily::A, n};
    else if (f == 'D') t = {AdeFamily::D, n};
    else if (f == 'E' && n == 6) t = {AdeFamily::E6, 0};
    else if (f == 'E' && n == 7) t = {AdeFamily::E7, 0};
    else if (f == 'E' && n == 8) t = {AdeFamily::E8, 0};
    else throw Error("unknown Kleinian type '" + s + "'");
    t.validate();
    return t;
}

std::string KleinianType::name() const {
    switch (family) {
        case AdeFamily::A: return "A" + std::to_string(k);
        case AdeFamily::D: return "D" + std::to_string(k);
        case AdeFamily::E6: return "E6";
        case AdeFamily::E7: return "E7";
        case AdeFamily::E8: return "E8";
    }
    return "";
}

std::vector<RelationTerm> relation_terms(const KleinianType& t) {
    t.validate();
    std::vector<RelationTerm> v;
    switch (t.family) {
        case AdeFamily::A:
            // xy - z^k - a_1 z^{k-2} - ... - a_{k-1}
            v = {{1, 0, 1, 1, 0}, {-1, 0, 0, 0, t.k}};
            for (int i = 1; i <= t.k - 1; ++i) v.push_back({-1, i, 0, 0, t.k - 1 - i});
            break;
        case AdeFamily::D:
            // x^2 + y^2 z + z^k + a_1 y^2 + a_2 y + a_3 z^{k-2} + ... + a_k z + a_{k+1}
            v = {{1, 0, 2, 0, 0}, {1, 0, 0, 2, 1}, {1, 0, 0, 0, t.k}, {1, 1, 0, 2, 0}, {1, 2, 0, 1, 0}};
            for (int i = 3; i <= t.k + 1; ++i) v.push_back({1, i, 0, 0, t.k + 1 - i});
            break;
        case AdeFamily::E6:
            v = {{1, 0, 2, 0, 0}, {1, 0, 0, 3, 0}, {1, 0, 0, 0, 4}, {1, 1, 0, 1, 2}, {1, 2, 0, 1, 1},
                 {1, 3, 0, 1, 0}, {1, 4, 0, 0, 2}, {1, 5, 0, 0, 1}, {1, 6, 0, 0, 0}};
            break;
        case AdeFamily::E7:
            v = {{1, 0, 2, 0, 0}, {1, 0, 0, 3, 0}, {1, 0, 0, 1, 3}, {1, 1, 0, 2, 1}, {1, 2, 0, 2, 0},
                 {1, 3, 0, 1, 1}, {1, 4, 0, 1, 0}, {1, 5, 0, 0, 2}, {1, 6, 0, 0, 1}, {1, 7, 0, 0, 0}};
            break;
        case AdeFamily::E8:
            v = {{1, 0, 2, 0, 0}, {1, 0, 0, 3, 0}, {1, 0, 0, 0, 5}, {1, 1, 0, 1, 3}, {1, 2, 0, 1, 2},
                 {1, 3, 0, 1, 1}, {1, 4, 0, 1, 0}, {1, 5, 0, 0, 3}, {1, 6, 0, 0, 2}, {1, 7, 0, 0, 1},
                 {1, 8, 0, 0, 0}};
            break;
    }
    return v;
}

int deformation_count(const KleinianType& t) {
    int r = 0;
    for (const auto& term : relation_terms(t)) r = std::max(r, term.a_index);
    return r;
}

namespace {

struct Frac {
    long long n = 0, d = 1;
    Frac(long long a = 0, long long b = 1) : n(a), d(b) {
        if (d < 0) n = -n, d = -d;
        long long g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) n /= g, d /= g;
    }
    Frac operator-(const Frac& o) const { return {n * o.d - o.n * d, d * o.d}; }
    Frac operator*(const Frac& o) const { return {n * o.n, d * o.d}; }
    Frac operator/(const Frac& o) const { return {n * o.d, d * o.n}; }
    bool zero() const { return n == 0; }
};

// exact Gauss-Jordan on an augmented system; throws unless the solution is unique
std::vector<Frac> solve_exact(std::vector<std::vector<Frac>> M, int nvar) {
    const size_t m = M.size();
    size_t row = 0;
    std::vector<int> pivot_col;
    for (int c = 0; c < nvar && row < m; ++c) {
        size_t p = row;
        while (p < m && M[p][c].zero()) ++p;
        if (p == m) continue;
        std::swap(M[p], M[row]);
        for (size_t i = 0; i < m; ++i) {
            if (i == row || M[i][c].zero()) continue;
            Frac f = M[i][c] / M[row][c];
            for (int j = 0; j <= nvar; ++j) M[i][j] = M[i][j] - f * M[row][j];
        }
        pivot_col.push_back(c);
        ++row;
    }
    if (static_cast<int>(row) < nvar) throw Error("homogeneity weights are underdetermined");
    for (size_t i = row; i < m; ++i)
        if (!M[i][nvar].zero()) throw Error("homogeneity weights are inconsistent");
    std::vector<Frac> x(nvar);
    for (size_t i = 0; i < row; ++i) x[pivot_col[i]] = M[i][nvar] / M[i][pivot_col[i]];
    return x;
}

int as_int(const Frac& f) {
    if (f.d != 1) throw Error("homogeneity weights are not integral");
    return static_cast<int>(f.n);
}

}  // namespace

Degrees degrees_of(const KleinianType& t) {
    // unknowns (p, q, r, s)
    std::vector<std::vector<Frac>> M;
    const auto terms = relation_terms(t);
    for (const auto& term : terms)
        if (term.a_index == 0) M.push_back({term.ex, term.ey, term.ez, -1, 0});
    M.push_back({1, 1, 1, -1, 2});
    // xy - z^k only fixes p + q; the relation is symmetric in x and y
    if (t.family == AdeFamily::A) M.push_back({1, -1, 0, 0, 0});
    auto w = solve_exact(M, 4);
    Degrees d{as_int(w[0]), as_int(w[1]), as_int(w[2]), as_int(w[3]), {}};
    d.a.assign(static_cast<size_t>(deformation_count(t)), 0);
    for (const auto& term : terms) {
        if (term.a_index == 0) continue;
        int deg = d.s - term.ex * d.p - term.ey * d.q - term.ez * d.r;
        if (deg < 0) throw Error("deformation term outweighs the relation");
        d.a[term.a_index - 1] = deg;
    }
    return d;
}

void AleTwistorData::validate() const {
    Degrees d = degrees_of(type);
    if (a.size() != d.a.size())
        throw Error(type.name() + " takes " + std::to_string(d.a.size()) + " deformation coefficients");
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i].degree() > d.a[i]) throw Error("a_" + std::to_string(i + 1) + " exceeds degree " + std::to_string(d.a[i]));
}

namespace {

void check_curve(const Degrees& d, const AleCurve& c) {
    if (c.x.degree() != d.p || c.y.degree() != d.q || c.z.degree() != d.r)
        throw Error("curve degrees must be (" + std::to_string(d.p) + "," + std::to_string(d.q) + "," +
                    std::to_string(d.r) + ")");
}

Polynomial evaluate(const AleTwistorData& d, const AleCurve& c, int dv) {
    Polynomial out;
    const Polynomial* base[3] = {&c.x.poly(), &c.y.poly(), &c.z.poly()};
    for (const auto& term : relation_terms(d.type)) {
        int e[3] = {term.ex, term.ey, term.ez};
        double coeff = term.coeff;
        if (dv >= 0) {
            if (e[dv] == 0) continue;
            coeff *= e[dv];
            --e[dv];
        }
        Polynomial m{coeff};
        if (term.a_index > 0) m = m * d.a[term.a_index - 1];
        for (int v = 0; v < 3; ++v) m = m * base[v]->pow(e[v]);
        out = out + m;
    }
    return out;
}

}  // namespace

Polynomial relation_residual(const AleTwistorData& d, const AleCurve& c) {
    d.validate();
    check_curve(degrees_of(d.type), c);
    return evaluate(d, c, -1);
}

Polynomial relation_partial(const AleTwistorData& d, const AleCurve& c, int v) {
    if (v < 0 || v > 2) throw Error("variable index must be 0, 1 or 2");
    d.validate();
    check_curve(degrees_of(d.type), c);
    return evaluate(d, c, v);
}

int linearized_kernel_dim(const AleTwistorData& d, const AleCurve& c) {
    const Degrees deg = degrees_of(d.type);
    const int dims[3] = {deg.p, deg.q, deg.r};
    const int n = deg.p + deg.q + deg.r + 3;
    Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(deg.s + 1, n);
    int col = 0;
    for (int v = 0; v < 3; ++v) {
        Polynomial g = relation_partial(d, c, v);
        for (int i = 0; i <= dims[v]; ++i, ++col) {
            Polynomial gi = g * Polynomial::monomial(i);
            for (int j = 0; j <= gi.degree() && j <= deg.s; ++j) J(j, col) = gi[j];
        }
    }
    return n - numerical_rank(J, 1e-10);
}

namespace {

// choose counts c_i <= mult_i with sum k, in lexicographic order of the count vector
void enumerate_splits(const std::vector<int>& mult, int k, size_t i, std::vector<int>& cur,
                      std::vector<std::vector<int>>& out) {
    if (i == mult.size()) {
        if (k == 0) out.push_back(cur);
        return;
    }
    for (int c = std::min(k, mult[i]); c >= 0; --c) {
        cur[i] = c;
        enumerate_splits(mult, k - c, i + 1, cur, out);
    }
    cur[i] = 0;
}

}  // namespace

AkSolution ak_curve_solve(const AleTwistorData& d, const BundleSection& z) {
    if (d.type.family != AdeFamily::A) throw Error("ak_curve_solve needs an A-type relation");
    d.validate();
    if (z.degree() != 2) throw Error("z must be a section of O(2)");
    const int k = d.type.k;
    AkSolution sol;
    Polynomial R = z.poly().pow(k);
    for (int j = 1; j <= k - 1; ++j) R = R + d.a[j - 1] * z.poly().pow(k - 1 - j);
    sol.R = R;
    double scale = std::pow(std::max(z.poly().norm(), 1e-300), k);
    for (const auto& a : d.a) scale = std::max(scale, a.norm());
    if (R.is_zero() || R.norm() <= 1e-14 * scale) {
        sol.degenerate = true;
        return sol;
    }
    std::vector<cd> roots;
    std::vector<int> mult;
    for (const auto& r : poly_roots(R)) {
        roots.push_back(r.value);
        mult.push_back(r.multiplicity);
    }
    // the point at infinity is the last projective root
    const int at_inf = 2 * k - R.degree();
    if (at_inf > 0) mult.push_back(at_inf);
    std::vector<std::vector<int>> splits;
    std::vector<int> cur(mult.size(), 0);
    enumerate_splits(mult, k, 0, cur, splits);
    for (const auto& sp : splits) {
        Polynomial x{1.0}, y{R.leading()};
        for (size_t i = 0; i < roots.size(); ++i) {
            Polynomial f{-roots[i], 1.0};
            x = x * f.pow(sp[i]);
            y = y * f.pow(mult[i] - sp[i]);
        }
        sol.curves.push_back({BundleSection(k, x), BundleSection(k, y), z});
    }
    return sol;
}

std::optional<Polynomial> lift_tangency_check(const AleTwistorData& d, const BundleSection& x, const BundleSection& y) {
    if (d.type.family != AdeFamily::A || d.type.k != 2) throw Error("the lift test is for A_2");
    d.validate();
    if (x.degree() != 2 || y.degree() != 2) throw Error("x and y must be sections of O(2)");
    Polynomial quartic = x.poly() * y.poly() - d.a[0];
    double scale = std::max({x.poly().norm() * y.poly().norm(), d.a[0].norm(), 1e-300});
    if (quartic.is_zero() || quartic.norm() <= 1e-14 * scale) return Polynomial{};
    // an odd number of roots at infinity rules out a square
    if ((4 - quartic.degree()) % 2 != 0) return std::nullopt;
    return poly_nth_root(quartic, 2);
}

}  // namespace twistor
