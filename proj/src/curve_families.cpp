#include "twistor/curve_families.hpp"

#include <algorithm>
#include <cmath>

#include "twistor/error.hpp"
#include "twistor/linalg.hpp"

namespace twistor {

AlphaSubspace alpha_subspace(const BundleType& t, const ProjPoint& pt) {
    AlphaSubspace a{t, pt, {}};
    const Polynomial factor = pt.infinity ? Polynomial{1.0} : Polynomial{-pt.lambda, 1.0};
    for (int i = 0; i < t.rank(); ++i) {
        const int k = t.ks()[i];
        for (int j = 0; j < k; ++j) {
            std::vector<BundleSection> comps;
            for (int l = 0; l < t.rank(); ++l)
                comps.emplace_back(t.ks()[l], l == i ? factor * Polynomial::monomial(j) : Polynomial{});
            a.basis.emplace_back(t, comps);
        }
    }
    return a;
}

std::vector<VectorSection> beta_plane(const BundleType& t, const std::vector<Polynomial>& w) {
    if (static_cast<int>(w.size()) != t.rank()) throw Error("beta plane generator needs one entry per summand");
    bool nonzero = false;
    for (int i = 0; i < t.rank(); ++i) {
        if (w[i].is_zero()) continue;
        nonzero = true;
        if (w[i].degree() > t.ks()[i] - 1) throw Error("beta plane generator exceeds degree k_i - 1");
    }
    if (!nonzero) throw Error("beta plane generator must be nonzero");
    std::vector<BundleSection> a, b;
    for (int i = 0; i < t.rank(); ++i) {
        a.emplace_back(t.ks()[i], w[i]);
        b.emplace_back(t.ks()[i], w[i] * Polynomial::monomial(1));
    }
    return {VectorSection(t, a), VectorSection(t, b)};
}

AffineFamily solve_incidence(const BundleType& t, const std::vector<IncidenceCondition>& conds) {
    const int n = moduli_dimension(t), r = t.rank();
    const long m = static_cast<long>(conds.size()) * r;
    Eigen::MatrixXcd A(m, n);
    Eigen::VectorXcd b(m);
    long row = 0;
    for (const auto& c : conds) {
        if (static_cast<int>(c.fibre.size()) != r) throw Error("incidence fibre length must equal the bundle rank");
        for (int i = 0; i < r; ++i, ++row) {
            A.row(row) = evaluation_row(t, i, c.base);
            b(row) = c.fibre[i];
        }
    }
    LinearSolution sol = linear_solve(A, b);
    AffineFamily f{sol.consistent, VectorSection::from_coords(t, sol.particular), {}, sol.rank, sol.residual};
    for (const auto& v : sol.null_space) f.basis.push_back(VectorSection::from_coords(t, v));
    return f;
}

int composite_degree(const TangencyCondition& tc, const BundleType& t) {
    int d = 0;
    for (const auto& term : tc.terms) {
        if (static_cast<int>(term.exps.size()) != t.rank()) throw Error("hypersurface term arity must equal the bundle rank");
        int w = term.lambda_power;
        for (int i = 0; i < t.rank(); ++i) w += term.exps[i] * t.ks()[i];
        d = std::max(d, w);
    }
    return d;
}

namespace {

void validate(const TangencyCondition& tc) {
    if (tc.order < 1) throw Error("tangency order must be at least 1");
    bool nonzero = std::any_of(tc.terms.begin(), tc.terms.end(), [](const HyperTerm& h) { return h.coeff != cd(0.0); });
    if (!nonzero) throw Error("hypersurface polynomial is identically zero");
}

template <class T>
std::vector<T> pmul(const std::vector<T>& a, const std::vector<T>& b, const T& zero) {
    std::vector<T> r(a.size() + b.size() - 1, zero);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
    return r;
}

// coefficients of G(lambda, s(lambda)) with s given by per-summand coefficient lists
template <class T>
std::vector<T> compose_generic(const TangencyCondition& tc, const std::vector<std::vector<T>>& comps,
                               int degree, const T& zero, const T& one) {
    std::vector<T> g(static_cast<size_t>(degree) + 1, zero);
    for (const auto& term : tc.terms) {
        std::vector<T> acc{one};
        for (size_t i = 0; i < comps.size(); ++i)
            for (int e = 0; e < term.exps[i]; ++e) acc = pmul(acc, comps[i], zero);
        for (size_t k = 0; k < acc.size(); ++k) {
            size_t at = k + term.lambda_power;
            if (at < g.size()) g[at] = g[at] + acc[k] * term.coeff;
        }
    }
    return g;
}

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

Polynomial compose(const TangencyCondition& tc, const VectorSection& s) {
    validate(tc);
    std::vector<std::vector<cd>> comps;
    for (const auto& c : s.components()) {
        std::vector<cd> v(static_cast<size_t>(c.degree()) + 1);
        for (int j = 0; j <= c.degree(); ++j) v[j] = c.poly()[j];
        comps.push_back(v);
    }
    return Polynomial(compose_generic<cd>(tc, comps, composite_degree(tc, s.type()), 0.0, 1.0));
}

double TangencyResiduals::max_abs() const {
    double m = 0.0;
    for (cd v : values) m = std::max(m, std::abs(v));
    return m;
}

TangencyResiduals tangency_residuals(const VectorSection& s, const TangencyCondition& tc) {
    TangencyResiduals out;
    Polynomial g = compose(tc, s);
    const int D = composite_degree(tc, s.type());
    double scale = 0.0;
    for (const auto& term : tc.terms) {
        double m = std::abs(term.coeff);
        for (size_t i = 0; i < term.exps.size(); ++i)
            m *= std::pow(std::max(s.components()[i].poly().norm(), 1e-300), term.exps[i]);
        scale = std::max(scale, m);
    }
    if (g.is_zero() || g.norm() <= 1e-14 * scale) {
        out.degenerate = true;
        out.values.assign(static_cast<size_t>(tc.order), 0.0);
        return out;
    }
    for (const auto& r : poly_roots(g)) {
        Polynomial sh = g.taylor_shift(r.value);
        out.points.push_back(ProjPoint::finite(r.value));
        for (int m = 0; m < tc.order; ++m) out.values.push_back(sh[m]);
    }
    if (g.degree() < D) {
        Polynomial dual = g.reversed(D);
        out.points.push_back(ProjPoint::at_infinity());
        for (int m = 0; m < tc.order; ++m) out.values.push_back(dual[m]);
    }
    return out;
}

TangencySolution solve_tangency(const BundleType& t, const std::vector<TangencyCondition>& conds,
                                const VectorSection& start, const NewtonOptions& opt) {
    if (!(start.type() == t)) throw Error("start section has the wrong bundle type");
    const int N = moduli_dimension(t);
    std::vector<int> npts;
    std::vector<int> degs;
    Eigen::VectorXcd x0(N);
    x0.head(N) = start.coords();
    std::vector<cd> init;
    for (const auto& tc : conds) {
        validate(tc);
        const int D = composite_degree(tc, t);
        if (D % tc.order != 0) throw Error("intersection degree is not divisible by the tangency order");
        Polynomial g = compose(tc, start);
        if (g.degree() < D) throw Error("tangency point at infinity; use the other chart");
        std::vector<cd> roots;
        for (const auto& r : poly_roots(g))
            for (int k = 0; k < r.multiplicity; ++k) roots.push_back(r.value);
        // group each root with its nearest unassigned neighbours
        std::vector<bool> used(roots.size(), false);
        for (size_t i = 0; i < roots.size(); ++i) {
            if (used[i]) continue;
            used[i] = true;
            cd sum = roots[i];
            for (int k = 1; k < tc.order; ++k) {
                size_t best = roots.size();
                for (size_t j = 0; j < roots.size(); ++j)
                    if (!used[j] && (best == roots.size() || std::abs(roots[j] - roots[i]) < std::abs(roots[best] - roots[i])))
                        best = j;
                used[best] = true;
                sum += roots[best];
            }
            init.push_back(sum / static_cast<double>(tc.order));
        }
        npts.push_back(D / tc.order);
        degs.push_back(D);
    }
    Eigen::VectorXcd x(N + static_cast<long>(init.size()));
    x.head(N) = x0;
    for (size_t i = 0; i < init.size(); ++i) x(N + static_cast<long>(i)) = init[i];

    auto residual = [&](const std::vector<Jet>& v) {
        const Jet zero(v[0].vars(), v[0].order()), one(v[0].vars(), v[0].order(), 1.0);
        std::vector<std::vector<Jet>> comps;
        int pos = 0;
        for (int k : t.ks()) {
            comps.emplace_back(v.begin() + pos, v.begin() + pos + k + 1);
            pos += k + 1;
        }
        std::vector<Jet> out;
        for (size_t c = 0; c < conds.size(); ++c) {
            std::vector<Jet> g = compose_generic<Jet>(conds[c], comps, degs[c], zero, one);
            for (int p = 0; p < npts[c]; ++p, ++pos) {
                const Jet& l = v[pos];
                for (int m = 0; m < conds[c].order; ++m) {
                    Jet acc = zero;
                    for (int k = static_cast<int>(g.size()) - 1; k >= m; --k)
                        acc = acc * l + g[k] * binom(k, m);
                    out.push_back(acc);
                }
            }
        }
        return out;
    };
    NewtonResult nr = newton_solve(residual, x, opt);
    TangencySolution sol{VectorSection::from_coords(t, nr.x.head(N)), nr, {}};
    long pos = N;
    for (int np : npts) {
        std::vector<cd> pts;
        for (int p = 0; p < np; ++p) pts.push_back(nr.x(pos++));
        sol.points.push_back(pts);
    }
    return sol;
}

}  // namespace twistor
