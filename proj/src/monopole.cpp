#include "twistor/monopole.hpp"

#include <cmath>

#include "twistor/error.hpp"
#include "twistor/linalg.hpp"

namespace twistor {

QuadraticCurve tau_transform(const QuadraticCurve& c) {
    return {-std::conj(c.gamma), std::conj(c.beta), -std::conj(c.alpha)};
}

bool tau_invariance_check(const QuadraticCurve& c, double tol) {
    QuadraticCurve t = tau_transform(c);
    return std::abs(t.alpha - c.alpha) <= tol && std::abs(t.beta - c.beta) <= tol && std::abs(t.gamma - c.gamma) <= tol;
}

QuadraticCurve real_section(const std::array<double, 3>& x) {
    const cd w(x[0], x[1]);
    return {w, -2.0 * x[2], -std::conj(w)};
}

SpectralCurve::SpectralCurve(std::vector<Polynomial> a) : a_(std::move(a)) {
    if (a_.empty()) throw Error("spectral curve needs k >= 1");
    for (size_t j = 0; j < a_.size(); ++j)
        if (a_[j].degree() > 2 * static_cast<int>(j + 1)) throw Error("a_j must have degree at most 2j");
}

Polynomial SpectralCurve::compose(const Polynomial& eta) const {
    // Horner in eta
    Polynomial r{1.0};
    for (const auto& a : a_) r = r * eta + a;
    return r;
}

SpectralCurve SpectralCurve::graph(const QuadraticCurve& c) { return SpectralCurve({-c.poly()}); }

SpectralCurve tau_transform(const SpectralCurve& s) {
    // tau(a_j)(mu) = (-1)^j mu^{2j} conj(a_j)(-1/mu)
    std::vector<Polynomial> out;
    for (int j = 1; j <= s.k(); ++j) {
        const Polynomial& a = s.coeffs()[j - 1];
        std::vector<cd> c(static_cast<size_t>(2 * j) + 1, 0.0);
        for (int i = 0; i <= a.degree(); ++i) c[2 * j - i] = ((j + i) % 2 == 0 ? 1.0 : -1.0) * std::conj(a[i]);
        out.emplace_back(c);
    }
    return SpectralCurve(out);
}

bool tau_invariance_check(const SpectralCurve& s, double tol) {
    SpectralCurve t = tau_transform(s);
    for (int j = 0; j < s.k(); ++j)
        if (Polynomial::distance(t.coeffs()[j], s.coeffs()[j]) > tol) return false;
    return true;
}

BundleSplit l_bundle_split(const QuadraticCurve& p, int m) {
    const double md = m;
    return {Polynomial{md * p.beta, md * p.gamma}, Polynomial{0.0, -md * p.alpha}};
}

double split_overlap_defect(const BundleSplit& s, const QuadraticCurve& p, int m, cd lambda) {
    if (lambda == cd(0.0)) throw Error("overlap point must be away from 0 and infinity");
    cd v = std::exp(s.f0(lambda)) / std::exp(static_cast<double>(m) * p.poly()(lambda) / lambda) /
           std::exp(s.finf(1.0 / lambda));
    return std::abs(v - 1.0);
}

int IntersectionReport::total() const {
    int n = 0;
    for (const auto& p : points) n += p.multiplicity;
    return n;
}

IntersectionReport spectral_intersections(const SpectralCurve& s, const std::array<double, 3>& x) {
    IntersectionReport out;
    const int D = 2 * s.k();
    Polynomial px = real_section(x).poly();
    Polynomial g = s.compose(px);
    double scale = 1.0;
    for (const auto& a : s.coeffs()) scale = std::max(scale, a.norm());
    scale = std::max(scale, std::pow(px.norm(), s.k()));
    if (g.is_zero() || g.norm() <= 1e-12 * scale) {
        out.degenerate = true;
        return out;
    }
    for (const auto& r : poly_roots(g)) out.points.push_back({ProjPoint::finite(r.value), r.multiplicity});
    if (g.degree() < D) out.points.push_back({ProjPoint::at_infinity(), D - g.degree()});
    return out;
}

Eigen::MatrixXcd monopole_incidence_system(const SpectralCurve& s, const std::array<double, 3>& x) {
    if (s.k() != 1) throw Error("explicit section spaces are available for k = 1 only");
    IntersectionReport ir = spectral_intersections(s, x);
    if (ir.degenerate) throw Error("section lies on spectral curve");
    const QuadraticCurve px = real_section(x);
    const Polynomial& a1 = s.coeffs()[0];
    const QuadraticCurve t{-a1[0], -a1[1], -a1[2]};
    const BundleSplit sx = l_bundle_split(px, 1), st = l_bundle_split(t, 2);
    Eigen::MatrixXcd A(static_cast<long>(ir.points.size()), 4);
    for (size_t j = 0; j < ir.points.size(); ++j) {
        if (ir.points[j].multiplicity != 1) throw Error("degenerate position: tangent intersection");
        const ProjPoint& pt = ir.points[j].point;
        const long r = static_cast<long>(j);
        if (pt.infinity) {
            // both splittings vanish at infinity, so only the top coefficients meet
            A.row(r) << 0.0, 1.0, 0.0, -1.0;
            continue;
        }
        const cd l = pt.lambda;
        const cd ex = std::exp(sx.f0(l)), et = std::exp(st.f0(l));
        A.row(r) << ex, l * ex, -et / ex, -et * l / ex;
    }
    return A;
}

SectionSpace section_space(const Eigen::MatrixXcd& rows, double rank_tol) {
    LinearSolveOptions opt;
    opt.rank_tol = rank_tol;
    LinearSolution sol = linear_solve(rows, Eigen::VectorXcd::Zero(rows.rows()), opt);
    if (sol.rank < rows.rows()) throw Error("degenerate position: incidence conditions are dependent");
    return {sol.null_space, sol.rank};
}

SectionSpace monopole_section_space(const SpectralCurve& s, const std::array<double, 3>& x) {
    return section_space(monopole_incidence_system(s, x));
}

}  // namespace twistor
