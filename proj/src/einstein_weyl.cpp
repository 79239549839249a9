#include "twistor/einstein_weyl.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "twistor/bundles.hpp"
#include "twistor/error.hpp"
#include "twistor/linalg.hpp"

namespace twistor {

std::string to_string(CurveFlag f) {
    switch (f) {
        case CurveFlag::QZero: return "Q_zero";
        case CurveFlag::PZero: return "P_zero";
        case CurveFlag::ResultantZero: return "resultant_zero";
        case CurveFlag::RepeatedRoots: return "repeated_roots";
        case CurveFlag::LeadingZero: return "leading_zero";
    }
    return "";
}

bool PedersenResult::has(CurveFlag f) const { return std::find(flags.begin(), flags.end(), f) != flags.end(); }

bool PedersenResult::degenerate() const {
    return has(CurveFlag::QZero) || has(CurveFlag::PZero) || has(CurveFlag::ResultantZero);
}

namespace {

void check_n(int n, int min) {
    if (n < min) throw Error("n must be at least " + std::to_string(min));
}

// P and Q from the coefficients of S = (a lambda^2 + b lambda + c)^n
QuadricCurve split_power(int n, const Polynomial& S) {
    std::vector<cd> p(static_cast<size_t>(n) + 1, 0.0), q(static_cast<size_t>(n) + 1, 0.0);
    for (int j = 0; j <= n; ++j) q[j] = S[n + j];
    for (int i = 0; i < n; ++i) p[i] = -S[i];
    return {n, Polynomial(p), Polynomial(q)};
}

Eigen::MatrixXcd sylvester(const Polynomial& P, const Polynomial& Q, int n) {
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    for (int r = 0; r < n; ++r)
        for (int i = 0; i <= n; ++i) {
            M(r, r + i) = P[n - i];
            M(n + r, r + i) = Q[n - i];
        }
    return M;
}

}  // namespace

cd form_resultant(const Polynomial& P, const Polynomial& Q, int n) {
    check_n(n, 1);
    if (P.degree() > n || Q.degree() > n) throw Error("P and Q must have degree at most n");
    return sylvester(P, Q, n).determinant();
}

PedersenResult pedersen_solve(int n, const PedersenParams& prm) {
    check_n(n, 2);
    PedersenResult r;
    Polynomial S = prm.quadratic().pow(n);
    r.curve = split_power(n, S);
    const double scale = std::max(S.norm(), 1e-300);
    if (r.curve.Q.norm() <= 1e-14 * scale) r.flags.push_back(CurveFlag::QZero);
    if (r.curve.P.norm() <= 1e-14 * scale) r.flags.push_back(CurveFlag::PZero);
    r.resultant = form_resultant(r.curve.P, r.curve.Q, n);
    if (r.curve.P.is_zero() || r.curve.Q.is_zero() || numerical_rank(sylvester(r.curve.P, r.curve.Q, n), 1e-10) < 2 * n)
        r.flags.push_back(CurveFlag::ResultantZero);
    const double qs = std::max({std::abs(prm.a), std::abs(prm.b), std::abs(prm.c)});
    if (std::abs(prm.a) <= 1e-14 * qs) r.flags.push_back(CurveFlag::LeadingZero);
    else if (std::abs(prm.b * prm.b - 4.0 * prm.a * prm.c) <= 1e-12 * qs * qs) r.flags.push_back(CurveFlag::RepeatedRoots);
    return r;
}

TangencyReport tangency_verify(const QuadricCurve& c, const PedersenParams& prm, double tol) {
    TangencyReport out;
    const int n = c.n;
    Polynomial lhs = Polynomial::monomial(n) * c.Q - c.P;
    Polynomial S = prm.quadratic().pow(n);
    out.rel_error = Polynomial::distance(lhs, S) / std::max(S.norm(), 1e-300);
    out.ok = out.rel_error < tol;
    if (lhs.is_zero()) return out;
    for (const auto& r : poly_roots(lhs)) out.points.push_back({r.value, false, r.multiplicity});
    if (lhs.degree() < 2 * n) out.points.push_back({0.0, true, 2 * n - lhs.degree()});
    return out;
}

namespace {

// dS/da, dS/db, dS/dc
std::array<Polynomial, 3> power_gradient(int n, const PedersenParams& prm) {
    Polynomial base = prm.quadratic().pow(n - 1) * static_cast<double>(n);
    return {base * Polynomial::monomial(2), base * Polynomial::monomial(1), base};
}

}  // namespace

Eigen::MatrixXcd pedersen_jacobian(int n, const PedersenParams& prm) {
    check_n(n, 2);
    auto g = power_gradient(n, prm);
    Eigen::MatrixXcd J(2 * n + 2, 3);
    for (int v = 0; v < 3; ++v) {
        QuadricCurve d = split_power(n, g[v]);
        for (int i = 0; i <= n; ++i) {
            J(i, v) = d.P[i];
            J(n + 1 + i, v) = d.Q[i];
        }
    }
    return J;
}

BlowupCount blowup_family_dim(int n, cd lambda0, cd zeta0) {
    check_n(n, 1);
    Eigen::MatrixXcd row(1, 2 * n + 2);
    cd lp = 1.0;
    for (int i = 0; i <= n; ++i, lp *= lambda0) {
        row(0, i) = lp;
        row(0, n + 1 + i) = -zeta0 * lp;
    }
    LinearSolution sol = linear_solve(row, Eigen::VectorXcd::Zero(1));
    // projectivize the affine kernel
    return {static_cast<int>(sol.null_space.size()) - 1, 2 * n - 1, h0_dim(2 * n - 1)};
}

cd lift_incidence(int n, const PedersenParams& prm, cd lambda0, cd w0) {
    PedersenResult r = pedersen_solve(n, prm);
    return std::pow(prm.quadratic()(lambda0), n) + std::pow(w0, n) * r.curve.Q(lambda0);
}

LiftCount lift_incidence_count(int n, const PedersenParams& prm, cd lambda0, cd w0) {
    check_n(n, 2);
    auto g = power_gradient(n, prm);
    Eigen::MatrixXcd grad(1, 3);
    for (int v = 0; v < 3; ++v) grad(0, v) = g[v](lambda0) + std::pow(w0, n) * split_power(n, g[v]).Q(lambda0);
    const int codim = numerical_rank(grad, 1e-10);
    return {codim, 3 - codim, h0_dim(2)};
}

}  // namespace twistor
