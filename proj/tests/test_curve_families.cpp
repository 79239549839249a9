#include <doctest.h>

#include <random>

#include "twistor/curve_families.hpp"
#include "twistor/error.hpp"
#include "twistor/linalg.hpp"

using namespace twistor;

namespace {

std::mt19937_64 rng(31);

cd rc(double r = 1.0) {
    std::uniform_real_distribution<double> u(-r, r);
    return {u(rng), u(rng)};
}

Eigen::MatrixXcd stack(const std::vector<VectorSection>& v) {
    if (v.empty()) return {};
    Eigen::MatrixXcd M(v[0].coords().size(), static_cast<long>(v.size()));
    for (size_t i = 0; i < v.size(); ++i) M.col(static_cast<long>(i)) = v[i].coords();
    return M;
}

BundleType random_type() {
    int r = 1 + static_cast<int>(rng() % 4);
    std::vector<int> ks;
    for (int i = 0; i < r; ++i) ks.push_back(static_cast<int>(rng() % 7));
    std::sort(ks.rbegin(), ks.rend());
    return BundleType(ks);
}

Polynomial random_poly(int deg) {
    std::vector<cd> c(static_cast<size_t>(deg) + 1);
    for (auto& x : c) x = rc();
    return Polynomial(c);
}

}  // namespace

TEST_CASE("alpha subspace examples") {
    auto a = alpha_subspace(BundleType({2}), ProjPoint::finite(0.0));
    REQUIRE(a.dimension() == 2);
    // span{lambda, lambda^2}
    Eigen::MatrixXcd M = stack(a.basis);
    CHECK(M.row(0).norm() == 0.0);
    CHECK(numerical_rank(M) == 2);
    CHECK(alpha_subspace(BundleType({1, 1}), ProjPoint::finite(rc())).dimension() == 2);
    CHECK(alpha_subspace(BundleType({1, 1}), ProjPoint::at_infinity()).dimension() == 2);
    CHECK(alpha_subspace(BundleType({0}), ProjPoint::finite(3.0)).dimension() == 0);
}

TEST_CASE("alpha subspace dimension over random bundle types") {
    for (int t = 0; t < 50; ++t) {
        BundleType bt = random_type();
        ProjPoint pt = t % 5 == 0 ? ProjPoint::at_infinity() : ProjPoint::finite(rc());
        auto a = alpha_subspace(bt, pt);
        int sum_k = 0;
        for (int k : bt.ks()) sum_k += k;
        CHECK(a.dimension() == sum_k);
        CHECK(a.dimension() + bt.rank() == moduli_dimension(bt));
        if (a.dimension() > 0) CHECK(numerical_rank(stack(a.basis)) == sum_k);
        for (const auto& s : a.basis)
            for (cd v : s.fibre(pt)) CHECK(std::abs(v) < 1e-12);
    }
}

TEST_CASE("beta plane examples") {
    auto b = beta_plane(BundleType({2}), {Polynomial::monomial(1)});
    CHECK(b[0].coords() == VectorSection::from_coords(BundleType({2}), Eigen::Vector3cd(0, 1, 0)).coords());
    CHECK(b[1].coords() == VectorSection::from_coords(BundleType({2}), Eigen::Vector3cd(0, 0, 1)).coords());
    CHECK(numerical_rank(stack(beta_plane(BundleType({1}), {Polynomial{1.0}}))) == 2);
    auto b2 = beta_plane(BundleType({2, 2}), {Polynomial{1.0}, Polynomial{}});
    Eigen::VectorXcd e0 = Eigen::VectorXcd::Unit(6, 0), e1 = Eigen::VectorXcd::Unit(6, 1);
    CHECK(b2[0].coords() == e0);
    CHECK(b2[1].coords() == e1);
    CHECK_THROWS_AS(beta_plane(BundleType({2}), {Polynomial{}}), Error);
    CHECK_THROWS_AS(beta_plane(BundleType({1, 0}), {Polynomial{}, Polynomial{1.0}}), Error);
}

TEST_CASE("independent beta planes meet only at zero") {
    for (int t = 0; t < 50; ++t) {
        int k1 = 1 + static_cast<int>(rng() % 5), k2 = 1 + static_cast<int>(rng() % k1);
        BundleType bt({k1, k2});
        auto b = beta_plane(bt, {random_poly(k1 - 1), random_poly(k2 - 1)});
        auto c = beta_plane(bt, {random_poly(k1 - 1), random_poly(k2 - 1)});
        b.insert(b.end(), c.begin(), c.end());
        CHECK(numerical_rank(stack(b), 1e-10) == 4);
    }
}

TEST_CASE("beta plane is transversal to an alpha subspace") {
    for (int t = 0; t < 30; ++t) {
        BundleType bt({3, 2});
        std::vector<Polynomial> w{random_poly(2), random_poly(1)};
        ProjPoint pt = ProjPoint::finite(rc());
        auto a = alpha_subspace(bt, pt);
        auto b = beta_plane(bt, w);
        std::vector<VectorSection> all = a.basis;
        all.insert(all.end(), b.begin(), b.end());
        // dim(alpha cap beta) = dim alpha + 2 - rank
        CHECK(a.dimension() + 2 - numerical_rank(stack(all), 1e-10) == 1);
    }
}

TEST_CASE("solve_incidence examples") {
    cd v = rc();
    auto f = solve_incidence(BundleType({2}), {{ProjPoint::finite(0.0), {v}}});
    CHECK(f.consistent);
    CHECK(f.dimension() == 2);
    CHECK(std::abs(f.particular.coords()(0) - v) < 1e-14);
    for (const auto& s : f.basis) CHECK(std::abs(s.coords()(0)) < 1e-14);

    auto g = solve_incidence(BundleType({1, 1}), {{ProjPoint::finite(rc()), {rc(), rc()}}});
    CHECK(g.dimension() == 2);
    CHECK(solve_incidence(BundleType({3, 1, 0}), {}).dimension() == moduli_dimension(BundleType({3, 1, 0})));

    // at infinity the condition reads the top coefficient
    auto h = solve_incidence(BundleType({2}), {{ProjPoint::at_infinity(), {v}}});
    CHECK(std::abs(h.particular.coords()(2) - v) < 1e-14);

    // too many conditions on O(0)
    auto bad = solve_incidence(BundleType({0}), {{ProjPoint::finite(0.0), {1.0}}, {ProjPoint::finite(1.0), {2.0}}});
    CHECK_FALSE(bad.consistent);
    CHECK(bad.residual > 0.1);
}

TEST_CASE("solve_incidence generic codimension") {
    // generic position needs c <= k_r + 1 so that every summand can absorb c conditions
    for (int t = 0; t < 50; ++t) {
        BundleType bt = random_type();
        int kmin = bt.ks().back();
        int c = static_cast<int>(rng() % (kmin + 2));
        std::vector<IncidenceCondition> conds;
        for (int i = 0; i < c; ++i) {
            std::vector<cd> fib;
            for (int j = 0; j < bt.rank(); ++j) fib.push_back(rc());
            conds.push_back({ProjPoint::finite(rc(2.0)), fib});
        }
        auto f = solve_incidence(bt, conds);
        CHECK(f.consistent);
        CHECK(f.dimension() == std::max(0, moduli_dimension(bt) - c * bt.rank()));
        for (const auto& cnd : conds) {
            auto fib = f.particular.fibre(cnd.base);
            for (int j = 0; j < bt.rank(); ++j) CHECK(std::abs(fib[j] - cnd.fibre[j]) < 1e-9);
        }
    }
}

TEST_CASE("tangency residual examples") {
    BundleType t({2});
    TangencyCondition zero_section{{{1.0, 0, {1}}}, 2};
    auto r = tangency_residuals(VectorSection::from_coords(t, Eigen::Vector3cd(0, 0, 1)), zero_section);
    CHECK_FALSE(r.degenerate);
    CHECK(r.max_abs() < 1e-14);
    auto simple = tangency_residuals(VectorSection::from_coords(t, Eigen::Vector3cd(-1, 0, 1)), zero_section);
    CHECK(simple.max_abs() > 0.5);
    auto inside = tangency_residuals(VectorSection::zero(t), zero_section);
    CHECK(inside.degenerate);
    CHECK(inside.max_abs() == 0.0);
    // lambda as a section of O(2) touches the zero section once at 0 and once at infinity
    auto inf = tangency_residuals(VectorSection::from_coords(t, Eigen::Vector3cd(0, 1, 0)), {{{1.0, 0, {1}}}, 1});
    CHECK(inf.points.size() == 2);
    CHECK(inf.points.back().infinity);
    CHECK(inf.max_abs() < 1e-14);
}

TEST_CASE("tangency residual for the branched cover curve") {
    // n = 2, (a,b,c) = (1,0,1): P = -1, Q = lambda^2 + 2 and
    // lambda^2 Q - P = (lambda^2 + 1)^2 by direct expansion
    BundleType t({2, 2});
    VectorSection s(t, {BundleSection(2, Polynomial{-1.0}), BundleSection(2, Polynomial{2.0, 0.0, 1.0})});
    TangencyCondition tc{{{1.0, 0, {1, 0}}, {-1.0, 2, {0, 1}}}, 2};
    CHECK(composite_degree(tc, t) == 4);
    auto r = tangency_residuals(s, tc);
    CHECK(r.points.size() == 2);
    CHECK(r.max_abs() < 1e-10);
}

TEST_CASE("solve_tangency finds a doubly tangent section") {
    BundleType t({2});
    TangencyCondition tc{{{1.0, 0, {1}}}, 2};
    auto sol = solve_tangency(t, {tc}, VectorSection::from_coords(t, Eigen::Vector3cd(0.3, 0.1, 1.0)));
    REQUIRE(sol.newton.ok());
    Eigen::VectorXcd c = sol.section.coords();
    CHECK(std::abs(c(1) * c(1) - 4.0 * c(0) * c(2)) < 1e-10);
    CHECK(tangency_residuals(sol.section, tc).max_abs() < 1e-8);
    REQUIRE(sol.points.size() == 1);
    CHECK(std::abs(sol.section.components()[0].poly()(sol.points[0][0])) < 1e-10);
}

TEST_CASE("solve_tangency on a two point condition") {
    // curves (P, Q) in O(3) + O(3) meeting zeta = lambda^3 to third order twice
    BundleType t({3, 3});
    TangencyCondition tc{{{1.0, 0, {1, 0}}, {-1.0, 3, {0, 1}}}, 3};
    Eigen::VectorXcd c(8);
    // perturbed from P = -(1 + 3 lambda^2), Q = 3 lambda + lambda^3, for which
    // P - lambda^3 Q = -(lambda^2 + 1)^3
    c << -1.0, 0.0, -3.0, 0.0, 0.0, 3.0, 0.0, 1.0;
    for (int i = 0; i < 8; ++i) c(i) += 0.01 * rc();
    auto sol = solve_tangency(t, {tc}, VectorSection::from_coords(t, c));
    REQUIRE(sol.newton.ok());
    CHECK(tangency_residuals(sol.section, tc).max_abs() < 1e-6);
    CHECK(sol.points[0].size() == 2);
}
