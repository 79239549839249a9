#include <doctest.h>

#include <random>

#include "twistor/ale.hpp"
#include "twistor/error.hpp"

using namespace twistor;

namespace {

std::mt19937_64 rng(23);

cd rc() {
    std::uniform_real_distribution<double> u(-1, 1);
    return {u(rng), u(rng)};
}

Polynomial random_poly(int deg) {
    std::vector<cd> c(static_cast<size_t>(deg) + 1);
    for (auto& x : c) x = rc();
    return Polynomial(c);
}

BundleSection bs(int n, Polynomial p) { return BundleSection(n, std::move(p)); }

AleTwistorData random_twistor_data(const KleinianType& t) {
    AleTwistorData d{t, {}};
    for (int deg : degrees_of(t).a) d.a.push_back(random_poly(deg));
    return d;
}

// independent oracle: multiplicities of all projective roots of a degree-4 section are even
bool all_even(const Polynomial& q) {
    if ((4 - q.degree()) % 2 != 0) return false;
    for (const auto& r : poly_roots(q))
        if (r.multiplicity % 2 != 0) return false;
    return true;
}

}  // namespace

TEST_CASE("degrees of the Kleinian twistor spaces") {
    for (int k = 1; k <= 12; ++k) {
        Degrees d = degrees_of({AdeFamily::A, k});
        CHECK((d.p == k && d.q == k && d.r == 2 && d.s == 2 * k));
        CHECK(d.p + d.q + d.r - d.s == 2);
        CHECK(static_cast<int>(d.a.size()) == k - 1);
        for (int j = 1; j <= k - 1; ++j) CHECK(d.a[j - 1] == 2 * j + 2);
    }
    for (int k = 3; k <= 12; ++k) {
        Degrees d = degrees_of({AdeFamily::D, k});
        CHECK((d.p == 2 * k && d.q == 2 * k - 2 && d.r == 4 && d.s == 4 * k));
        CHECK(d.p + d.q + d.r - d.s == 2);
        CHECK(static_cast<int>(d.a.size()) == k + 1);
    }
    Degrees e6 = degrees_of({AdeFamily::E6, 0}), e7 = degrees_of({AdeFamily::E7, 0}), e8 = degrees_of({AdeFamily::E8, 0});
    CHECK((e6.p == 12 && e6.q == 8 && e6.r == 6 && e6.s == 24));
    CHECK((e7.p == 18 && e7.q == 12 && e7.r == 8 && e7.s == 36));
    CHECK((e8.p == 30 && e8.q == 20 && e8.r == 12 && e8.s == 60));
    for (const auto& d : {e6, e7, e8}) CHECK(d.p + d.q + d.r - d.s == 2);
    CHECK(e6.a.size() == 6);
    CHECK(e7.a.size() == 7);
    CHECK(e8.a.size() == 8);
    // E8: a_1 multiplies y z^3 of weight 56
    CHECK(e8.a[0] == 4);
    CHECK(e8.a[7] == 60);
}

TEST_CASE("type parsing") {
    CHECK(KleinianType::parse("A3").k == 3);
    CHECK(KleinianType::parse("d5").family == AdeFamily::D);
    CHECK(KleinianType::parse("E7").family == AdeFamily::E7);
    CHECK(KleinianType::parse("E8").name() == "E8");
    CHECK_THROWS_AS(KleinianType::parse("E9"), Error);
    CHECK_THROWS_AS(KleinianType::parse("D2"), Error);
    CHECK_THROWS_AS(KleinianType::parse("A0"), Error);
    CHECK_THROWS_AS(KleinianType::parse("Ax"), Error);
}

TEST_CASE("relation residual examples") {
    AleTwistorData undeformed{{AdeFamily::A, 2}, {Polynomial{}}};
    AleCurve c{bs(2, Polynomial::monomial(2)), bs(2, Polynomial{1.0}), bs(2, Polynomial::monomial(1))};
    CHECK(relation_residual(undeformed, c).is_zero());

    AleTwistorData d{{AdeFamily::A, 2}, {Polynomial{-1.0}}};
    AleCurve e{bs(2, Polynomial{-1.0, 1.0}), bs(2, Polynomial{1.0, 1.0}), bs(2, Polynomial::monomial(1))};
    CHECK(relation_residual(d, e).norm() < 1e-15);
    AleCurve f = e;
    f.y = bs(2, Polynomial{1.1, 1.0});
    Polynomial r = relation_residual(d, f);
    // 0.1 (lambda - 1)
    CHECK(std::abs(r[0] + 0.1) < 1e-14);
    CHECK(std::abs(r[1] - 0.1) < 1e-14);

    AleCurve wrong{bs(3, Polynomial{}), bs(2, Polynomial{}), bs(2, Polynomial{})};
    CHECK_THROWS_AS(relation_residual(d, wrong), Error);
    CHECK_THROWS_AS(relation_residual({{AdeFamily::A, 2}, {}}, e), Error);
    CHECK_THROWS_AS(relation_residual({{AdeFamily::A, 2}, {Polynomial::monomial(5)}}, e), Error);
}

TEST_CASE("D and E relations vanish on constructed curves") {
    for (KleinianType t : {KleinianType{AdeFamily::D, 4}, KleinianType{AdeFamily::E6, 0}, KleinianType{AdeFamily::E7, 0},
                           KleinianType{AdeFamily::E8, 0}}) {
        Degrees dg = degrees_of(t);
        AleTwistorData d = random_twistor_data(t);
        AleCurve c{bs(dg.p, random_poly(dg.p)), bs(dg.q, random_poly(dg.q)), bs(dg.r, random_poly(dg.r))};
        // absorb the value into the constant deformation coefficient
        Polynomial r = relation_residual(d, c);
        CHECK(r.degree() <= dg.s);
        d.a.back() = d.a.back() - r;
        Polynomial r2 = relation_residual(d, c);
        CHECK(r2.norm() < 1e-9 * r.norm());
        CHECK(linearized_kernel_dim(d, c) == dg.p + dg.q + dg.r + 3 - (dg.s + 1));
    }
}

TEST_CASE("A_k factorization examples") {
    AleTwistorData d{{AdeFamily::A, 2}, {Polynomial{-1.0}}};
    auto s = ak_curve_solve(d, bs(2, Polynomial::monomial(1)));
    // R = lambda^2 - 1 as a section of O(4) has projective roots {1, -1, inf, inf}
    REQUIRE(s.curves.size() == 4);
    int linear = 0;
    for (const auto& c : s.curves) {
        CHECK(relation_residual(d, c).norm() < 1e-12);
        if (c.x.poly().degree() != 1) continue;
        ++linear;
        cd root = -c.x.poly()[0];
        // x = lambda - 1, y = lambda + 1 or the other way round
        CHECK(std::abs(std::abs(root) - 1.0) < 1e-12);
        CHECK(Polynomial::distance(c.y.poly(), Polynomial{root, 1.0}) < 1e-12);
    }
    CHECK(linear == 2);

    AleTwistorData a1{{AdeFamily::A, 1}, {}};
    auto t = ak_curve_solve(a1, bs(2, Polynomial::monomial(1)));
    REQUIRE(t.curves.size() == 2);
    // {x = lambda, y = 1} then {x = 1, y = lambda}
    CHECK(Polynomial::distance(t.curves[0].x.poly(), Polynomial::monomial(1)) < 1e-14);
    CHECK(Polynomial::distance(t.curves[0].y.poly(), Polynomial{1.0}) < 1e-14);
    CHECK(Polynomial::distance(t.curves[1].x.poly(), Polynomial{1.0}) < 1e-14);
    CHECK(Polynomial::distance(t.curves[1].y.poly(), Polynomial::monomial(1)) < 1e-14);

    AleTwistorData c1{{AdeFamily::A, 2}, {Polynomial{1.0}}};
    auto u = ak_curve_solve(c1, bs(2, Polynomial{}));
    REQUIRE(u.curves.size() == 1);
    CHECK(Polynomial::distance(u.curves[0].x.poly(), Polynomial{1.0}) == 0.0);
    CHECK(Polynomial::distance(u.curves[0].y.poly(), Polynomial{1.0}) == 0.0);

    CHECK(ak_curve_solve({{AdeFamily::A, 2}, {Polynomial{}}}, bs(2, Polynomial{})).degenerate);
    CHECK_THROWS_AS(ak_curve_solve({{AdeFamily::D, 3}, {}}, bs(2, Polynomial{})), Error);
}

TEST_CASE("A_k factorization round trip") {
    for (int k = 1; k <= 5; ++k) {
        for (int trial = 0; trial < 5; ++trial) {
            AleTwistorData d = random_twistor_data({AdeFamily::A, k});
            auto s = ak_curve_solve(d, bs(2, random_poly(2)));
            REQUIRE_FALSE(s.degenerate);
            // distinct roots: every k-subset of 2k is a distinct splitting
            long long expect = 1;
            for (int i = 1; i <= k; ++i) expect = expect * (k + i) / i;
            CHECK(static_cast<long long>(s.curves.size()) == expect);
            for (const auto& c : s.curves) {
                Polynomial direct = c.x.poly() * c.y.poly() - s.R;
                CHECK(direct.norm() < 1e-9 * s.R.norm());
                CHECK(relation_residual(d, c).norm() < 1e-9 * s.R.norm());
            }
        }
    }
    // a repeated root cuts the count to the distinct multisets
    AleTwistorData d{{AdeFamily::A, 2}, {Polynomial{}}};
    auto s = ak_curve_solve(d, bs(2, Polynomial{-1.0, 0.0, 1.0}));
    // R = (lambda - 1)^2 (lambda + 1)^2: splittings {1,1}, {1,-1}, {-1,-1}
    CHECK(s.curves.size() == 3);
}

TEST_CASE("A_2 moduli count") {
    for (int trial = 0; trial < 5; ++trial) {
        AleTwistorData d = random_twistor_data({AdeFamily::A, 2});
        auto s = ak_curve_solve(d, bs(2, random_poly(2)));
        REQUIRE(!s.curves.empty());
        CHECK(linearized_kernel_dim(d, s.curves[0]) == 4);
    }
}

TEST_CASE("lift through the branch locus") {
    AleTwistorData d{{AdeFamily::A, 2}, {Polynomial{}}};
    // x y = (lambda^2 + 1)^2
    auto z = lift_tangency_check(d, bs(2, Polynomial{1.0, 0.0, 1.0}), bs(2, Polynomial{1.0, 0.0, 1.0}));
    REQUIRE(z);
    CHECK(Polynomial::distance(*z, Polynomial{1.0, 0.0, 1.0}) < 1e-12);
    // x y = lambda^3
    CHECK_FALSE(lift_tangency_check(d, bs(2, Polynomial::monomial(2)), bs(2, Polynomial::monomial(1))));
    auto zero = lift_tangency_check(d, bs(2, Polynomial{}), bs(2, Polynomial{1.0}));
    REQUIRE(zero);
    CHECK(zero->is_zero());
    AleTwistorData d1{{AdeFamily::A, 2}, {Polynomial{1.0, 0.0, 2.0, 0.0, 1.0}}};
    auto w = lift_tangency_check(d1, bs(2, Polynomial{1.0, 0.0, 1.0}), bs(2, Polynomial{1.0, 0.0, 1.0}));
    REQUIRE(w);
    CHECK(w->is_zero());
}

TEST_CASE("lift test agrees with the multiplicity oracle") {
    int squares = 0;
    for (int t = 0; t < 200; ++t) {
        AleTwistorData d{{AdeFamily::A, 2}, {random_poly(4)}};
        BundleSection x = bs(2, random_poly(2));
        BundleSection y = bs(2, random_poly(2));
        if (t % 2 == 0) {
            // engineer x y - a_1 = q^2
            Polynomial q = t % 4 == 0 ? random_poly(2) : random_poly(1);
            d.a[0] = x.poly() * y.poly() - q * q;
            ++squares;
        }
        Polynomial quartic = x.poly() * y.poly() - d.a[0];
        auto z = lift_tangency_check(d, x, y);
        CHECK(z.has_value() == all_even(quartic));
        if (z) CHECK(Polynomial::distance(*z * *z, quartic) < 1e-9 * quartic.norm());
    }
    CHECK(squares == 100);
}
