#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twistor/bundles.hpp"
#include "twistor/polynomial.hpp"

namespace twistor {

enum class AdeFamily { A, D, E6, E7, E8 };

// A: relation xy - z^k, k >= 1. D: x^2 + y^2 z + z^k, k >= 3 (the D_{k-1} row).
struct KleinianType {
    AdeFamily family = AdeFamily::A;
    int k = 1;
    void validate() const;
    // "A3", "D5", "E6", "E7", "E8"; the number after A or D is k
    static KleinianType parse(const std::string& s);
    std::string name() const;
};

// One monomial of the deformed relation: coeff * a_index(lambda) * x^ex y^ey z^ez,
// with a_index = 0 for the undeformed part (a_0 = 1).
struct RelationTerm {
    double coeff;
    int a_index;
    int ex, ey, ez;
};

std::vector<RelationTerm> relation_terms(const KleinianType& t);
// number of deformation coefficients a_1 .. a_r
int deformation_count(const KleinianType& t);

struct Degrees {
    int p, q, r, s;
    std::vector<int> a;  // deg a_i, i = 1..r
};

// weights from homogeneity of the relation plus first Chern class p + q + r - s = 2
Degrees degrees_of(const KleinianType& t);

struct AleTwistorData {
    KleinianType type;
    std::vector<Polynomial> a;  // a_1 .. a_r as sections of O(deg a_i)
    void validate() const;
};

struct AleCurve {
    BundleSection x, y, z;
};

// F(x(lambda), y(lambda), z(lambda)) including the deformation terms
Polynomial relation_residual(const AleTwistorData& d, const AleCurve& c);

// dF/dv along the curve, v in {0: x, 1: y, 2: z}
Polynomial relation_partial(const AleTwistorData& d, const AleCurve& c, int v);

// kernel dimension of the linearized residual in the curve coefficients
int linearized_kernel_dim(const AleTwistorData& d, const AleCurve& c);

struct AkSolution {
    bool degenerate = false;
    Polynomial R;  // z^k + sum_j a_j z^{k-1-j}
    std::vector<AleCurve> curves;
};

// all splittings R = x y with deg x = deg y = k as sections, x monic
AkSolution ak_curve_solve(const AleTwistorData& d, const BundleSection& z);

// z with z^2 = x y - a_1 for A_2, or nullopt when x y - a_1 is not a square
std::optional<Polynomial> lift_tangency_check(const AleTwistorData& d, const BundleSection& x, const BundleSection& y);

}  // namespace twistor
