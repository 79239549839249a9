#pragma once

#include <vector>

#include "twistor/bundles.hpp"
#include "twistor/newton.hpp"

namespace twistor {

struct AlphaSubspace {
    BundleType type;
    ProjPoint point;
    std::vector<VectorSection> basis;
    int dimension() const { return static_cast<int>(basis.size()); }
};

// sections vanishing at pt
AlphaSubspace alpha_subspace(const BundleType& t, const ProjPoint& pt);

// {w, lambda w} for w with component i of degree <= k_i - 1
std::vector<VectorSection> beta_plane(const BundleType& t, const std::vector<Polynomial>& w);

struct IncidenceCondition {
    ProjPoint base;
    std::vector<cd> fibre;
};

struct AffineFamily {
    bool consistent = true;
    VectorSection particular;
    std::vector<VectorSection> basis;
    int rank = 0;
    double residual = 0.0;
    int dimension() const { return consistent ? static_cast<int>(basis.size()) : -1; }
};

AffineFamily solve_incidence(const BundleType& t, const std::vector<IncidenceCondition>& conds);

// One term coeff * lambda^lambda_power * prod z_i^exps[i] of a polynomial
// function on the total space; z_i is the fibre coordinate of summand i.
struct HyperTerm {
    cd coeff;
    int lambda_power = 0;
    std::vector<int> exps;
};

struct TangencyCondition {
    std::vector<HyperTerm> terms;
    int order = 1;
};

// g(lambda) = G(lambda, s(lambda))
Polynomial compose(const TangencyCondition& tc, const VectorSection& s);
// degree of the line bundle g is a section of
int composite_degree(const TangencyCondition& tc, const BundleType& t);

struct TangencyResiduals {
    std::vector<cd> values;
    std::vector<ProjPoint> points;  // tracked intersection points
    bool degenerate = false;        // s lies inside the hypersurface
    double max_abs() const;
};

TangencyResiduals tangency_residuals(const VectorSection& s, const TangencyCondition& tc);

struct TangencySolution {
    VectorSection section;
    NewtonResult newton;
    std::vector<std::vector<cd>> points;  // per condition
};

// Newton on section coefficients together with the tangency points, which
// are carried along as unknowns. Points start at the clustered roots of g.
TangencySolution solve_tangency(const BundleType& t, const std::vector<TangencyCondition>& conds,
                                const VectorSection& start, const NewtonOptions& opt = {});

}  // namespace twistor
