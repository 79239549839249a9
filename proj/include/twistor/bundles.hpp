#pragma once

#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "twistor/polynomial.hpp"

namespace twistor {

int h0_dim(int n);
int h1_dim(int n);

// A point of the projective line in one of the two standard charts.
struct ProjPoint {
    cd lambda = 0.0;
    bool infinity = false;
    static ProjPoint finite(cd l) { return {l, false}; }
    static ProjPoint at_infinity() { return {0.0, true}; }
};

// Section of O(n), stored in the lambda chart.
class BundleSection {
public:
    BundleSection(int degree, Polynomial poly);
    int degree() const { return n_; }
    const Polynomial& poly() const { return p_; }
    // value in the chart containing the point; at infinity this is f_inf(0)
    cd eval(const ProjPoint& pt) const;

private:
    int n_;
    Polynomial p_;
};

// f_inf(l') = l'^n f_0(1/l')
Polynomial chart_transition(const BundleSection& s);

class BundleType {
public:
    explicit BundleType(std::vector<int> ks);
    const std::vector<int>& ks() const { return ks_; }
    int rank() const { return static_cast<int>(ks_.size()); }
    bool operator==(const BundleType& o) const { return ks_ == o.ks_; }

private:
    std::vector<int> ks_;
};

int moduli_dimension(const BundleType& t);

class VectorSection {
public:
    VectorSection(BundleType t, std::vector<BundleSection> comps);
    // coordinates are the coefficients of each summand in turn, ascending degree
    static VectorSection from_coords(const BundleType& t, const Eigen::VectorXcd& c);
    static VectorSection zero(const BundleType& t);

    const BundleType& type() const { return t_; }
    const std::vector<BundleSection>& components() const { return c_; }
    Eigen::VectorXcd coords() const;
    std::vector<cd> fibre(const ProjPoint& pt) const;

private:
    BundleType t_;
    std::vector<BundleSection> c_;
};

// monomial sections lambda^j e_i, in coordinate order
std::vector<VectorSection> monomial_basis(const BundleType& t);

// the linear functional "value of summand i at pt" on coordinates
Eigen::RowVectorXcd evaluation_row(const BundleType& t, int summand, const ProjPoint& pt);

nlohmann::json to_json(const VectorSection& s);
VectorSection vector_section_from_json(const nlohmann::json& j);

}  // namespace twistor
