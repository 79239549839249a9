#include "twistor/bundles.hpp"

#include "twistor/error.hpp"

namespace twistor {

int h0_dim(int n) { return n < 0 ? 0 : n + 1; }

int h1_dim(int n) { return n >= -1 ? 0 : -n - 1; }

BundleSection::BundleSection(int degree, Polynomial poly) : n_(degree), p_(std::move(poly)) {
    if (degree < 0) throw Error("O(n) has no nonzero sections for n < 0");
    if (p_.degree() > degree) throw Error("section polynomial exceeds the bundle degree");
}

cd BundleSection::eval(const ProjPoint& pt) const {
    if (pt.infinity) return p_[n_];
    return p_(pt.lambda);
}

Polynomial chart_transition(const BundleSection& s) { return s.poly().reversed(s.degree()); }

BundleType::BundleType(std::vector<int> ks) : ks_(std::move(ks)) {
    if (ks_.empty()) throw Error("bundle type needs at least one summand");
    for (size_t i = 0; i < ks_.size(); ++i) {
        if (ks_[i] < 0) throw Error("summand degrees must be non-negative");
        if (i > 0 && ks_[i] > ks_[i - 1]) throw Error("summand degrees must be non-increasing");
    }
}

int moduli_dimension(const BundleType& t) {
    int d = 0;
    for (int k : t.ks()) d += k + 1;
    return d;
}

VectorSection::VectorSection(BundleType t, std::vector<BundleSection> comps)
    : t_(std::move(t)), c_(std::move(comps)) {
    if (static_cast<int>(c_.size()) != t_.rank()) throw Error("one component per summand required");
    for (int i = 0; i < t_.rank(); ++i)
        if (c_[i].degree() != t_.ks()[i]) throw Error("component degree does not match bundle type");
}

VectorSection VectorSection::from_coords(const BundleType& t, const Eigen::VectorXcd& c) {
    if (c.size() != moduli_dimension(t)) throw Error("coordinate vector has the wrong length");
    std::vector<BundleSection> comps;
    long pos = 0;
    for (int k : t.ks()) {
        std::vector<cd> v(c.data() + pos, c.data() + pos + k + 1);
        comps.emplace_back(k, Polynomial(v));
        pos += k + 1;
    }
    return VectorSection(t, comps);
}

VectorSection VectorSection::zero(const BundleType& t) {
    return from_coords(t, Eigen::VectorXcd::Zero(moduli_dimension(t)));
}

Eigen::VectorXcd VectorSection::coords() const {
    Eigen::VectorXcd c(moduli_dimension(t_));
    long pos = 0;
    for (const auto& s : c_) {
        for (int j = 0; j <= s.degree(); ++j) c(pos + j) = s.poly()[j];
        pos += s.degree() + 1;
    }
    return c;
}

std::vector<cd> VectorSection::fibre(const ProjPoint& pt) const {
    std::vector<cd> v;
    for (const auto& s : c_) v.push_back(s.eval(pt));
    return v;
}

std::vector<VectorSection> monomial_basis(const BundleType& t) {
    const int n = moduli_dimension(t);
    std::vector<VectorSection> out;
    for (int i = 0; i < n; ++i) out.push_back(VectorSection::from_coords(t, Eigen::VectorXcd::Unit(n, i)));
    return out;
}

Eigen::RowVectorXcd evaluation_row(const BundleType& t, int summand, const ProjPoint& pt) {
    Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(moduli_dimension(t));
    int pos = 0;
    for (int i = 0; i < summand; ++i) pos += t.ks()[i] + 1;
    const int k = t.ks().at(summand);
    if (pt.infinity) {
        row(pos + k) = 1.0;
    } else {
        cd p = 1.0;
        for (int j = 0; j <= k; ++j, p *= pt.lambda) row(pos + j) = p;
    }
    return row;
}

nlohmann::json to_json(const VectorSection& s) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : s.components()) comps.push_back(to_json(c.poly()));
    return {{"ks", s.type().ks()}, {"components", comps}};
}

VectorSection vector_section_from_json(const nlohmann::json& j) {
    BundleType t(j.at("ks").get<std::vector<int>>());
    std::vector<BundleSection> comps;
    const auto& arr = j.at("components");
    if (static_cast<int>(arr.size()) != t.rank()) throw Error("one component per summand required");
    for (int i = 0; i < t.rank(); ++i) comps.emplace_back(t.ks()[i], polynomial_from_json(arr[i]));
    return VectorSection(t, comps);
}

}  // namespace twistor
