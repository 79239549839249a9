#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "twistor/bundles.hpp"
#include "twistor/polynomial.hpp"

namespace twistor {

// eta = alpha + beta lambda + gamma lambda^2, a section of O(2)
struct QuadraticCurve {
    cd alpha = 0.0, beta = 0.0, gamma = 0.0;
    Polynomial poly() const { return Polynomial{alpha, beta, gamma}; }
};

// image of the curve under (eta, lambda) -> (-conj(eta)/conj(lambda)^2, -1/conj(lambda))
QuadraticCurve tau_transform(const QuadraticCurve& c);
bool tau_invariance_check(const QuadraticCurve& c, double tol = 1e-12);

// p_x(lambda) = (x1 + i x2) - 2 x3 lambda - (x1 - i x2) lambda^2
QuadraticCurve real_section(const std::array<double, 3>& x);

// psi(eta, lambda) = eta^k + a_1(lambda) eta^{k-1} + ... + a_k(lambda), deg a_j <= 2j
class SpectralCurve {
public:
    explicit SpectralCurve(std::vector<Polynomial> a);
    int k() const { return static_cast<int>(a_.size()); }
    const std::vector<Polynomial>& coeffs() const { return a_; }
    // psi(eta(lambda), lambda) as a polynomial of degree <= 2k
    Polynomial compose(const Polynomial& eta) const;
    // eta = c(lambda), i.e. a_1 = -c
    static SpectralCurve graph(const QuadraticCurve& c);

private:
    std::vector<Polynomial> a_;
};

SpectralCurve tau_transform(const SpectralCurve& s);
bool tau_invariance_check(const SpectralCurve& s, double tol = 1e-12);

// m p(lambda)/lambda = f0(lambda) - finf(1/lambda), finf stored as a polynomial in 1/lambda
struct BundleSplit {
    Polynomial f0, finf;
};

BundleSplit l_bundle_split(const QuadraticCurve& p, int m);

// |exp(f0) exp(m p/lambda)^-1 exp(finf)^-1 - 1| at one overlap point
double split_overlap_defect(const BundleSplit& s, const QuadraticCurve& p, int m, cd lambda);

struct Intersection {
    ProjPoint point;
    int multiplicity = 1;
};

struct IntersectionReport {
    bool degenerate = false;  // the section lies on the spectral curve
    std::vector<Intersection> points;
    int total() const;
};

IntersectionReport spectral_intersections(const SpectralCurve& s, const std::array<double, 3>& x);

// Rows of the incidence system on the sections of L(1) + L*(1) over sigma_x,
// unknowns (a0, a1, b0, b1) of the two degree-1 polynomial factors.
Eigen::MatrixXcd monopole_incidence_system(const SpectralCurve& s, const std::array<double, 3>& x);

struct SectionSpace {
    std::vector<Eigen::VectorXcd> basis;
    int rank = 0;
    int dimension() const { return static_cast<int>(basis.size()); }
};

// null space of an incidence system; throws when its rank is below its row count
SectionSpace section_space(const Eigen::MatrixXcd& rows, double rank_tol = 1e-10);

SectionSpace monopole_section_space(const SpectralCurve& s, const std::array<double, 3>& x);

}  // namespace twistor
