#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "twistor/polynomial.hpp"

namespace twistor {

enum class Equation { NLS, KdV };

Equation equation_from_string(const std::string& s);
std::string to_string(Equation e);

struct SectionCount {
    int total, conditions, remaining;
};

// sections of the rank-2 bundle over a conic, incidence conditions, survivors
SectionCount section_count_check(int k);

struct SolitonSpectrum {
    Equation equation = Equation::NLS;
    std::vector<cd> poles;                     // upper half plane, distinct
    std::vector<Eigen::Vector2cd> directions;  // one per pole
    void validate() const;
};

// Lambda(lambda): diag(1,-1) for NLS; [[0,1],[1/w,0]] in w = -i lambda for KdV
Eigen::Matrix2cd lambda_matrix(Equation e, cd lambda);

// The dressed frame at one spacetime point.
//
// NLS: Psi(lambda) = chi_k ... chi_1 with chi_i = I + (l_i - conj l_i)/(lambda - l_i) P_i,
// vacuum exp(-i(lambda x + 2 lambda^2 t) sigma3).
// KdV: in w = -i lambda, Psi = sum_j N_j w^-j is built by iterated Darboux
// factors from the vacuum exp((x w - 4 t w^2) Lambda(w)); its only pole is at
// w = 0 and it vanishes in determinant at each w_i.
struct DressedFrame {
    Equation equation = Equation::NLS;
    double x = 0.0, t = 0.0;
    std::vector<cd> poles;
    std::vector<Eigen::Matrix2cd> projections;  // NLS
    std::vector<Eigen::Matrix2cd> laurent;      // KdV, N_0 .. N_k
    Eigen::Matrix2cd laurent1_x = Eigen::Matrix2cd::Zero();  // KdV, d/dx N_1

    int k() const { return static_cast<int>(poles.size()); }
    Eigen::Matrix2cd eval(cd lambda) const;
    // coefficient of 1/lambda at lambda = infinity
    Eigen::Matrix2cd m1() const;
    cd det(cd lambda) const;
    // NLS only: residue at poles[i]
    Eigen::Matrix2cd residue(int i) const;
};

DressedFrame build_frame(const SolitonSpectrum& spec, double x, double t);

// exp(mu Lambda) for the vacuum of each equation
Eigen::Matrix2cd vacuum(Equation e, cd lambda, double x, double t);

// psi = 2i (m1)_12 for NLS, u = 2 d/dx (N_1)_21 for KdV
cd extract_field(const DressedFrame& f);

struct FieldGrid {
    Equation equation = Equation::NLS;
    double x0 = 0.0, t0 = 0.0, h = 0.01;
    int nx = 0, nt = 0;
    std::vector<cd> values;  // index it * nx + ix
    cd at(int ix, int it) const { return values[static_cast<size_t>(it) * nx + ix]; }
    double x(int ix) const { return x0 + ix * h; }
    double t(int it) const { return t0 + it * h; }
};

FieldGrid field_grid(const SolitonSpectrum& spec, double x0, int nx, double t0, int nt, double h);

// NLS: i psi_t + psi_xx + 2|psi|^2 psi; KdV: u_t - 6 u u_x + u_xxx.
// Max modulus over interior points, second-order central differences.
double pde_residual(const FieldGrid& g);

// heights of the local maxima of |field| on one time row, above `floor`
std::vector<double> hump_amplitudes(const FieldGrid& g, int it, double floor = 1e-3);

std::string to_csv(const FieldGrid& g);

}  // namespace twistor
