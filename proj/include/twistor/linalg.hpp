#pragma once

#include <vector>

#include <Eigen/Dense>

namespace twistor {

// Affine solution set of A x = b.
struct LinearSolution {
    bool consistent = true;
    Eigen::VectorXcd particular;               // minimum-norm least-squares solution
    std::vector<Eigen::VectorXcd> null_space;  // orthonormal basis
    double residual = 0.0;                     // max |A x - b| at the particular solution
    int rank = 0;
    int dimension() const { return consistent ? static_cast<int>(null_space.size()) : -1; }
};

struct LinearSolveOptions {
    double rank_tol = 1e-11;     // singular values below rank_tol * s_max count as zero
    double residual_tol = 1e-10; // relative to |A||x| + |b|
};

LinearSolution linear_solve(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b,
                            const LinearSolveOptions& opt = {});

// numerical rank at the same relative threshold
int numerical_rank(const Eigen::MatrixXcd& A, double rel_tol = 1e-11);

double max_norm(const Eigen::MatrixXcd& A);

}  // namespace twistor
