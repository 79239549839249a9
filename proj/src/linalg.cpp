#include "twistor/linalg.hpp"

#include <algorithm>

namespace twistor {

double max_norm(const Eigen::MatrixXcd& A) {
    return A.size() == 0 ? 0.0 : A.cwiseAbs().maxCoeff();
}

LinearSolution linear_solve(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b,
                            const LinearSolveOptions& opt) {
    const long m = A.rows(), n = A.cols();
    LinearSolution out;
    if (n == 0) {
        out.particular = Eigen::VectorXcd(0);
        out.residual = b.size() ? b.cwiseAbs().maxCoeff() : 0.0;
        out.consistent = out.residual == 0.0;
        return out;
    }
    if (m == 0) {
        out.particular = Eigen::VectorXcd::Zero(n);
        for (long j = 0; j < n; ++j) out.null_space.push_back(Eigen::VectorXcd::Unit(n, j));
        return out;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double smax = s.size() ? s(0) : 0.0;
    int r = 0;
    for (long i = 0; i < s.size(); ++i)
        if (s(i) > opt.rank_tol * smax && s(i) > 0.0) ++r;
    out.rank = r;

    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
    Eigen::VectorXcd ub = svd.matrixU().adjoint() * b;
    for (int i = 0; i < r; ++i) x += (ub(i) / s(i)) * svd.matrixV().col(i);
    out.particular = x;
    for (long j = r; j < n; ++j) out.null_space.push_back(svd.matrixV().col(j));

    Eigen::VectorXcd res = A * x - b;
    out.residual = res.cwiseAbs().maxCoeff();
    const double scale = max_norm(A) * x.cwiseAbs().maxCoeff() + b.cwiseAbs().maxCoeff();
    out.consistent = out.residual <= opt.residual_tol * scale;
    return out;
}

int numerical_rank(const Eigen::MatrixXcd& A, double rel_tol) {
    if (A.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
    const auto& s = svd.singularValues();
    int r = 0;
    for (long i = 0; i < s.size(); ++i)
        if (s(i) > rel_tol * s(0) && s(i) > 0.0) ++r;
    return r;
}

}  // namespace twistor
