#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "twistor/jet.hpp"

namespace twistor {

// Residual evaluated on first-order jets, one jet variable per unknown; the
// jets' linear coefficients supply the Jacobian.
using JetResidual = std::function<std::vector<Jet>(const std::vector<Jet>&)>;

struct NewtonOptions {
    double tol = 1e-12;
    int max_iter = 60;
};

struct NewtonResult {
    enum class Status { Converged, NoConvergence, Singular };
    Status status = Status::NoConvergence;
    Eigen::VectorXcd x;
    double residual = 0.0;  // max-norm at x
    int iterations = 0;
    bool ok() const { return status == Status::Converged; }
};

// Gauss-Newton with minimum-norm steps, so underdetermined systems converge to
// a nearby point of the solution set.
NewtonResult newton_solve(const JetResidual& f, const Eigen::VectorXcd& start,
                          const NewtonOptions& opt = {});

// value and Jacobian of f at x
void jet_linearize(const JetResidual& f, const Eigen::VectorXcd& x, Eigen::VectorXcd& value,
                   Eigen::MatrixXcd& jac);

}  // namespace twistor
