#include "twistor/newton.hpp"

#include <cmath>

namespace twistor {

void jet_linearize(const JetResidual& f, const Eigen::VectorXcd& x, Eigen::VectorXcd& value,
                   Eigen::MatrixXcd& jac) {
    const int n = static_cast<int>(x.size());
    std::vector<Jet> in;
    in.reserve(n);
    for (int i = 0; i < n; ++i) in.push_back(Jet::variable(n, 1, i, x(i)));
    std::vector<Jet> out = f(in);
    const int m = static_cast<int>(out.size());
    value.resize(m);
    jac.resize(m, n);
    std::vector<int> e(n, 0);
    for (int r = 0; r < m; ++r) {
        value(r) = out[r].value();
        for (int i = 0; i < n; ++i) {
            e[i] = 1;
            jac(r, i) = out[r].order() >= 1 ? out[r].coeff(e) : cd(0.0);
            e[i] = 0;
        }
    }
}

namespace {

double inf_norm(const Eigen::VectorXcd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

NewtonResult newton_solve(const JetResidual& f, const Eigen::VectorXcd& start,
                          const NewtonOptions& opt) {
    NewtonResult res;
    res.x = start;
    Eigen::VectorXcd val;
    Eigen::MatrixXcd jac;
    for (int it = 0; it <= opt.max_iter; ++it) {
        jet_linearize(f, res.x, val, jac);
        res.residual = inf_norm(val);
        res.iterations = it;
        if (!std::isfinite(res.residual)) break;
        if (res.residual < opt.tol) {
            res.status = NewtonResult::Status::Converged;
            return res;
        }
        if (it == opt.max_iter) break;
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& s = svd.singularValues();
        int rank = 0;
        for (long i = 0; i < s.size(); ++i)
            if (s(i) > 1e-13 * s(0) && s(i) > 0.0) ++rank;
        if (rank < std::min(jac.rows(), jac.cols())) {
            res.status = NewtonResult::Status::Singular;
            return res;
        }
        svd.setThreshold(1e-13);
        Eigen::VectorXcd step = svd.solve(-val);
        // backtrack when the full step makes things worse
        double t = 1.0;
        Eigen::VectorXcd trial = res.x + step;
        for (int k = 0; k < 12; ++k) {
            Eigen::VectorXcd tv;
            Eigen::MatrixXcd tj;
            jet_linearize(f, trial, tv, tj);
            if (std::isfinite(inf_norm(tv)) && inf_norm(tv) < res.residual) break;
            t *= 0.5;
            trial = res.x + t * step;
        }
        res.x = trial;
    }
    res.status = NewtonResult::Status::NoConvergence;
    return res;
}

}  // namespace twistor
