#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "twistor/expr.hpp"

namespace twistor {

// names of the jet variables for order n: x, y, y1, ..., y{n-1}
std::vector<std::string> jet_variable_names(int n);

// y^(n) = F(x, y, y', ..., y^(n-1)); variable 0 is x, variable i+1 is y^(i)
struct OdeRhs {
    int n = 2;
    Expr expr;
    static OdeRhs parse(int n, const std::string& text);
};

// d/dx = d_x + sum_{i<n-1} y^(i+1) d_{y^(i)} + F d_{y^(n-1)}, simplified
Expr total_derivative(const Expr& g, const OdeRhs& F);

// the displayed conditions: one each for n = 2, 3 and two for n = 4
std::vector<Expr> wunschmann_conditions(const OdeRhs& F);

// the same conditions evaluated numerically over truncated jets of order 2n
std::vector<cd> condition_values(const OdeRhs& F, const std::vector<cd>& point);

struct SampleOptions {
    int samples = 100;
    double tol = 1e-8;
    std::uint64_t seed = 1;
    double margin = 0.1;  // minimum distance from singularities
};

struct WunschmannReport {
    int n = 0;
    std::vector<std::vector<cd>> points;
    std::vector<std::vector<cd>> residuals;  // residuals[condition][sample]
    std::vector<bool> exact;                 // condition simplified to a constant
    std::vector<std::string> simplified;     // the simplified condition, when small
    int skipped = 0;
    double max_abs = 0.0;
    double tol = 0.0;
    bool verdict = false;
};

WunschmannReport check_n2(const OdeRhs& F, const SampleOptions& opt = {});
WunschmannReport check_n3(const OdeRhs& F, const SampleOptions& opt = {});
WunschmannReport check_n4(const OdeRhs& F, const SampleOptions& opt = {});
WunschmannReport check_wunschmann(const OdeRhs& F, const SampleOptions& opt = {});

}  // namespace twistor
