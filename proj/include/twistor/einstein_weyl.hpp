#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "twistor/polynomial.hpp"

namespace twistor {

struct PedersenParams {
    cd a = 0.0, b = 0.0, c = 0.0;
    Polynomial quadratic() const { return Polynomial{c, b, a}; }
};

// zeta = P(lambda)/Q(lambda) on the quadric, deg P, deg Q <= n
struct QuadricCurve {
    int n = 0;
    Polynomial P, Q;
};

enum class CurveFlag {
    QZero,          // Q vanishes identically
    PZero,          // P vanishes identically
    ResultantZero,  // P and Q share a projective root
    RepeatedRoots,  // the quadratic has a double root
    LeadingZero     // a = 0, the quadratic drops degree
};

std::string to_string(CurveFlag f);

struct PedersenResult {
    QuadricCurve curve;
    std::vector<CurveFlag> flags;
    cd resultant = 0.0;
    // QZero, PZero and ResultantZero make the curve unusable
    bool degenerate() const;
    bool has(CurveFlag f) const;
};

// lambda^n Q - P = (a lambda^2 + b lambda + c)^n with [lambda^n] P = 0
PedersenResult pedersen_solve(int n, const PedersenParams& prm);

// resultant of P and Q as binary forms of degree n
cd form_resultant(const Polynomial& P, const Polynomial& Q, int n);

struct MeetingPoint {
    cd lambda = 0.0;
    bool infinity = false;
    int multiplicity = 0;
};

struct TangencyReport {
    bool ok = false;
    double rel_error = 0.0;
    std::vector<MeetingPoint> points;  // zeros of lambda^n Q - P as a section of O(2n)
};

TangencyReport tangency_verify(const QuadricCurve& c, const PedersenParams& prm, double tol = 1e-10);

// d(P coefficients, Q coefficients)/d(a, b, c), a (2n+2) x 3 matrix
Eigen::MatrixXcd pedersen_jacobian(int n, const PedersenParams& prm);

struct BlowupCount {
    int family_dim = 0;     // projective dimension of curves through the point
    int normal_degree = 0;  // 2n - 1
    int h0 = 0;             // h0(O(2n - 1))
    bool consistent() const { return family_dim == h0; }
};

// (1,n) curves P - zeta0 Q = 0 at lambda0
BlowupCount blowup_family_dim(int n, cd lambda0, cd zeta0);

struct LiftCount {
    int codim = 0;       // rank of the incidence gradient in (a, b, c)
    int family_dim = 0;  // 3 - codim
    int h0 = 0;          // h0(O(2)) on the cover
};

// Pedersen curves whose lift w^n = (zeta - lambda^n) passes through (lambda0, w0):
// (a lambda0^2 + b lambda0 + c)^n + w0^n Q(lambda0) = 0
cd lift_incidence(int n, const PedersenParams& prm, cd lambda0, cd w0);
LiftCount lift_incidence_count(int n, const PedersenParams& prm, cd lambda0, cd w0);

}  // namespace twistor
