#include "twistor/ward.hpp"

#include <cmath>
#include <cstdio>

#include "twistor/error.hpp"
#include "twistor/jet.hpp"

namespace twistor {

namespace {

const cd I(0.0, 1.0);

// 2x2 matrix over either complex numbers or first-order jets in x
template <class T>
struct M2 {
    T a, b, c, d;
};

template <class T>
M2<T> operator*(const M2<T>& p, const M2<T>& q) {
    return {p.a * q.a + p.b * q.c, p.a * q.b + p.b * q.d, p.c * q.a + p.d * q.c, p.c * q.b + p.d * q.d};
}

template <class T>
M2<T> operator+(const M2<T>& p, const M2<T>& q) {
    return {p.a + q.a, p.b + q.b, p.c + q.c, p.d + q.d};
}

template <class T>
M2<T> scale(const M2<T>& p, cd s) {
    return {p.a * s, p.b * s, p.c * s, p.d * s};
}

template <class T>
M2<T> inverse(const M2<T>& p) {
    T det = p.a * p.d - p.b * p.c;
    return {p.d / det, (-p.b) / det, (-p.c) / det, p.a / det};
}

cd expv(cd z) { return std::exp(z); }
Jet expv(const Jet& z) { return exp(z); }
cd value_of(cd z) { return z; }
cd value_of(const Jet& z) { return z.value(); }

struct KdvScalar {
    // constants of the right type for T
    template <class T>
    static T make(const T& like, cd v) {
        if constexpr (std::is_same_v<T, cd>) return v;
        else return Jet(like.vars(), like.order(), v);
    }
};

// Y0(w) gamma with Y0 = cosh(theta) I + sinh(theta) sqrt(w) Lambda(w),
// theta = sqrt(w) (x - 4 t w)
template <class T>
std::pair<T, T> kdv_vacuum_apply(const T& x, double t, cd w, const Eigen::Vector2cd& g) {
    cd r = std::sqrt(w);
    T theta = (x + (-4.0 * t * w)) * r;
    T ep = expv(theta), em = expv(-theta);
    T ch = (ep + em) * 0.5, sh = (ep - em) * 0.5;
    // sqrt(w) Lambda = [[0, r], [1/r, 0]]
    T v0 = ch * g(0) + sh * (r * g(1));
    T v1 = sh * (g(0) / r) + ch * g(1);
    return {v0, v1};
}

template <class T>
std::vector<M2<T>> kdv_laurent(const SolitonSpectrum& spec, const T& x, double t) {
    const T zero = KdvScalar::make(x, 0.0), one = KdvScalar::make(x, 1.0);
    std::vector<M2<T>> N{{one, zero, zero, one}};
    const size_t k = spec.poles.size();
    std::vector<bool> done(k, false);
    for (size_t step = 0; step < k; ++step) {
        const T q = N.size() > 1 ? N[1].c : zero;
        const M2<T> h{one, q, zero, one};
        // The result does not depend on the factor order, but an intermediate
        // frame can pass through a removable singularity. Take next the pole whose
        // kernel vector is best conditioned.
        size_t best = k;
        double best_score = -1.0;
        T v0 = zero, v1 = zero;
        for (size_t i = 0; i < k; ++i) {
            if (done[i]) continue;
            const cd w = -I * spec.poles[i];
            M2<T> psi_w = N[0];
            cd wp = 1.0;
            for (size_t j = 1; j < N.size(); ++j) {
                wp /= w;
                psi_w = psi_w + scale(N[j], wp);
            }
            // each later factor multiplies the kernel by Lambda; precompensate so
            // that the finished frame annihilates Y0(w_i) gamma_i
            Eigen::Vector2cd g = spec.directions[i];
            if ((k - step) % 2 == 1) g = Eigen::Vector2cd(w * g(1), g(0));
            auto [y0, y1] = kdv_vacuum_apply(x, t, w, g);
            M2<T> hp = h * psi_w;
            T c0 = hp.a * y0 + hp.b * y1;
            T c1 = hp.c * y0 + hp.d * y1;
            double a0 = std::abs(value_of(c0)), a1 = std::abs(value_of(c1));
            double score = a1 / (a0 + a1);
            if (score > best_score) {
                best_score = score;
                best = i;
                v0 = c0;
                v1 = c1;
            }
        }
        done[best] = true;
        const cd w = -I * spec.poles[best];
        if (std::abs(value_of(v1)) <= 1e-13 * std::abs(value_of(v0)))
            throw Error("singular point of the dressed field");
        const T s = v0 / v1;
        const M2<T> D0{-s, s * s + (-w), one, -s};
        // A_j = h N_j, B_j = A_j E + A_{j-1} F
        const size_t K = N.size() - 1;
        std::vector<M2<T>> A, B(K + 2, M2<T>{zero, zero, zero, zero});
        for (const auto& n : N) A.push_back(h * n);
        for (size_t j = 0; j <= K + 1; ++j) {
            if (j <= K) {
                B[j].b = B[j].b + A[j].a;
                B[j].d = B[j].d + A[j].c;
            }
            if (j >= 1) {
                B[j].a = B[j].a + A[j - 1].b;
                B[j].c = B[j].c + A[j - 1].d;
            }
        }
        // P_j = E B_{j+1} + D0 B_j; the w^1 term E B_0 vanishes
        std::vector<M2<T>> P;
        for (size_t j = 0; j <= K + 1; ++j) {
            M2<T> pj = D0 * B[j];
            if (j + 1 <= K + 1) {
                pj.a = pj.a + B[j + 1].c;
                pj.b = pj.b + B[j + 1].d;
            }
            P.push_back(pj);
        }
        const M2<T> G = inverse(P[0]);
        N.clear();
        for (const auto& p : P) N.push_back(G * p);
    }
    return N;
}

Eigen::Matrix2cd to_eigen(const M2<cd>& m) {
    Eigen::Matrix2cd r;
    r << m.a, m.b, m.c, m.d;
    return r;
}

Eigen::Matrix2cd value_matrix(const M2<Jet>& m) {
    Eigen::Matrix2cd r;
    r << m.a.value(), m.b.value(), m.c.value(), m.d.value();
    return r;
}

Eigen::Matrix2cd dx_matrix(const M2<Jet>& m) {
    Eigen::Matrix2cd r;
    r << m.a.coeff({1}), m.b.coeff({1}), m.c.coeff({1}), m.d.coeff({1});
    return r;
}

// exp(-i theta sigma3) gamma with theta = lambda x + 2 lambda^2 t, rescaled to unit max
Eigen::Vector2cd nls_transport(cd lambda, double x, double t, const Eigen::Vector2cd& g) {
    const cd theta = lambda * x + 2.0 * lambda * lambda * t;
    cd l0 = -I * theta + std::log(g(0));
    cd l1 = I * theta + std::log(g(1));
    const double m = std::max(l0.real(), l1.real());
    return {std::exp(l0 - m), std::exp(l1 - m)};
}

Eigen::Matrix2cd nls_factor(cd pole, const Eigen::Matrix2cd& P, cd lambda) {
    return Eigen::Matrix2cd::Identity() + ((pole - std::conj(pole)) / (lambda - pole)) * P;
}

}  // namespace

Equation equation_from_string(const std::string& s) {
    if (s == "nls" || s == "NLS") return Equation::NLS;
    if (s == "kdv" || s == "KdV" || s == "KDV") return Equation::KdV;
    throw Error("unknown equation '" + s + "' (expected nls or kdv)");
}

std::string to_string(Equation e) { return e == Equation::NLS ? "nls" : "kdv"; }

SectionCount section_count_check(int k) {
    if (k < 0) throw Error("soliton number must be non-negative");
    return {2 * k + 2, 2 * k, 2};
}

void SolitonSpectrum::validate() const {
    if (directions.size() != poles.size()) throw Error("one direction per pole required");
    for (size_t i = 0; i < poles.size(); ++i) {
        const cd l = poles[i];
        if (!(l.imag() > 0.0)) throw Error("poles must lie in the upper half plane");
        for (size_t j = 0; j < i; ++j)
            if (std::abs(poles[j] - l) <= 1e-12 * (1.0 + std::abs(l))) throw Error("poles must be distinct");
        const Eigen::Vector2cd& g = directions[i];
        const double n2 = g.squaredNorm();
        if (n2 == 0.0) throw Error("direction vectors must be nonzero");
        if (equation == Equation::NLS) {
            if (std::abs(g(0) * g(1)) <= 1e-14 * n2) throw Error("eigenspace degeneracy");
        } else {
            if (std::abs(l.real()) > 1e-14 * std::abs(l)) throw Error("KdV poles must be purely imaginary");
            const cd r = std::sqrt(-I * l);
            // eigenvectors of Lambda(w) are (1, +-1/sqrt(w))
            if (std::abs(g(1) - g(0) / r) <= 1e-14 * std::sqrt(n2) ||
                std::abs(g(1) + g(0) / r) <= 1e-14 * std::sqrt(n2))
                throw Error("eigenspace degeneracy");
            if (std::abs((g(0) * std::conj(g(1))).imag()) > 1e-12 * n2)
                throw Error("KdV directions must be real up to scale");
        }
    }
}

Eigen::Matrix2cd lambda_matrix(Equation e, cd lambda) {
    Eigen::Matrix2cd L;
    if (e == Equation::NLS) {
        L << 1.0, 0.0, 0.0, -1.0;
    } else {
        const cd w = -I * lambda;
        if (w == cd(0.0)) throw Error("Lambda is singular at lambda = 0");
        L << 0.0, 1.0, 1.0 / w, 0.0;
    }
    return L;
}

Eigen::Matrix2cd vacuum(Equation e, cd lambda, double x, double t) {
    Eigen::Matrix2cd V = Eigen::Matrix2cd::Zero();
    if (e == Equation::NLS) {
        const cd theta = lambda * x + 2.0 * lambda * lambda * t;
        V(0, 0) = std::exp(-I * theta);
        V(1, 1) = std::exp(I * theta);
        return V;
    }
    const cd w = -I * lambda;
    auto c0 = kdv_vacuum_apply<cd>(x, t, w, Eigen::Vector2cd(1.0, 0.0));
    auto c1 = kdv_vacuum_apply<cd>(x, t, w, Eigen::Vector2cd(0.0, 1.0));
    V << c0.first, c1.first, c0.second, c1.second;
    return V;
}

DressedFrame build_frame(const SolitonSpectrum& spec, double x, double t) {
    spec.validate();
    DressedFrame f;
    f.equation = spec.equation;
    f.x = x;
    f.t = t;
    f.poles = spec.poles;
    if (spec.equation == Equation::NLS) {
        for (size_t i = 0; i < spec.poles.size(); ++i) {
            const cd lb = std::conj(spec.poles[i]);
            Eigen::Vector2cd v = nls_transport(lb, x, t, spec.directions[i]);
            for (size_t j = 0; j < i; ++j) v = nls_factor(f.poles[j], f.projections[j], lb) * v;
            v /= v.cwiseAbs().maxCoeff();
            if (std::abs(v(0) * v(1)) <= 1e-300) throw Error("eigenspace degeneracy");
            f.projections.push_back(v * v.adjoint() / v.squaredNorm());
        }
        return f;
    }
    const Jet xj = Jet::variable(1, 1, 0, x);
    auto N = kdv_laurent<Jet>(spec, xj, t);
    for (const auto& n : N) f.laurent.push_back(value_matrix(n));
    if (N.size() > 1) f.laurent1_x = dx_matrix(N[1]);
    return f;
}

Eigen::Matrix2cd DressedFrame::eval(cd lambda) const {
    Eigen::Matrix2cd M = Eigen::Matrix2cd::Identity();
    if (equation == Equation::NLS) {
        for (size_t j = 0; j < poles.size(); ++j) M = nls_factor(poles[j], projections[j], lambda) * M;
        return M;
    }
    const cd w = -I * lambda;
    M = Eigen::Matrix2cd::Zero();
    cd wp = 1.0;
    for (const auto& n : laurent) {
        M += wp * n;
        wp /= w;
    }
    return M;
}

Eigen::Matrix2cd DressedFrame::m1() const {
    if (equation == Equation::NLS) {
        Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
        for (size_t j = 0; j < poles.size(); ++j) m += (poles[j] - std::conj(poles[j])) * projections[j];
        return m;
    }
    // 1/w = i/lambda
    return laurent.size() > 1 ? Eigen::Matrix2cd(I * laurent[1]) : Eigen::Matrix2cd::Zero();
}

cd DressedFrame::det(cd lambda) const { return eval(lambda).determinant(); }

Eigen::Matrix2cd DressedFrame::residue(int i) const {
    if (equation != Equation::NLS) throw Error("residues are defined for the NLS frame only");
    const cd l = poles.at(i);
    Eigen::Matrix2cd left = Eigen::Matrix2cd::Identity(), right = Eigen::Matrix2cd::Identity();
    for (int j = 0; j < i; ++j) right = nls_factor(poles[j], projections[j], l) * right;
    for (int j = i + 1; j < k(); ++j) left = nls_factor(poles[j], projections[j], l) * left;
    return left * ((l - std::conj(l)) * projections[i]) * right;
}

cd extract_field(const DressedFrame& f) {
    if (f.equation == Equation::NLS) return 2.0 * I * f.m1()(0, 1);
    return 2.0 * f.laurent1_x(1, 0);
}

FieldGrid field_grid(const SolitonSpectrum& spec, double x0, int nx, double t0, int nt, double h) {
    if (nx < 1 || nt < 1 || !(h > 0.0)) throw Error("grid needs positive sizes and spacing");
    FieldGrid g;
    g.equation = spec.equation;
    g.x0 = x0;
    g.t0 = t0;
    g.h = h;
    g.nx = nx;
    g.nt = nt;
    g.values.reserve(static_cast<size_t>(nx) * nt);
    for (int it = 0; it < nt; ++it)
        for (int ix = 0; ix < nx; ++ix) g.values.push_back(extract_field(build_frame(spec, g.x(ix), g.t(it))));
    return g;
}

double pde_residual(const FieldGrid& g) {
    const int rx = g.equation == Equation::NLS ? 1 : 2;
    if (g.nx < 2 * rx + 1 || g.nt < 3) throw Error("grid too small for the finite-difference stencil");
    const double h = g.h;
    double worst = 0.0;
    for (int it = 1; it + 1 < g.nt; ++it)
        for (int ix = rx; ix + rx < g.nx; ++ix) {
            const cd u = g.at(ix, it);
            const cd ut = (g.at(ix, it + 1) - g.at(ix, it - 1)) / (2 * h);
            const cd up = g.at(ix + 1, it), um = g.at(ix - 1, it);
            cd r;
            if (g.equation == Equation::NLS) {
                const cd uxx = (up - 2.0 * u + um) / (h * h);
                r = I * ut + uxx + 2.0 * std::norm(u) * u;
            } else {
                const cd ux = (up - um) / (2 * h);
                const cd uxxx = (g.at(ix + 2, it) - 2.0 * up + 2.0 * um - g.at(ix - 2, it)) / (2 * h * h * h);
                r = ut - 6.0 * u * ux + uxxx;
            }
            worst = std::max(worst, std::abs(r));
        }
    return worst;
}

std::vector<double> hump_amplitudes(const FieldGrid& g, int it, double floor) {
    std::vector<double> out;
    for (int ix = 1; ix + 1 < g.nx; ++ix) {
        const double a = std::abs(g.at(ix - 1, it)), b = std::abs(g.at(ix, it)), c = std::abs(g.at(ix + 1, it));
        if (b < floor || !(b > a && b >= c)) continue;
        // parabola through the three samples
        const double den = a - 2 * b + c;
        out.push_back(den == 0.0 ? b : b - (a - c) * (a - c) / (8.0 * den));
    }
    return out;
}

std::string to_csv(const FieldGrid& g) {
    std::string s = "x,t,re,im\n";
    char buf[160];
    for (int it = 0; it < g.nt; ++it)
        for (int ix = 0; ix < g.nx; ++ix) {
            const cd v = g.at(ix, it);
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", g.x(ix), g.t(it), v.real(), v.imag());
            s += buf;
        }
    return s;
}

}  // namespace twistor
