// One PASS/FAIL line per acceptance criterion. The optional argument is the
// path of the twistor_cli executable, used to compare two real process runs.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "twistor/ale.hpp"
#include "twistor/bundles.hpp"
#include "twistor/cli.hpp"
#include "twistor/curve_families.hpp"
#include "twistor/einstein_weyl.hpp"
#include "twistor/linalg.hpp"
#include "twistor/monopole.hpp"
#include "twistor/ward.hpp"
#include "twistor/wunschmann.hpp"

using namespace twistor;

namespace {

const cd I(0.0, 1.0);

// collects the first few failures of one criterion
struct Outcome {
    std::vector<std::string> failures;
    int checks = 0;

    void expect(bool ok, const std::string& what) {
        ++checks;
        if (!ok) failures.push_back(what);
    }
    template <class T>
    static std::string num(T v) {
        std::ostringstream s;
        s.precision(6);
        s << v;
        return s.str();
    }
};

std::mt19937_64 rng(2024);

cd rc(double r = 1.0) {
    std::uniform_real_distribution<double> u(-r, r);
    return {u(rng), u(rng)};
}

Polynomial random_poly(int deg) {
    std::vector<cd> c(static_cast<size_t>(deg) + 1);
    for (auto& x : c) x = rc();
    return Polynomial(c);
}

Eigen::MatrixXcd stack(const std::vector<VectorSection>& v) {
    Eigen::MatrixXcd M(v[0].coords().size(), static_cast<long>(v.size()));
    for (size_t i = 0; i < v.size(); ++i) M.col(static_cast<long>(i)) = v[i].coords();
    return M;
}

// ---- cohomology and moduli

Outcome cohomology() {
    Outcome o;
    o.expect(h0_dim(2) == 3, "h0(O(2)) = " + Outcome::num(h0_dim(2)));
    o.expect(h1_dim(2) == 0, "h1(O(2)) = " + Outcome::num(h1_dim(2)));
    for (int n = -10; n <= 10; ++n) o.expect(h0_dim(n) - h1_dim(n) == n + 1, "Riemann-Roch fails at n = " + Outcome::num(n));
    o.expect(moduli_dimension(BundleType({1, 1})) == 4, "moduli_dimension((1,1)) != 4");
    return o;
}

// ---- alpha subspaces and beta planes

Outcome linear_algebra() {
    Outcome o;
    for (int t = 0; t < 50; ++t) {
        const int r = 1 + static_cast<int>(rng() % 4);
        std::vector<int> ks;
        for (int i = 0; i < r; ++i) ks.push_back(static_cast<int>(rng() % 7));
        std::sort(ks.rbegin(), ks.rend());
        BundleType bt(ks);
        const ProjPoint pt = t % 5 == 0 ? ProjPoint::at_infinity() : ProjPoint::finite(rc());
        const auto a = alpha_subspace(bt, pt);
        int sum_k = 0, sum_k1 = 0;
        for (int k : ks) {
            sum_k += k;
            sum_k1 += k + 1;
        }
        o.expect(a.dimension() == sum_k, "alpha dimension != sum k_i");
        o.expect(a.dimension() + bt.rank() == sum_k1, "alpha dimension + r != sum (k_i + 1)");
        if (a.dimension() > 0) o.expect(numerical_rank(stack(a.basis), 1e-10) == sum_k, "alpha basis not independent");
    }
    for (int t = 0; t < 50; ++t) {
        const int k1 = 1 + static_cast<int>(rng() % 5), k2 = 1 + static_cast<int>(rng() % k1);
        BundleType bt({k1, k2});
        auto b = beta_plane(bt, {random_poly(k1 - 1), random_poly(k2 - 1)});
        const auto c = beta_plane(bt, {random_poly(k1 - 1), random_poly(k2 - 1)});
        b.insert(b.end(), c.begin(), c.end());
        o.expect(numerical_rank(stack(b), 1e-10) == 4, "two beta planes meet away from 0");
    }
    return o;
}

// ---- Ward counting

Outcome ward_counting() {
    Outcome o;
    for (int k = 0; k <= 10; ++k) {
        const auto c = section_count_check(k);
        o.expect(c.total == 2 * k + 2 && c.conditions == 2 * k && c.remaining == 2,
                 "section_count_check(" + Outcome::num(k) + ") = (" + Outcome::num(c.total) + "," +
                     Outcome::num(c.conditions) + "," + Outcome::num(c.remaining) + ")");
    }
    return o;
}

// ---- solitons

double residual_at(const SolitonSpectrum& s, double h, double half_width) {
    const int nx = static_cast<int>(std::lround(2 * half_width / h)) + 1;
    return pde_residual(field_grid(s, -half_width, nx, -h, 3, h));
}

// maximum of f on [a,b] by golden-section search
template <class F>
double golden_max(F f, double a, double b) {
    const double g = (std::sqrt(5.0) - 1) / 2;
    double c = b - g * (b - a), d = a + g * (b - a);
    for (int i = 0; i < 200 && b - a > 1e-12; ++i) {
        if (f(c) > f(d)) b = d;
        else a = c;
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    return f((a + b) / 2);
}

void soliton_k1(Outcome& o, const SolitonSpectrum& s, double half_width, const std::string& tag) {
    const double r1 = residual_at(s, 0.01, half_width), r2 = residual_at(s, 0.005, half_width);
    o.expect(r1 < 1e-3, tag + " residual at h = 0.01 is " + Outcome::num(r1));
    o.expect(std::abs(r1 / r2 - 4.0) < 0.5, tag + " residual ratio " + Outcome::num(r1 / r2));
    const double peak = golden_max([&](double x) { return std::abs(extract_field(build_frame(s, x, 0.0))); }, -3, 3);
    const double expect = 2.0 * s.poles[0].imag();
    o.expect(std::abs(peak - expect) < 1e-6, tag + " peak " + Outcome::num(peak) + " vs " + Outcome::num(expect));
}

Outcome solitons() {
    Outcome o;
    soliton_k1(o, {Equation::NLS, {0.5 * I}, {{1, 1}}}, 10.0, "NLS k=1");
    soliton_k1(o, {Equation::KdV, {0.25 * I}, {{1, 0}}}, 16.0, "KdV k=1");
    const SolitonSpectrum two{Equation::NLS, {0.5 * I + 0.2, 0.8 * I - 0.3}, {{1, 1}, {1, -2.0 + I}}};
    const double q1 = residual_at(two, 0.02, 10.0), q2 = residual_at(two, 0.01, 10.0);
    o.expect(std::abs(q1 / q2 - 4.0) < 0.5, "NLS k=2 residual ratio " + Outcome::num(q1 / q2));
    const DressedFrame f = build_frame(two, 0.3, -0.2);
    for (int i = 0; i < 20; ++i) {
        const cd l = rc(3.0);
        cd expect = 1.0;
        for (cd p : two.poles) expect *= (l - std::conj(p)) / (l - p);
        o.expect(std::abs(f.det(l) - expect) < 1e-10 * (1.0 + std::abs(expect)), "det identity at a sample");
    }
    return o;
}

// ---- monopole

Outcome monopole() {
    Outcome o;
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 100; ++i) {
        const QuadraticCurve p = real_section({u(rng), u(rng), u(rng)});
        o.expect(tau_invariance_check(p), "real section not tau invariant");
        QuadraticCurve bent = p;
        bent.beta += cd(0.0, 0.1 + std::abs(rc()));
        o.expect(!tau_invariance_check(bent), "perturbed curve passes tau invariance");
    }
    for (int m : {1, 2, 3}) {
        const QuadraticCurve p = real_section({u(rng), u(rng), u(rng)});
        const BundleSplit s = l_bundle_split(p, m);
        for (int i = 0; i < 10; ++i) {
            const cd l = std::polar(0.5 + std::abs(rc()), 6.283185307179586 * std::abs(rc()));
            const double d = split_overlap_defect(s, p, m, l);
            o.expect(d < 1e-12, "overlap defect " + Outcome::num(d));
        }
    }
    const SpectralCurve centred = SpectralCurve::graph(real_section({0.0, 0.0, 0.0}));
    for (int i = 0; i < 50; ++i) {
        const int dim = monopole_section_space(centred, {u(rng), u(rng), u(rng)}).dimension();
        o.expect(dim == 2, "section space dimension " + Outcome::num(dim));
    }
    return o;
}

// ---- ALE

bool all_even(const Polynomial& q) {
    if ((4 - q.degree()) % 2 != 0) return false;
    for (const auto& r : poly_roots(q))
        if (r.multiplicity % 2 != 0) return false;
    return true;
}

AleTwistorData random_data(const KleinianType& t) {
    AleTwistorData d{t, {}};
    for (int deg : degrees_of(t).a) d.a.push_back(random_poly(deg));
    return d;
}

Outcome ale() {
    Outcome o;
    std::vector<KleinianType> types;
    for (int k = 1; k <= 12; ++k) types.push_back({AdeFamily::A, k});
    for (int k = 3; k <= 12; ++k) types.push_back({AdeFamily::D, k});
    for (auto f : {AdeFamily::E6, AdeFamily::E7, AdeFamily::E8}) types.push_back({f, 0});
    for (const auto& t : types) {
        const Degrees d = degrees_of(t);
        o.expect(d.p + d.q + d.r - d.s == 2, t.name() + ": p + q + r - s = " + Outcome::num(d.p + d.q + d.r - d.s));
    }
    for (int k = 1; k <= 5; ++k) {
        const AleTwistorData d = random_data({AdeFamily::A, k});
        const auto s = ak_curve_solve(d, BundleSection(2, random_poly(2)));
        o.expect(!s.degenerate && !s.curves.empty(), "A" + Outcome::num(k) + " produced no curves");
        for (const auto& c : s.curves) {
            const double res = relation_residual(d, c).norm();
            const double direct = (c.x.poly() * c.y.poly() - s.R).norm();
            o.expect(res < 1e-9, "A" + Outcome::num(k) + " residual " + Outcome::num(res));
            o.expect(direct < 1e-9, "A" + Outcome::num(k) + " round trip " + Outcome::num(direct));
        }
    }
    for (int t = 0; t < 200; ++t) {
        AleTwistorData d{{AdeFamily::A, 2}, {random_poly(4)}};
        const BundleSection x(2, random_poly(2)), y(2, random_poly(2));
        if (t % 2 == 0) {
            const Polynomial q = t % 4 == 0 ? random_poly(2) : random_poly(1);
            d.a[0] = x.poly() * y.poly() - q * q;
        }
        const bool lift = lift_tangency_check(d, x, y).has_value();
        o.expect(lift == all_even(x.poly() * y.poly() - d.a[0]), "lift disagrees with the multiplicity oracle");
    }
    const AleTwistorData d2 = random_data({AdeFamily::A, 2});
    const auto s2 = ak_curve_solve(d2, BundleSection(2, random_poly(2)));
    const int kd = s2.curves.empty() ? -1 : linearized_kernel_dim(d2, s2.curves[0]);
    o.expect(kd == 4, "A2 linearized kernel dimension " + Outcome::num(kd));
    return o;
}

// ---- Einstein-Weyl

Outcome einstein_weyl() {
    Outcome o;
    for (int n : {2, 3, 4}) {
        for (int t = 0; t < 50; ++t) {
            const PedersenParams p{rc() + 0.2, rc(), rc() + 0.2};
            const auto r = pedersen_solve(n, p);
            const auto rep = tangency_verify(r.curve, p, 1e-10);
            o.expect(rep.ok, "identity error " + Outcome::num(rep.rel_error) + " at n = " + Outcome::num(n));
            for (const auto& m : rep.points)
                o.expect(m.multiplicity % n == 0, "multiplicity " + Outcome::num(m.multiplicity) + " at n = " + Outcome::num(n));
            const int rank = numerical_rank(pedersen_jacobian(n, p), 1e-10);
            o.expect(rank == 3, "Jacobian rank " + Outcome::num(rank));
        }
    }
    for (int n = 1; n <= 4; ++n) {
        const auto b = blowup_family_dim(n, rc(), rc());
        o.expect(b.family_dim == 2 * n && b.h0 == h0_dim(2 * n - 1),
                 "blow-up family dimension " + Outcome::num(b.family_dim) + " at n = " + Outcome::num(n));
    }
    return o;
}

// ---- Wunschmann

Outcome wunschmann() {
    Outcome o;
    for (int n : {2, 3, 4}) {
        for (const auto& c : wunschmann_conditions(OdeRhs::parse(n, "0")))
            o.expect(c.is_zero(), "F = 0 is not exactly 0 at n = " + Outcome::num(n));
    }
    const auto y = wunschmann_conditions(OdeRhs::parse(3, "y"));
    o.expect(y.size() == 1 && y[0].is_number() && y[0].number() == Number(-1), "F = y at n = 3 is not exactly -1");
    const SampleOptions opt{100, 1e-8, 5, 0.1};
    for (const char* f : {"(4/3)*pow(y3,2)/y2", "pow(2*y3 + 1, 4/3)"}) {
        const auto rep = check_n4(OdeRhs::parse(4, f), opt);
        o.expect(rep.verdict && rep.points.size() == 100, std::string(f) + " fails, max " + Outcome::num(rep.max_abs));
    }
    const auto pert = check_n4(OdeRhs::parse(4, "(4/3 + 0.1)*pow(y3,2)/y2"), opt);
    o.expect(!pert.verdict && pert.max_abs > 1e-2, "perturbed example residual " + Outcome::num(pert.max_abs));
    // jet partials against central differences
    const Expr e = OdeRhs::parse(3, "exp(x*y1)/(1 + y^2) + pow(y2, 4/3)*log(2 + x)").expr;
    const std::vector<cd> p{0.3, -0.2, 0.4, 0.7};
    std::vector<Jet> v;
    for (int i = 0; i < 4; ++i) v.push_back(Jet::variable(4, 2, i, p[i]));
    const Jet j = e.eval(v);
    for (int i = 0; i < 4; ++i) {
        auto a = p, b = p;
        a[i] += 1e-4;
        b[i] -= 1e-4;
        const cd fd = (e.eval(a) - e.eval(b)) / 2e-4;
        const double err = std::abs(j.partial(i).value() - fd) / std::max(1.0, std::abs(fd));
        o.expect(err < 1e-6, "jet partial vs difference " + Outcome::num(err));
    }
    return o;
}

// ---- CLI

std::string run_process(const std::string& cmd, int& code) {
    std::string out;
    std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
    if (!pipe) {
        code = -1;
        return out;
    }
    std::array<char, 4096> buf{};
    size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe.get())) > 0) out.append(buf.data(), n);
    const int status = pclose(pipe.release());
    code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return out;
}

Outcome cli(const std::string& exe) {
    Outcome o;
    const std::vector<std::pair<std::vector<std::string>, int>> cases{
        {{"bundles", "info", "--n", "2"}, 0},
        {{"wunschmann", "check", "--n", "4", "--f", "(4/3)*pow(y3,2)/y2"}, 0},
        {{"ew", "pedersen", "--n", "2", "--a", "0", "--b", "0", "--c", "1"}, 2},
        {{"wunschmann", "check", "--n", "4", "--f", "(4/3+0.1)*pow(y3,2)/y2"}, 2},
        {{"frobnicate"}, 1},
        {{"bundles", "info", "--n", "two"}, 1},
    };
    for (const auto& [args, code] : cases) {
        const int got = run_cli(args).code;
        o.expect(got == code, args[0] + " exit " + Outcome::num(got) + ", expected " + Outcome::num(code));
    }
    const std::vector<std::string> sampled{"wunschmann", "check", "--n", "3", "--f", "y1^3 + x*y2", "--seed", "7"};
    o.expect(run_cli(sampled).out == run_cli(sampled).out, "in-process reruns differ");
    if (!exe.empty()) {
        const std::string cmd = exe + " wunschmann check --n 3 --f 'y1^3 + x*y2' --seed 7";
        int c1 = 0, c2 = 0, c3 = 0;
        const std::string a = run_process(cmd, c1), b = run_process(cmd, c2);
        o.expect(!a.empty() && a == b && c1 == c2, "process reruns differ");
        run_process(exe + " frobnicate 2>/dev/null", c3);
        o.expect(c3 == 1, "process exit for an unknown subcommand is " + Outcome::num(c3));
    }
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string exe = argc > 1 ? argv[1] : "";
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"cohomology_and_moduli", cohomology},
        {"alpha_beta_linear_algebra", linear_algebra},
        {"ward_counting", ward_counting},
        {"solitons", solitons},
        {"monopole_k1", monopole},
        {"ale", ale},
        {"einstein_weyl", einstein_weyl},
        {"wunschmann", wunschmann},
        {"cli", [&] { return cli(exe); }},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.failures.push_back(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::ostringstream line;
        line.precision(3);
        line << (o.failures.empty() ? "PASS " : "FAIL ") << name << " (" << o.checks << " checks, " << std::fixed << secs
             << " s)";
        if (!o.failures.empty()) {
            ++failed;
            line << ": " << o.failures.front();
            if (o.failures.size() > 1) line << " (+" << o.failures.size() - 1 << " more)";
        }
        std::cout << line.str() << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
