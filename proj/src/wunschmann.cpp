#include "twistor/wunschmann.hpp"

#include <cmath>
#include <random>

#include "twistor/error.hpp"

namespace twistor {

std::vector<std::string> jet_variable_names(int n) {
    if (n < 2) throw Error("ODE order must be at least 2");
    std::vector<std::string> v{"x", "y"};
    for (int i = 1; i < n; ++i) v.push_back("y" + std::to_string(i));
    return v;
}

OdeRhs OdeRhs::parse(int n, const std::string& text) {
    // y0 is accepted as a synonym of y
    const std::vector<std::string> names = jet_variable_names(n);
    if (text.find("y0") == std::string::npos) return {n, parse_expr(text, names)};
    std::vector<std::string> alt = names;
    alt[1] = "y0";
    Expr e = parse_expr(text, alt);
    return {n, e};
}

Expr total_derivative(const Expr& g, const OdeRhs& F) {
    if (g.max_var() > F.n) throw Error("total derivative needs jet variables of order below n");
    std::vector<Expr> t{g.diff(0)};
    for (int i = 0; i + 1 < F.n; ++i) t.push_back(Expr::var(i + 2) * g.diff(i + 1));
    t.push_back(F.expr * g.diff(F.n));
    return simplify(Expr::add(t));
}

namespace {

// The conditions written once for any arithmetic type with the given partial,
// total derivative and rational constant.
template <class T, class Partial, class Dx, class Q>
std::vector<T> conditions(int n, const T& F, Partial partial, Dx d, Q q) {
    if (n == 2) {
        T F0 = partial(F, 1), F1 = partial(F, 2);
        T F11 = partial(F1, 2), F01 = partial(F0, 2), F00 = partial(F0, 1);
        T dF11 = d(F11);
        return {d(dF11) - q(4, 1) * d(F01) - F1 * dF11 + q(4, 1) * F1 * F01 - q(3, 1) * F0 * F11 + q(6, 1) * F00};
    }
    if (n == 3) {
        T F0 = partial(F, 1), F1 = partial(F, 2), F2 = partial(F, 3);
        T dF2 = d(F2);
        return {q(1, 3) * F2 * dF2 - q(1, 6) * d(dF2) + q(1, 2) * d(F1) - q(2, 27) * F2 * F2 * F2 -
                q(1, 3) * F2 * F1 - F0};
    }
    if (n == 4) {
        T F0 = partial(F, 1), F1 = partial(F, 2), F2 = partial(F, 3), F3 = partial(F, 4);
        T dF3 = d(F3), d2F3 = d(dF3), d3F3 = d(d2F3), dF2 = d(F2), d2F2 = d(dF2);
        T F3s = F3 * F3;
        T c1 = q(11, 1600) * F3s * F3s - q(9, 50) * F3s * dF3 - q(1, 200) * F3s * F2 + q(21, 100) * dF3 * dF3 +
               q(1, 50) * dF3 * F2 - q(9, 100) * F2 * F2 + q(7, 20) * F3 * d2F3 - q(1, 5) * d3F3 +
               q(3, 10) * d2F2 - q(1, 4) * F3 * dF2 - F0;
        T c2 = q(9, 4) * F3 * dF3 - q(3, 2) * d2F3 + q(3, 1) * dF2 - q(3, 8) * F3s * F3 - q(3, 2) * F2 * F3 -
               q(3, 1) * F1;
        return {c1, c2};
    }
    throw Error("conditions are available for n = 2, 3 and 4");
}

}  // namespace

std::vector<Expr> wunschmann_conditions(const OdeRhs& F) {
    auto partial = [](const Expr& g, int v) { return simplify(g.diff(v)); };
    auto d = [&](const Expr& g) { return total_derivative(g, F); };
    auto q = [](long long a, long long b) { return Expr(Number(a, b)); };
    std::vector<Expr> out;
    for (const auto& c : conditions<Expr>(F.n, simplify(F.expr), partial, d, q)) out.push_back(simplify(c));
    return out;
}

std::vector<cd> condition_values(const OdeRhs& F, const std::vector<cd>& point) {
    const int n = F.n;
    if (static_cast<int>(point.size()) != n + 1) throw Error("jet point needs n + 1 coordinates");
    const int vars = n + 1, order = 2 * n;
    std::vector<Jet> v;
    for (int i = 0; i < vars; ++i) v.push_back(Jet::variable(vars, order, i, point[i]));
    const Jet Fj = F.expr.eval(v);
    auto partial = [](const Jet& g, int var) { return g.partial(var); };
    auto d = [&](const Jet& g) {
        Jet r = g.partial(0);
        for (int i = 0; i + 1 < n; ++i) r += v[i + 2] * g.partial(i + 1);
        r += Fj * g.partial(n);
        return r;
    };
    auto q = [](long long a, long long b) { return cd(static_cast<double>(a) / static_cast<double>(b)); };
    std::vector<cd> out;
    for (const auto& c : conditions<Jet>(n, Fj, partial, d, q)) out.push_back(c.value());
    return out;
}

namespace {

WunschmannReport run_check(const OdeRhs& F, const SampleOptions& opt, int n) {
    if (F.n != n) throw Error("right-hand side has order " + std::to_string(F.n) + ", expected " + std::to_string(n));
    if (F.expr.max_var() > n) throw Error("right-hand side uses jet variables of order n or above");
    WunschmannReport rep;
    rep.n = n;
    rep.tol = opt.tol;
    const std::vector<Expr> conds = wunschmann_conditions(F);
    rep.residuals.assign(conds.size(), {});
    for (const auto& c : conds) {
        rep.exact.push_back(c.is_number());
        std::string s = c.str(jet_variable_names(n));
        rep.simplified.push_back(s.size() <= 2000 ? s : "");
    }
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const long long max_attempts = 100LL * std::max(opt.samples, 1);
    for (long long attempt = 0; static_cast<int>(rep.points.size()) < opt.samples && attempt < max_attempts; ++attempt) {
        std::vector<cd> p;
        for (int i = 0; i <= n; ++i) {
            const double re = u(rng), im = u(rng);
            p.emplace_back(re, im);
        }
        if (F.expr.singular_distance(p) < opt.margin) {
            ++rep.skipped;
            continue;
        }
        std::vector<cd> vals;
        try {
            vals = condition_values(F, p);
        } catch (const Error&) {
            ++rep.skipped;
            continue;
        }
        bool finite = true;
        for (cd v : vals) finite = finite && std::isfinite(v.real()) && std::isfinite(v.imag());
        if (!finite) {
            ++rep.skipped;
            continue;
        }
        rep.points.push_back(p);
        for (size_t c = 0; c < conds.size(); ++c)
            rep.residuals[c].push_back(rep.exact[c] ? cd(conds[c].number().value()) : vals[c]);
    }
    for (const auto& r : rep.residuals)
        for (cd v : r) rep.max_abs = std::max(rep.max_abs, std::abs(v));
    bool all_exact = true;
    for (size_t c = 0; c < conds.size(); ++c) {
        all_exact = all_exact && rep.exact[c];
        if (rep.exact[c]) rep.max_abs = std::max(rep.max_abs, std::abs(conds[c].number().value()));
    }
    rep.verdict = (all_exact || !rep.points.empty()) && rep.max_abs < opt.tol;
    return rep;
}

}  // namespace

WunschmannReport check_n2(const OdeRhs& F, const SampleOptions& opt) { return run_check(F, opt, 2); }
WunschmannReport check_n3(const OdeRhs& F, const SampleOptions& opt) { return run_check(F, opt, 3); }
WunschmannReport check_n4(const OdeRhs& F, const SampleOptions& opt) { return run_check(F, opt, 4); }

WunschmannReport check_wunschmann(const OdeRhs& F, const SampleOptions& opt) { return run_check(F, opt, F.n); }

}  // namespace twistor
