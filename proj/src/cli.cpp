#include "twistor/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "twistor/ale.hpp"
#include "twistor/bundles.hpp"
#include "twistor/curve_families.hpp"
#include "twistor/einstein_weyl.hpp"
#include "twistor/error.hpp"
#include "twistor/monopole.hpp"
#include "twistor/ward.hpp"
#include "twistor/wunschmann.hpp"

namespace twistor {

using nlohmann::json;

namespace {

double parse_real(const std::string& s) {
    size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw Error("not a number: '" + s + "'");
    }
    if (used != s.size()) throw Error("not a number: '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

}  // namespace

cd parse_complex(const std::string& text) {
    const std::string s = trim(text);
    if (s.empty()) throw Error("empty complex number");
    if (s.back() != 'i') return parse_real(s);
    const std::string body = s.substr(0, s.size() - 1);
    // split before the sign that starts the imaginary part, skipping exponent signs
    size_t cut = std::string::npos;
    for (size_t k = body.size(); k-- > 1;)
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            cut = k;
            break;
        }
    const std::string re = cut == std::string::npos ? "" : body.substr(0, cut);
    std::string im = cut == std::string::npos ? body : body.substr(cut);
    if (im.empty() || im == "+") im = "1";
    if (im == "-") im = "-1";
    return {re.empty() ? 0.0 : parse_real(re), parse_real(im)};
}

std::vector<cd> parse_complex_list(const std::string& s) {
    std::vector<cd> out;
    for (const auto& part : split(s, ',')) out.push_back(parse_complex(part));
    return out;
}

namespace {

// adding 0.0 turns -0.0 into 0.0
json cjson(cd z) { return json::array({z.real() + 0.0, z.imag() + 0.0}); }

json coeffs_json(const Polynomial& p) {
    json a = json::array();
    for (cd c : p.coeffs()) a.push_back(cjson(c));
    return a;
}

json point_json(const ProjPoint& p) {
    return p.infinity ? json{{"infinity", true}} : json{{"infinity", false}, {"lambda", cjson(p.lambda)}};
}

Polynomial parse_poly(const std::string& s) { return Polynomial(parse_complex_list(s)); }

// polynomials separated by ';'
std::vector<Polynomial> parse_poly_list(const std::string& s) {
    std::vector<Polynomial> out;
    if (trim(s).empty()) return out;
    for (const auto& part : split(s, ';')) out.push_back(parse_poly(part));
    return out;
}

std::vector<double> parse_real_list(const std::string& s) {
    std::vector<double> out;
    for (const auto& part : split(s, ',')) out.push_back(parse_real(trim(part)));
    return out;
}

struct Report {
    std::string command;
    json inputs = json::object();
    json outputs = json::object();
    json checks = json::array();

    void check(const std::string& name, bool pass, const json& value, double tolerance) {
        checks.push_back({{"name", name}, {"pass", pass}, {"value", value}, {"tolerance", tolerance}});
    }
    bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const json& c) { return c.at("pass").get<bool>(); });
    }
    json to_json() const { return {{"command", command}, {"inputs", inputs}, {"outputs", outputs}, {"checks", checks}}; }
};

struct Common {
    std::uint64_t seed = 1;
    bool pretty = false;
    std::string out;
};

std::uint64_t default_seed() {
    if (const char* e = std::getenv("TWISTOR_SEED")) {
        try {
            return std::stoull(e);
        } catch (const std::exception&) {
            throw Error("TWISTOR_SEED must be a non-negative integer");
        }
    }
    return 1;
}

void add_common(CLI::App* app, Common& c, bool with_out) {
    app->add_option("--seed", c.seed, "random seed; default TWISTOR_SEED or 1");
    app->add_flag("--pretty", c.pretty, "indented JSON and a summary on the error stream");
    if (with_out) app->add_option("--out", c.out, "path of the CSV sidecar");
}

// ---- bundles info

struct BundlesArgs {
    int n = 0;
    std::string ks;
};

Report bundles_info(const BundlesArgs& a) {
    Report r{"bundles info"};
    r.inputs = {{"n", a.n}};
    const int h0 = h0_dim(a.n), h1 = h1_dim(a.n);
    r.outputs = {{"h0", h0}, {"h1", h1}};
    r.check("riemann_roch", h0 - h1 == a.n + 1, h0 - h1 - (a.n + 1), 0.0);
    if (!a.ks.empty()) {
        std::vector<int> ks;
        for (double k : parse_real_list(a.ks)) ks.push_back(static_cast<int>(k));
        BundleType t(ks);
        r.inputs["ks"] = ks;
        int sum = 0;
        for (int k : ks) sum += h0_dim(k);
        const int m = moduli_dimension(t);
        r.outputs["moduli_dimension"] = m;
        r.check("moduli_dimension_is_h0_of_normal_bundle", m == sum, m - sum, 0.0);
    }
    return r;
}

// ---- family solve

struct FamilyArgs {
    std::string ks;
    std::vector<std::string> at;
    double tol = 1e-10;
};

Report family_solve(const FamilyArgs& a) {
    Report r{"family solve"};
    std::vector<int> ks;
    for (double k : parse_real_list(a.ks)) ks.push_back(static_cast<int>(k));
    BundleType t(ks);
    std::vector<IncidenceCondition> conds;
    json echo = json::array();
    for (const auto& spec : a.at) {
        const auto colon = spec.find(':');
        if (colon == std::string::npos) throw Error("incidence must read lambda:z1,...,zr");
        const std::string l = trim(spec.substr(0, colon));
        IncidenceCondition c;
        c.base = (l == "inf" || l == "infinity") ? ProjPoint::at_infinity() : ProjPoint::finite(parse_complex(l));
        c.fibre = parse_complex_list(spec.substr(colon + 1));
        if (static_cast<int>(c.fibre.size()) != t.rank()) throw Error("incidence needs one fibre value per summand");
        json e = point_json(c.base);
        json f = json::array();
        for (cd z : c.fibre) f.push_back(cjson(z));
        e["fibre"] = f;
        echo.push_back(e);
        conds.push_back(c);
    }
    r.inputs = {{"ks", ks}, {"incidence", echo}, {"tol", a.tol}};
    AffineFamily fam = solve_incidence(t, conds);
    r.outputs["consistent"] = fam.consistent;
    r.outputs["dimension"] = fam.dimension();
    r.outputs["rank"] = fam.rank;
    r.outputs["residual"] = fam.residual;
    if (fam.consistent) {
        r.outputs["particular"] = to_json(fam.particular);
        json basis = json::array();
        for (const auto& b : fam.basis) basis.push_back(to_json(b));
        r.outputs["basis"] = basis;
    }
    r.check("consistent", fam.consistent, fam.consistent ? 1 : 0, 0.0);
    r.check("incidence_residual", fam.residual <= a.tol, fam.residual, a.tol);
    return r;
}

// ---- soliton build

struct SolitonArgs {
    std::string equation = "nls";
    std::string poles;
    std::string gammas;
    std::string grid = "-10,2001,0,5,0.01";
    double tol = 1e-3;
};

Report soliton_build(const SolitonArgs& a, const Common& c) {
    Report r{"soliton build"};
    SolitonSpectrum spec;
    spec.equation = equation_from_string(a.equation);
    spec.poles = parse_complex_list(a.poles);
    if (a.gammas.empty()) {
        const Eigen::Vector2cd g = spec.equation == Equation::NLS ? Eigen::Vector2cd(1.0, 1.0) : Eigen::Vector2cd(1.0, 0.0);
        spec.directions.assign(spec.poles.size(), g);
    } else {
        for (const auto& pair : split(a.gammas, ',')) {
            const auto parts = split(pair, ':');
            if (parts.size() != 2) throw Error("each direction must read g0:g1");
            spec.directions.emplace_back(parse_complex(parts[0]), parse_complex(parts[1]));
        }
    }
    spec.validate();
    const auto g = parse_real_list(a.grid);
    if (g.size() != 5) throw Error("grid must read x0,nx,t0,nt,h");
    const int nx = static_cast<int>(g[1]), nt = static_cast<int>(g[3]);
    json poles = json::array(), dirs = json::array();
    for (cd p : spec.poles) poles.push_back(cjson(p));
    for (const auto& d : spec.directions) dirs.push_back(json::array({cjson(d[0]), cjson(d[1])}));
    r.inputs = {{"equation", to_string(spec.equation)},
                {"poles", poles},
                {"gammas", dirs},
                {"grid", {{"x0", g[0]}, {"nx", nx}, {"t0", g[2]}, {"nt", nt}, {"h", g[4]}}},
                {"tol", a.tol}};
    FieldGrid grid = field_grid(spec, g[0], nx, g[2], nt, g[4]);
    const double res = pde_residual(grid);
    json amps = json::array();
    for (int it : {0, nt - 1}) {
        amps.push_back({{"t", grid.t(it)}, {"amplitudes", hump_amplitudes(grid, it)}});
        if (nt == 1) break;
    }
    r.outputs = {{"residual", res}, {"amplitudes", amps}};
    if (!c.out.empty()) {
        std::ofstream f(c.out);
        if (!f) throw Error("cannot write " + c.out);
        f << to_csv(grid);
        r.outputs["csv"] = c.out;
    }
    r.check("pde_residual", res < a.tol, res, a.tol);
    return r;
}

// ---- monopole check

struct MonopoleArgs {
    int k = 1;
    std::string psi;
    std::string center;
    std::string x;
    double tol = 1e-12;
};

Report monopole_check(const MonopoleArgs& a) {
    Report r{"monopole check"};
    const auto xs = parse_real_list(a.x);
    if (xs.size() != 3) throw Error("--x needs three real coordinates");
    const std::array<double, 3> x{xs[0], xs[1], xs[2]};
    std::vector<Polynomial> coeffs;
    if (!a.psi.empty()) {
        coeffs = parse_poly_list(a.psi);
    } else if (!a.center.empty()) {
        const auto cs = parse_real_list(a.center);
        if (cs.size() != 3) throw Error("--center needs three real coordinates");
        coeffs = SpectralCurve::graph(real_section({cs[0], cs[1], cs[2]})).coeffs();
    } else {
        throw Error("give the spectral curve by --psi or --center");
    }
    SpectralCurve s(coeffs);
    if (s.k() != a.k) throw Error("--psi lists " + std::to_string(s.k()) + " coefficients but --k is " + std::to_string(a.k));
    json cj = json::array();
    for (const auto& p : s.coeffs()) cj.push_back(coeffs_json(p));
    r.inputs = {{"k", a.k}, {"psi", cj}, {"x", xs}, {"tol", a.tol}};

    double tau_defect = 0.0;
    const SpectralCurve ts = tau_transform(s);
    for (int j = 0; j < s.k(); ++j) tau_defect = std::max(tau_defect, Polynomial::distance(ts.coeffs()[j], s.coeffs()[j]));
    const bool tau = tau_invariance_check(s, a.tol);
    r.outputs["tau_invariant"] = tau;
    r.check("tau_invariant", tau, tau_defect, a.tol);

    IntersectionReport ir = spectral_intersections(s, x);
    json pts = json::array();
    for (const auto& p : ir.points) {
        json e = point_json(p.point);
        e["multiplicity"] = p.multiplicity;
        pts.push_back(e);
    }
    r.outputs["intersections"] = {{"degenerate", ir.degenerate}, {"points", pts}, {"total", ir.total()}};
    r.check("intersection_count", !ir.degenerate && ir.total() == 2 * s.k(), ir.total(), 0.0);

    if (s.k() == 1 && !ir.degenerate) {
        SectionSpace sp = monopole_section_space(s, x);
        r.outputs["section_space_dim"] = sp.dimension();
        r.check("section_space_dim", sp.dimension() == 2, sp.dimension(), 0.0);
    } else {
        r.outputs["section_space_dim"] = nullptr;
    }
    return r;
}

// ---- ale verify / solve-ak

struct AleArgs {
    std::string type;
    int k = 1;
    std::string a;
    std::string curve;
    std::string z;
    double tol = 1e-9;
};

json curve_json(const AleCurve& c) {
    return {{"x", coeffs_json(c.x.poly())}, {"y", coeffs_json(c.y.poly())}, {"z", coeffs_json(c.z.poly())}};
}

json poly_list_json(const std::vector<Polynomial>& ps) {
    json out = json::array();
    for (const auto& p : ps) out.push_back(coeffs_json(p));
    return out;
}

Report ale_verify(const AleArgs& a) {
    Report r{"ale verify"};
    AleTwistorData d{KleinianType::parse(a.type), parse_poly_list(a.a)};
    d.validate();
    const auto parts = parse_poly_list(a.curve);
    if (parts.size() != 3) throw Error("--curve must list x;y;z");
    const Degrees deg = degrees_of(d.type);
    AleCurve c{BundleSection(deg.p, parts[0]), BundleSection(deg.q, parts[1]), BundleSection(deg.r, parts[2])};
    r.inputs = {{"type", d.type.name()}, {"a", poly_list_json(d.a)}, {"curve", curve_json(c)}, {"tol", a.tol}};
    const Polynomial res = relation_residual(d, c);
    r.outputs = {{"degrees", {{"p", deg.p}, {"q", deg.q}, {"r", deg.r}, {"s", deg.s}, {"a", deg.a}}},
                 {"residual", coeffs_json(res)},
                 {"residual_norm", res.norm()},
                 {"linearized_kernel_dim", linearized_kernel_dim(d, c)}};
    r.check("relation_residual", res.norm() < a.tol, res.norm(), a.tol);
    r.check("first_chern_class", deg.p + deg.q + deg.r - deg.s == 2, deg.p + deg.q + deg.r - deg.s, 0.0);
    return r;
}

Report ale_solve_ak(const AleArgs& a) {
    Report r{"ale solve-ak"};
    KleinianType t{AdeFamily::A, a.k};
    AleTwistorData d{t, parse_poly_list(a.a)};
    d.validate();
    const Degrees deg = degrees_of(t);
    BundleSection z(deg.r, parse_poly(a.z));
    r.inputs = {{"k", a.k}, {"a", poly_list_json(d.a)}, {"z", coeffs_json(z.poly())}, {"tol", a.tol}};
    AkSolution sol = ak_curve_solve(d, z);
    json curves = json::array();
    double worst = 0.0;
    for (const auto& c : sol.curves) {
        const double res = relation_residual(d, c).norm();
        worst = std::max(worst, res);
        json e = curve_json(c);
        e["residual_norm"] = res;
        curves.push_back(e);
    }
    r.outputs = {{"degenerate", sol.degenerate}, {"R", coeffs_json(sol.R)}, {"count", sol.curves.size()}, {"curves", curves}};
    r.check("nondegenerate", !sol.degenerate, sol.degenerate ? 1 : 0, 0.0);
    r.check("max_residual", worst < a.tol, worst, a.tol);
    return r;
}

// ---- ew pedersen

struct EwArgs {
    int n = 2;
    std::string a = "1", b = "0", c = "1";
    double tol = 1e-10;
};

Report ew_pedersen(const EwArgs& a) {
    Report r{"ew pedersen"};
    PedersenParams prm{parse_complex(a.a), parse_complex(a.b), parse_complex(a.c)};
    r.inputs = {{"n", a.n}, {"a", cjson(prm.a)}, {"b", cjson(prm.b)}, {"c", cjson(prm.c)}, {"tol", a.tol}};
    PedersenResult res = pedersen_solve(a.n, prm);
    TangencyReport tr = tangency_verify(res.curve, prm, a.tol);
    json flags = json::array();
    for (auto f : res.flags) flags.push_back(to_string(f));
    json pts = json::array();
    int not_divisible = 0;
    for (const auto& p : tr.points) {
        json e = p.infinity ? json{{"infinity", true}} : json{{"infinity", false}, {"lambda", cjson(p.lambda)}};
        e["multiplicity"] = p.multiplicity;
        pts.push_back(e);
        if (p.multiplicity % a.n != 0) ++not_divisible;
    }
    r.outputs = {{"P", coeffs_json(res.curve.P)},
                 {"Q", coeffs_json(res.curve.Q)},
                 {"flags", flags},
                 {"degenerate", res.degenerate()},
                 {"resultant", cjson(res.resultant)},
                 {"intersections", pts}};
    r.check("identity", tr.ok, tr.rel_error, a.tol);
    r.check("nondegenerate", !res.degenerate(), res.degenerate() ? 1 : 0, 0.0);
    r.check("multiplicities_divisible_by_n", not_divisible == 0, not_divisible, 0.0);
    return r;
}

// ---- wunschmann check

struct WunArgs {
    int n = 2;
    std::string f;
    int samples = 100;
    double tol = 1e-8;
    double margin = 0.1;
};

Report wunschmann_check(const WunArgs& a, const Common& c) {
    Report r{"wunschmann check"};
    if (a.samples < 0) throw Error("--samples must be non-negative");
    OdeRhs F = OdeRhs::parse(a.n, a.f);
    r.inputs = {{"n", a.n}, {"f", a.f}, {"samples", a.samples}, {"tol", a.tol}, {"margin", a.margin}, {"seed", c.seed}};
    SampleOptions opt{a.samples, a.tol, c.seed, a.margin};
    WunschmannReport rep = check_wunschmann(F, opt);
    json conds = json::array();
    for (size_t i = 0; i < rep.residuals.size(); ++i) {
        double m = 0.0;
        for (cd v : rep.residuals[i]) m = std::max(m, std::abs(v));
        json e = {{"exact", static_cast<bool>(rep.exact[i])}, {"simplified", rep.simplified[i]}, {"max_abs", m}};
        conds.push_back(e);
        const bool has_value = rep.exact[i] || !rep.residuals[i].empty();
        r.check("condition_" + std::to_string(i + 1), has_value && m < a.tol, m, a.tol);
    }
    r.outputs = {{"verdict", rep.verdict ? "pass" : "fail"},
                 {"conditions", conds},
                 {"max_abs", rep.max_abs},
                 {"points_used", rep.points.size()},
                 {"skipped", rep.skipped}};
    return r;
}

std::string summary(const Report& r) {
    std::ostringstream s;
    s << r.command << ": " << (r.passed() ? "PASS" : "FAIL") << "\n";
    for (const auto& c : r.checks)
        s << "  " << (c.at("pass").get<bool>() ? "ok   " : "FAIL ") << c.at("name").get<std::string>() << " = "
          << c.at("value").dump() << " (tol " << c.at("tolerance").dump() << ")\n";
    return s.str();
}

}  // namespace

CliResult run_cli(const std::vector<std::string>& args) {
    CliResult out;
    Common common;
    try {
        common.seed = default_seed();
    } catch (const Error& e) {
        out.code = 1;
        out.err = std::string("error: ") + e.what() + "\n";
        return out;
    }

    CLI::App app{"Rational curves in twistor spaces: construction and verification", "twistor"};
    app.require_subcommand(1);
    std::function<Report()> action;

    BundlesArgs ba;
    auto* bundles = app.add_subcommand("bundles", "line bundles over the projective line");
    bundles->require_subcommand(1);
    auto* binfo = bundles->add_subcommand("info", "cohomology of O(n) and moduli dimension of a splitting type");
    binfo->add_option("--n", ba.n, "degree n")->required();
    binfo->add_option("--ks", ba.ks, "splitting type k1,...,kr");
    add_common(binfo, common, false);
    binfo->callback([&] { action = [&] { return bundles_info(ba); }; });

    FamilyArgs fa;
    auto* family = app.add_subcommand("family", "families of sections");
    family->require_subcommand(1);
    auto* fsolve = family->add_subcommand("solve", "sections through prescribed fibre points");
    fsolve->add_option("--ks", fa.ks, "splitting type k1,...,kr")->required();
    fsolve->add_option("--at", fa.at, "incidence lambda:z1,...,zr; lambda may be inf")->take_all();
    fsolve->add_option("--tol", fa.tol, "residual tolerance");
    add_common(fsolve, common, false);
    fsolve->callback([&] { action = [&] { return family_solve(fa); }; });

    SolitonArgs sa;
    auto* soliton = app.add_subcommand("soliton", "dressed solitons");
    soliton->require_subcommand(1);
    auto* sbuild = soliton->add_subcommand("build", "field on a grid with its PDE residual");
    sbuild->add_option("--equation", sa.equation, "nls or kdv");
    sbuild->add_option("--poles", sa.poles, "comma separated poles in the upper half plane")->required();
    sbuild->add_option("--gammas", sa.gammas, "directions g0:g1 per pole, comma separated");
    sbuild->add_option("--grid", sa.grid, "x0,nx,t0,nt,h");
    sbuild->add_option("--tol", sa.tol, "residual tolerance");
    add_common(sbuild, common, true);
    sbuild->callback([&] { action = [&] { return soliton_build(sa, common); }; });

    MonopoleArgs ma;
    auto* monopole = app.add_subcommand("monopole", "monopole spectral curves");
    monopole->require_subcommand(1);
    auto* mcheck = monopole->add_subcommand("check", "reality, intersections and section space at a point");
    mcheck->add_option("--k", ma.k, "charge");
    mcheck->add_option("--psi", ma.psi, "coefficients a_1;...;a_k, each a comma separated list");
    mcheck->add_option("--center", ma.center, "k = 1 curve centred at a point of R^3");
    mcheck->add_option("--x", ma.x, "point x1,x2,x3")->required();
    mcheck->add_option("--tol", ma.tol, "reality tolerance");
    add_common(mcheck, common, false);
    mcheck->callback([&] { action = [&] { return monopole_check(ma); }; });

    AleArgs aa;
    auto* ale = app.add_subcommand("ale", "ALE twistor spaces");
    ale->require_subcommand(1);
    auto* averify = ale->add_subcommand("verify", "residual of a curve in a deformed Kleinian surface");
    averify->add_option("--type", aa.type, "A<k>, D<k>, E6, E7 or E8")->required();
    averify->add_option("--a", aa.a, "deformation coefficients a_1;...;a_r");
    averify->add_option("--curve", aa.curve, "x;y;z coefficient lists")->required();
    averify->add_option("--tol", aa.tol, "residual tolerance");
    add_common(averify, common, false);
    averify->callback([&] { action = [&] { return ale_verify(aa); }; });
    auto* asolve = ale->add_subcommand("solve-ak", "all curves of an A_k space with given z");
    asolve->add_option("--k", aa.k, "k")->required();
    asolve->add_option("--a", aa.a, "deformation coefficients a_1;...;a_{k-1}");
    asolve->add_option("--z", aa.z, "z coefficients")->required();
    asolve->add_option("--tol", aa.tol, "residual tolerance");
    add_common(asolve, common, false);
    asolve->callback([&] { action = [&] { return ale_solve_ak(aa); }; });

    EwArgs ea;
    auto* ew = app.add_subcommand("ew", "Einstein-Weyl spaces");
    ew->require_subcommand(1);
    auto* eped = ew->add_subcommand("pedersen", "curves of the quadric tangent to the branch locus");
    eped->add_option("--n", ea.n, "n >= 2");
    eped->add_option("--a", ea.a, "coefficient a");
    eped->add_option("--b", ea.b, "coefficient b");
    eped->add_option("--c", ea.c, "coefficient c");
    eped->add_option("--tol", ea.tol, "identity tolerance");
    add_common(eped, common, false);
    eped->callback([&] { action = [&] { return ew_pedersen(ea); }; });

    WunArgs wa;
    auto* wun = app.add_subcommand("wunschmann", "contact invariants of ODEs");
    wun->require_subcommand(1);
    auto* wcheck = wun->add_subcommand("check", "conditions for y^(n) = F");
    wcheck->add_option("--n", wa.n, "order 2, 3 or 4")->required();
    wcheck->add_option("--f", wa.f, "right-hand side in x, y, y1, ..., y{n-1}")->required();
    wcheck->add_option("--samples", wa.samples, "number of sampled jets");
    wcheck->add_option("--tol", wa.tol, "residual tolerance");
    wcheck->add_option("--margin", wa.margin, "minimum distance from singularities");
    add_common(wcheck, common, false);
    wcheck->callback([&] { action = [&] { return wunschmann_check(wa, common); }; });

    if (!args.empty() && args[0].rfind("-", 0) != 0) {
        const auto subs = app.get_subcommands({});
        const bool known = std::any_of(subs.begin(), subs.end(), [&](const CLI::App* s) { return s->get_name() == args[0]; });
        if (!known) {
            out.code = 1;
            out.err = "error: unknown subcommand '" + args[0] + "'\n" + app.help();
            return out;
        }
    }
    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out.out = app.help();
        return out;
    } catch (const CLI::ParseError& e) {
        out.code = 1;
        out.err = std::string("error: ") + e.what() + "\n" + app.help();
        return out;
    }
    if (!action) {
        out.code = 1;
        out.err = app.help();
        return out;
    }
    try {
        Report r = action();
        out.out = r.to_json().dump(common.pretty ? 2 : -1) + "\n";
        if (common.pretty) out.err = summary(r);
        out.code = r.passed() ? 0 : 2;
    } catch (const std::exception& e) {
        out.code = 1;
        out.err = std::string("error: ") + e.what() + "\n";
    }
    return out;
}

}  // namespace twistor
