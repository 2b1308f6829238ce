#include "torick/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>

#include <CLI11.hpp>
#include <omp.h>

#include "torick/errors.hpp"
#include "torick/families.hpp"
#include "torick/io.hpp"
#include "torick/solver.hpp"
#include "torick/twist.hpp"

namespace torick
{

namespace
{

struct Outcome {
    Json report;
    int code{kExitOk};
};

int parse_sign(const std::string& s)
{
    if (s == "+" || s == "+1" || s == "1" || s == "plus") {
        return +1;
    }
    if (s == "-" || s == "-1" || s == "minus") {
        return -1;
    }
    throw Error(ErrorKind::InvalidInput, "sign must be + or -, got '" + s + "'");
}

void apply_thread_cap()
{
    if (const char* env = std::getenv("TORICK_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) {
            omp_set_num_threads(static_cast<int>(n));
        }
    }
}

Json base_report(const std::string& command, const RunConfig& cfg)
{
    return Json{{"command", command}, {"config", to_json(cfg)}, {"version", kVersion}};
}

// ------------------------------------------------------------------ commands

struct FamilyArgs {
    std::string id;
    double p{0.0};
    int k{1};
    std::string sign{"+"};
    std::optional<double> b;
    bool exploratory{false};
};

Outcome cmd_family(const FamilyArgs& a, const RunConfig& cfg)
{
    const FamilyId id = parse_family_id(a.id);
    const int sign = parse_sign(a.sign);
    const AffineMap2 f = family_f(id, {a.p, a.k, sign, a.b, a.exploratory});
    const LabelledPolytope2 P = hirzebruch_delzant(a.p, a.k);
    const VertexMin vm = min_over_vertices(P, f);

    Json r = base_report("family", cfg);
    Json fam{{"id", to_string(id)}, {"p", a.p}, {"k", a.k}, {"sign", sign}, {"exploratory", a.exploratory}};
    if (a.b) {
        fam["b"] = *a.b;
    }
    r["family"] = fam;
    r["coefficients"] = to_json(f);
    r["polytope"] = to_json(P);
    r["positive_on_polytope"] = vm.value > 0.0;
    r["min_vertex_value"] = vm.value;
    r["min_vertex_index"] = vm.index;
    if (vm.value > 0.0) {
        const ExtremalAffine ea = extremal_affine(P, f, 4.0, cfg.quad_tol);
        r["residual_a"] = ea.residual_a;
        r["residual_method"] = "quadrature";
        r["zeta"] = to_json(ea.zeta);
    } else {
        // f changes sign on P; only the rational continuation is available.
        try {
            const ExtremalAffine ea = extremal_affine_closed_form(P, f, 4);
            r["residual_a"] = ea.residual_a;
            r["zeta"] = to_json(ea.zeta);
        } catch (const Error&) {
            r["residual_a"] = nullptr;
            r["zeta"] = nullptr;
        }
        r["residual_method"] = "closed-form";
    }
    try {
        r["equipoised_sum"] = equipoised_check(P, f);
    } catch (const Error&) {
        r["equipoised_sum"] = nullptr;
    }
    return {r, kExitOk};
}

struct PolytopeArgs {
    std::string polytope;
    std::string f{"1,0,0"};
    double w{4.0};
};

Outcome cmd_zeta(const PolytopeArgs& a, const RunConfig& cfg)
{
    const LabelledPolytope2 P = read_polytope(a.polytope);
    const AffineMap2 f = parse_affine(a.f);
    const ExtremalAffine ea = extremal_affine(P, f, a.w, cfg.quad_tol);
    Json r = base_report("zeta", cfg);
    r["input"] = Json{{"polytope", to_json(P)}, {"f", to_json(f)}, {"w", a.w}};
    r["zeta"] = to_json(ea.zeta);
    r["gram_condition_number"] = ea.gram_condition_number;
    r["residual_a"] = ea.residual_a;
    r["condition_a"] = ea.residual_a < cfg.tau_a;
    const double m = a.w / 2.0;
    if (m == std::round(m) && m >= 1.0) {
        r["ckem_constant"] = ckem_constant(P, f, static_cast<int>(m), cfg.quad_tol);
    }
    return {r, kExitOk};
}

struct DfArgs {
    PolytopeArgs base;
    std::vector<std::string> phis;
    std::vector<std::string> creases;
    std::optional<std::size_t> scan;
    bool values{false};
};

Outcome cmd_df(const DfArgs& a, const RunConfig& cfg)
{
    const LabelledPolytope2 P = read_polytope(a.base.polytope);
    const AffineMap2 f = parse_affine(a.base.f);
    const double w = a.base.w;
    const ExtremalAffine ea = extremal_affine(P, f, w, cfg.quad_tol);
    Json r = base_report("df", cfg);
    r["input"] = Json{{"polytope", to_json(P)}, {"f", to_json(f)}, {"w", w}};
    r["zeta"] = to_json(ea.zeta);

    Json affine = Json::array();
    for (const auto& s : a.phis) {
        const AffineMap2 phi = parse_affine(s);
        affine.push_back({{"phi", to_json(phi)}, {"value", df_invariant(P, f, w, phi, ea.zeta, cfg.quad_tol)}});
    }
    r["affine"] = affine;

    Json creases = Json::array();
    for (const auto& s : a.creases) {
        const CreaseFunction c{parse_affine(s)};
        creases.push_back({{"ell", to_json(c.ell)},
                           {"crosses_interior", c.crosses(P)},
                           {"value", df_invariant(P, f, w, c, ea.zeta, cfg.quad_tol)}});
    }
    r["creases"] = creases;

    const std::size_t n = a.scan.value_or(a.phis.empty() && a.creases.empty() ? cfg.creases : 0);
    if (n > 0) {
        r["scan"] = to_json(crease_scan(P, f, w, n, cfg.seed, cfg.quad_tol), a.values);
    }
    return {r, kExitOk};
}

struct TwistArgs {
    PolytopeArgs base;
    bool no_center{false};
};

Outcome cmd_twist(const TwistArgs& a, const RunConfig& cfg)
{
    const LabelledPolytope2 P = read_polytope(a.base.polytope);
    const AffineMap2 f = parse_affine(a.base.f);
    Point2 t{0.0, 0.0};
    std::optional<LabelledPolytope2> source;
    AffineMap2 g = f;
    if (a.no_center) {
        source.emplace(P);
    } else {
        t = P.centroid();
        source.emplace(P.translated(t));
        g = f.shifted(t);
    }
    const LabelledPolytope2 tw = twist_polytope(*source, g);
    const TwistMap T(g);
    const AffineMap2 one = AffineMap2::constant(1.0);
    const ExtremalAffine ea = extremal_affine(*source, g, 4.0, cfg.quad_tol);
    const ExtremalAffine et = extremal_affine(tw, one, 4.0, cfg.quad_tol);
    const AffineMap2 predicted = twist_affine(g, ea.zeta);

    Json r = base_report("twist", cfg);
    r["input"] = Json{{"polytope", to_json(P)}, {"f", to_json(f)}};
    r["translation"] = {t.x(), t.y()};
    r["f"] = to_json(g);
    r["f_tilde"] = to_json(T.f_tilde());
    r["source"] = to_json(*source);
    r["twisted"] = to_json(tw);
    if (tw.size() == 4) {
        r["twisted_type"] = to_string(classify_quadrilateral(tw));
    }
    r["zeta"] = to_json(ea.zeta);
    r["zeta_twisted"] = to_json(et.zeta);
    r["zeta_twisted_predicted"] = to_json(predicted);
    r["is_identity"] = g.c1 == 0.0 && g.c2 == 0.0 && g.c0 == 1.0;
    const auto creases = sample_creases(*source, cfg.creases, cfg.seed);
    const CovarianceReport cov = check_df_covariance(*source, g, creases, cfg.quad_tol);
    r["covariance"] = Json{{"creases", creases.size()},
                           {"zeta_deviation", cov.zeta_deviation},
                           {"df_max_rel_deviation", cov.max_rel_deviation}};
    return {r, kExitOk};
}

Json verdict_json(const StabilityVerdict& v)
{
    Json tw{{"polytope", to_json(*v.twisted)},
            {"translation", {v.translation.x(), v.translation.y()}},
            {"zeta", to_json(v.zeta_twisted)}};
    tw["type"] = v.twisted_type ? Json(to_string(*v.twisted_type)) : Json(nullptr);
    Json j{{"verdict", to_string(v.verdict)},
           {"twist", tw},
           {"equipoised_sum", v.equipoised_sum},
           {"equipoised_relative", v.equipoised_relative},
           {"residual_a", v.extremal.residual_a},
           {"zeta", to_json(v.extremal.zeta)}};
    if (v.crease) {
        j["crease_min"] = v.crease->minimum;
        j["crease_violations"] = v.crease->violations;
        j["crease"] = to_json(*v.crease);
    } else {
        j["crease_min"] = nullptr;
    }
    return j;
}

VerdictOptions verdict_options(const RunConfig& cfg)
{
    return {cfg.quad_tol, cfg.tau_a, cfg.tau_eq, cfg.creases, cfg.seed};
}

struct StabilityArgs {
    PolytopeArgs base;
    bool no_roots{false};
    std::size_t starts{64};
};

Outcome cmd_stability(const StabilityArgs& a, const RunConfig& cfg)
{
    const LabelledPolytope2 P = read_polytope(a.base.polytope);
    const AffineMap2 f = parse_affine(a.base.f);
    const StabilityVerdict v = stability_verdict(P, f, a.base.w, verdict_options(cfg));
    Json r = base_report("stability", cfg);
    r["input"] = Json{{"polytope", to_json(P)}, {"f", to_json(f)}, {"w", a.base.w}};
    r.update(verdict_json(v));
    Json roots = Json::array();
    if (!a.no_roots && P.size() == 4) {
        SolverOptions so;
        so.starts = a.starts;
        so.seed = cfg.seed;
        try {
            for (const auto& s : solve_condition_a(P, a.base.w, so)) {
                roots.push_back(to_json(s));
            }
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NoConvergence) {
                throw;
            }
        }
    }
    r["roots"] = roots;
    return {r, kExitOk};
}

struct SolveArgs {
    std::string polytope;
    std::optional<double> p;
    int k{1};
    double w{4.0};
    std::size_t starts{64};
    double tol{1e-9};
};

LabelledPolytope2 polytope_or_hirzebruch(const std::string& path, const std::optional<double>& p, int k)
{
    if (!path.empty()) {
        return read_polytope(path);
    }
    if (!p) {
        throw Error(ErrorKind::InvalidInput, "give --polytope or --p (with --k)");
    }
    return hirzebruch_delzant(*p, k);
}

Outcome cmd_solve(const SolveArgs& a, const RunConfig& cfg)
{
    const LabelledPolytope2 P = polytope_or_hirzebruch(a.polytope, a.p, a.k);
    SolverOptions so;
    so.starts = a.starts;
    so.seed = cfg.seed;
    so.tol = a.tol;
    const auto roots = solve_condition_a(P, a.w, so);
    Json r = base_report("solve-a", cfg);
    r["input"] = Json{{"polytope", to_json(P)}, {"w", a.w}, {"starts", a.starts}, {"tol", a.tol}};
    Json rj = Json::array();
    std::size_t positive = 0;
    for (const auto& s : roots) {
        rj.push_back(to_json(s));
        positive += s.positive_on_polytope ? 1 : 0;
    }
    r["roots"] = rj;
    r["root_count"] = roots.size();
    r["positive_root_count"] = positive;
    return {r, kExitOk};
}

// -------------------------------------------------------------------- verify

struct Thm2Args {
    std::vector<int> ks{1, 2, 3, 4};
    std::size_t grid{25};
};

Outcome cmd_verify_thm2(const Thm2Args& a, const RunConfig& cfg)
{
    Json samples = Json::array();
    std::size_t stable = 0;
    std::size_t generic = 0;
    double crease_min = INFINITY;
    const VerdictOptions vo = verdict_options(cfg);
    for (int k : a.ks) {
        const auto [lo, hi] = family_domain(FamilyId::FutakiOno, k);
        for (double p : p_grid(lo, hi, a.grid)) {
            const LabelledPolytope2 P = hirzebruch_delzant(p, k);
            for (int sign : {+1, -1}) {
                const AffineMap2 f = family_f(FamilyId::FutakiOno, {p, k, sign});
                const StabilityVerdict v = stability_verdict(P, f, 4.0, vo);
                Json s{{"k", k},
                       {"p", p},
                       {"sign", sign},
                       {"f", to_json(f)},
                       {"residual_a", v.extremal.residual_a},
                       {"min_vertex_value", min_over_vertices(P, f).value},
                       {"equipoised_f", equipoised_check(P, f)},
                       {"equipoised_relative", v.equipoised_relative},
                       {"twisted_type", v.twisted_type ? Json(to_string(*v.twisted_type)) : Json(nullptr)},
                       {"verdict", to_string(v.verdict)}};
                if (v.crease) {
                    s["crease_min"] = v.crease->minimum;
                    s["crease_violations"] = v.crease->violations;
                    crease_min = std::min(crease_min, v.crease->minimum);
                }
                stable += v.verdict == Verdict::StableByTheorem ? 1 : 0;
                generic += v.twisted_type == QuadType::GenericQuadrilateral ? 1 : 0;
                samples.push_back(s);
            }
        }
    }
    Json r = base_report("verify thm2", cfg);
    r["ks"] = a.ks;
    r["grid"] = a.grid;
    r["samples"] = samples;
    r["summary"] = Json{{"samples", samples.size()},
                        {"stable_by_theorem", stable},
                        {"generic_quadrilateral", generic},
                        {"crease_min", std::isfinite(crease_min) ? Json(crease_min) : Json(nullptr)},
                        {"all_stable", stable == samples.size()}};
    return {r, stable == samples.size() ? kExitOk : kExitVerificationFailed};
}

Json case12_json(const Case12Report& rep)
{
    Json ce = Json::array();
    for (const auto& e : rep.counterexamples) {
        ce.push_back({{"p", e.sample.p}, {"b", e.sample.b}, {"min_plus", e.min_plus}, {"min_minus", e.min_minus}});
    }
    std::size_t both = 0;
    for (const auto& e : rep.entries) {
        both += (e.min_plus < 0.0 && e.min_minus < 0.0) ? 1 : 0;
    }
    return Json{{"samples", rep.entries.size()},
                {"max_of_min_vertex_values", rep.max_of_min_vertex_values},
                {"both_signs_negative", both},
                {"counterexamples", ce}};
}

struct Case12Args {
    std::size_t samples{500};
};

Outcome cmd_verify_case12(const Case12Args& a, const RunConfig& cfg)
{
    const Case12Report rep = positivity_scan_case12(case12_samples(a.samples, cfg.seed));
    Json r = base_report("verify case12", cfg);
    r.update(case12_json(rep));
    return {r, rep.counterexamples.empty() && rep.max_of_min_vertex_values < 0.0 ? kExitOk
                                                                                 : kExitVerificationFailed};
}

Outcome cmd_verify_identity(const RunConfig& cfg)
{
    Json zeros = Json::array();
    Json values = Json::array();
    bool all = true;
    for (const auto& q : identity_e2_points()) {
        const Rational v = identity_e2(q);
        values.push_back(v.str());
        if (v == 0) {
            zeros.push_back(q.str());
        } else {
            all = false;
        }
    }
    Json r = base_report("verify identity-e2", cfg);
    r["exact_zero_at"] = zeros;
    r["values"] = values;
    r["degree_bound"] = 6;
    r["certified"] = all && zeros.size() >= 7;
    return {r, all ? kExitOk : kExitVerificationFailed};
}

struct Thm1Args {
    std::size_t grid{25};
    std::size_t starts{64};
    std::size_t samples{500};
};

Outcome cmd_verify_thm1(const Thm1Args& a, const RunConfig& cfg)
{
    const double r1 = r_k(1);
    Json rows = Json::array();
    bool ok = true;
    SolverOptions so;
    so.starts = a.starts;
    so.seed = cfg.seed;
    for (double p : p_grid(0.0, 1.0, a.grid)) {
        const LabelledPolytope2 P = hirzebruch_delzant(p, 1);
        std::vector<std::pair<FamilyId, int>> expected{{FamilyId::LeBrunCalabi, +1}};
        if (p > 8.0 / 9.0 + kDomainGuard) {
            expected.push_back({FamilyId::LeBrunB, +1});
            expected.push_back({FamilyId::LeBrunB, -1});
        }
        if (p < r1 - kDomainGuard) {
            expected.push_back({FamilyId::FutakiOno, +1});
            expected.push_back({FamilyId::FutakiOno, -1});
        }
        const auto roots = solve_condition_a(P, 4.0, so);
        Json pos = Json::array();
        std::vector<int> hits(expected.size(), 0);
        bool row_ok = true;
        double worst_quad = 0.0;
        for (const auto& s : roots) {
            if (!s.positive_on_polytope) {
                continue;
            }
            Json sj = to_json(s);
            const double qres = extremal_affine(P, s.f, 4.0, cfg.quad_tol).residual_a;
            sj["quadrature_residual_a"] = qres;
            worst_quad = std::max(worst_quad, qres);
            pos.push_back(sj);
            bool matched = false;
            if (s.matched_family) {
                for (std::size_t i = 0; i < expected.size(); ++i) {
                    const bool same_sign = expected[i].first == FamilyId::LeBrunCalabi ||
                                           expected[i].second == s.matched_family->sign;
                    if (expected[i].first == s.matched_family->id && same_sign) {
                        ++hits[i];
                        matched = true;
                    }
                }
            }
            row_ok = row_ok && matched;
        }
        for (int h : hits) {
            row_ok = row_ok && h == 1;
        }
        row_ok = row_ok && worst_quad < 10.0 * so.tol;
        ok = ok && row_ok;
        Json exp = Json::array();
        for (const auto& [id, sign] : expected) {
            exp.push_back(to_string(id) + (id == FamilyId::LeBrunCalabi ? "" : (sign > 0 ? "+" : "-")));
        }
        rows.push_back({{"p", p},
                        {"expected_positive", exp},
                        {"positive_roots", pos},
                        {"root_count", roots.size()},
                        {"ok", row_ok}});
    }
    const Case12Report rep = positivity_scan_case12(case12_samples(a.samples, cfg.seed));
    const bool case12_ok = rep.counterexamples.empty() && rep.max_of_min_vertex_values < 0.0;
    Json r = base_report("verify thm1-uniqueness", cfg);
    r["grid"] = a.grid;
    r["rows"] = rows;
    r["case12"] = case12_json(rep);
    r["all_ok"] = ok && case12_ok;
    return {r, ok && case12_ok ? kExitOk : kExitVerificationFailed};
}

// ---------------------------------------------------------------- plumbing

void emit_error(std::ostream& err, const std::string& kind, const std::string& message)
{
    err << dump(Json{{"error", kind}, {"message", message}});
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    apply_thread_cap();

    CLI::App app{"Weighted K-stability toolkit for labelled toric polygons", "torick"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    std::string config_path;
    bool human = false;
    std::optional<double> quad_tol, tau_a, tau_eq;
    std::optional<std::size_t> creases;
    std::optional<std::uint64_t> seed;
    std::string output;
    app.add_option("--config", config_path, "RunConfig JSON file");
    app.add_flag("--human", human, "aligned text instead of JSON");
    app.add_option("--output", output, "write the report to this file");
    app.add_option("--quad-tol", quad_tol, "quadrature tolerance");
    app.add_option("--tau-a", tau_a, "threshold on residual_a");
    app.add_option("--tau-eq", tau_eq, "threshold on the relative equipoised sum");
    app.add_option("--creases", creases, "crease count for scans");
    app.add_option("--seed", seed, "random seed");

    std::function<Outcome()> action;

    auto add_polytope_opts = [](CLI::App* c, PolytopeArgs& a, bool need_w) {
        c->add_option("--polytope", a.polytope, "polytope JSON file")->required();
        c->add_option("--f", a.f, "weight c0,c1,c2");
        if (need_w) {
            c->add_option("--w", a.w, "weight exponent");
        }
    };

    FamilyArgs fa;
    auto* family = app.add_subcommand("family", "coefficients of a family member");
    family->add_option("--id", fa.id, "lebrun-calabi | lebrun-b | futaki-ono | fo-case12")->required();
    family->add_option("--p", fa.p, "trapezoid parameter")->required();
    family->add_option("--k", fa.k, "Hirzebruch index");
    family->add_option("--sign", fa.sign, "branch, + or -");
    family->add_option("--b", fa.b, "x2 coefficient (fo-case12)");
    family->add_flag("--exploratory", fa.exploratory, "allow futaki-ono with k >= 5");
    family->callback([&] { action = [&] { return cmd_family(fa, cfg); }; });

    PolytopeArgs za;
    auto* zeta = app.add_subcommand("zeta", "extremal affine function");
    add_polytope_opts(zeta, za, true);
    zeta->callback([&] { action = [&] { return cmd_zeta(za, cfg); }; });

    DfArgs da;
    auto* df = app.add_subcommand("df", "weighted Donaldson-Futaki invariant");
    add_polytope_opts(df, da.base, true);
    df->add_option("--phi", da.phis, "affine test function c0,c1,c2 (repeatable)");
    df->add_option("--crease", da.creases, "crease max(0, ell) with ell = c0,c1,c2 (repeatable)");
    df->add_option("--scan", da.scan, "number of sampled creases");
    df->add_flag("--values", da.values, "include every scanned value");
    df->callback([&] { action = [&] { return cmd_df(da, cfg); }; });

    TwistArgs ta;
    auto* twist = app.add_subcommand("twist", "f-twist of a labelled polygon");
    add_polytope_opts(twist, ta.base, false);
    twist->add_flag("--no-center", ta.no_center, "twist in the given coordinates instead of about the centroid");
    twist->callback([&] { action = [&] { return cmd_twist(ta, cfg); }; });

    StabilityArgs sa;
    auto* stability = app.add_subcommand("stability", "stability verdict through the twist");
    add_polytope_opts(stability, sa.base, true);
    stability->add_flag("--no-roots", sa.no_roots, "skip the condition (a) solver");
    stability->add_option("--starts", sa.starts, "solver starts");
    stability->callback([&] { action = [&] { return cmd_stability(sa, cfg); }; });

    SolveArgs sv;
    auto* solve = app.add_subcommand("solve-a", "solve condition (a) for f");
    solve->add_option("--polytope", sv.polytope, "polytope JSON file");
    solve->add_option("--p", sv.p, "use the Hirzebruch trapezoid with this p");
    solve->add_option("--k", sv.k, "Hirzebruch index");
    solve->add_option("--w", sv.w, "weight exponent");
    solve->add_option("--starts", sv.starts, "number of starts");
    solve->add_option("--tol", sv.tol, "solver tolerance");
    solve->callback([&] { action = [&] { return cmd_solve(sv, cfg); }; });

    auto* verify = app.add_subcommand("verify", "verification pipelines");
    verify->require_subcommand(1);

    Thm2Args t2;
    auto* thm2 = verify->add_subcommand("thm2", "stability of the futaki-ono families");
    thm2->add_option("--k", t2.ks, "values of k")->expected(1, -1);
    thm2->add_option("--grid", t2.grid, "p values per k");
    thm2->callback([&] { action = [&] { return cmd_verify_thm2(t2, cfg); }; });

    Thm1Args t1;
    auto* thm1 = verify->add_subcommand("thm1-uniqueness", "solver scan over Delta_{p,1} and the case12 scan");
    thm1->add_option("--grid", t1.grid, "p values");
    thm1->add_option("--starts", t1.starts, "solver starts");
    thm1->add_option("--samples", t1.samples, "case12 samples");
    thm1->callback([&] { action = [&] { return cmd_verify_thm1(t1, cfg); }; });

    auto* ide2 = verify->add_subcommand("identity-e2", "exact check of the closing identity");
    ide2->callback([&] { action = [&] { return cmd_verify_identity(cfg); }; });

    Case12Args c12;
    auto* case12 = verify->add_subcommand("case12", "vertex positivity of the fo-case12 family");
    case12->add_option("--samples", c12.samples, "number of (p, b) samples");
    case12->callback([&] { action = [&] { return cmd_verify_case12(c12, cfg); }; });

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        emit_error(err, "InvalidInput", e.what());
        return kExitInputError;
    }

    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                throw Error(ErrorKind::InvalidInput, "cannot open config '" + config_path + "'");
            }
            Json j;
            try {
                in >> j;
            } catch (const Json::exception& e) {
                throw Error(ErrorKind::InvalidInput, config_path + ": " + e.what());
            }
            cfg = run_config_from_json(j, cfg);
        }
        if (quad_tol) cfg.quad_tol = *quad_tol;
        if (tau_a) cfg.tau_a = *tau_a;
        if (tau_eq) cfg.tau_eq = *tau_eq;
        if (creases) cfg.creases = *creases;
        if (seed) cfg.seed = *seed;
        if (!output.empty()) cfg.output = output;
        cfg.validate();

        const Outcome o = action();
        const std::string text = human ? render_human(o.report) : dump(o.report);
        if (cfg.output.empty()) {
            out << text;
        } else {
            std::ofstream f(cfg.output);
            if (!f) {
                throw Error(ErrorKind::InvalidInput, "cannot write '" + cfg.output + "'");
            }
            f << text;
        }
        return o.code;
    } catch (const Error& e) {
        emit_error(err, std::string(to_string(e.kind())), e.what());
        if (e.kind() == ErrorKind::ConditionANotMet) {
            return kExitVerificationFailed;
        }
        return is_input_error(e.kind()) ? kExitInputError : kExitNumericError;
    } catch (const std::exception& e) {
        emit_error(err, "Internal", e.what());
        return kExitNumericError;
    }
}

}  // namespace torick
