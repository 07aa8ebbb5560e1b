#include "dconn/cli_commands.hpp"

#include <cstdlib>
#include <iostream>

#include "dconn/problem_io.hpp"
#include "dconn/symplectic.hpp"

namespace dconn {

using nlohmann::ordered_json;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag_seed) {
    if (flag_seed) return *flag_seed;
    if (const char* env = std::getenv("DARBOUX_CONN_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0') return v;
    }
    return kDefaultSeed;
}

namespace {

void apply_tol_overrides(Tolerances& tol, const std::vector<std::string>& overrides) {
    auto fields = tol.fields();
    for (const std::string& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw InvalidData("--tol expects key=value: " + kv);
        const std::string key = kv.substr(0, eq);
        auto f = fields.find(key);
        if (f == fields.end()) throw InvalidData("unknown tolerance key: " + key);
        char* end = nullptr;
        const double v = std::strtod(kv.c_str() + eq + 1, &end);
        if (!end || *end != '\0') throw InvalidData("bad tolerance value in: " + kv);
        *f->second = v;
    }
}

ordered_json params_json(const ResidueParams& rp, const Accessory& acc) {
    ordered_json p;
    p["A1"] = cx_json(rp.A1);
    p["A2"] = cx_json(rp.A2);
    p["A3"] = cx_json(acc.A3);
    p["A4"] = cx_json(acc.A4);
    p["B1"] = cx_json(rp.B1);
    p["B2"] = cx_json(rp.B2);
    p["B3"] = cx_json(acc.B3);
    return p;
}

struct VerifyBundle {
    ordered_json residuals;
    bool pass = true;
};

void note(VerifyBundle& vb, const std::string& key, double value, double tol) {
    ordered_json row;
    row["value"] = value;
    row["tolerance"] = tol;
    row["pass"] = value <= tol;
    vb.residuals[key] = std::move(row);
    vb.pass = vb.pass && (value <= tol);
}

VerifyBundle verify_instance(const Problem& prob, const CompanionForm& form,
                             const ConnectionAtlas& atlas, std::uint64_t seed) {
    VerifyBundle vb;
    const Tolerances& tol = prob.tol;
    const LegendreCurve curve = form.curve;
    const double scale = companion_scale(form);

    const ApparencyReport app = verify_apparency(form);
    for (int j = 0; j < 3; ++j)
        note(vb, "apparency_q" + std::to_string(j + 1),
             app.residual[static_cast<std::size_t>(j)] / app.scale, tol.apparency);

    for (int j = 0; j < 3; ++j) {
        const Cx r = form_residue(curve, form.omega22, q_point(form, j));
        note(vb, "res_q" + std::to_string(j + 1) + "_omega22_minus_1", std::abs(r - Cx(1.0)), tol.residue);
    }
    const Cx rinf = form_residue(curve, form.omega22, CurvePoint::infinity());
    note(vb, "res_infinity_omega22_plus_2", std::abs(rinf + Cx(2.0)), tol.residue);

    const SpectralFidelity fid = check_spectral_fidelity(form);
    const double fid_tol = is_logarithmic(form.spectral) ? tol.spectral_log : tol.spectral_irr;
    for (std::size_t k = 0; k < fid.residuals.size(); ++k)
        note(vb, "spectral_" + fid.labels[k], fid.residuals[k], fid_tol);

    const GluingReport glue = check_gluing(atlas, 20, seed);
    for (const auto& ov : glue.overlaps) note(vb, "gluing_" + ov.name, ov.max_residual, tol.gluing);

    const auto holo = holomorphy_residuals(atlas);
    for (int j = 0; j < 3; ++j)
        note(vb, "holomorphy_q" + std::to_string(j + 1),
             holo[static_cast<std::size_t>(j)] / scale, tol.apparency);

    const TraceSection tr = extract_trace_section(atlas);
    for (std::size_t k = 0; k < tr.cocycle_residuals.size(); ++k)
        note(vb, "trace_cocycle_" + std::to_string(k), tr.cocycle_residuals[k], tol.trace_identity);

    const DetLineDegree deg = det_line_degree(atlas);
    note(vb, "det_line_degree_preround", deg.preround_distance, 1e-8);
    vb.pass = vb.pass && (deg.degree == 1);
    vb.residuals["det_line_degree"] = deg.degree;
    return vb;
}

int guarded(const std::string& command, const CliOptions& opt,
            int (*body)(const std::string&, const CliOptions&)) {
    try {
        return body(command, opt);
    } catch (const InvalidData& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NearSingular& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const OffCurve& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DegenerateCurve& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

ordered_json report_head(const std::string& command, const ordered_json& inputs) {
    ordered_json rep;
    rep["schema_version"] = kSchemaVersion;
    rep["command"] = command;
    rep["inputs"] = inputs;
    return rep;
}

int solve_body(const std::string& command, const CliOptions& opt) {
    Problem prob = load_problem(opt.input);
    apply_tol_overrides(prob.tol, opt.tol_overrides);
    const LegendreCurve curve = prob.curve();
    const std::uint64_t seed = resolve_seed({});

    const CompanionForm form = build_companion(curve, prob.spectral, prob.config);
    const ConnectionAtlas atlas = build_atlas(form);
    const VerifyBundle vb = verify_instance(prob, form, atlas, seed);

    ordered_json rep = report_head(command, problem_to_json(prob));
    ordered_json results;
    results["params"] = params_json(form.params, form.acc);
    results["stability_det"] = cx_json(stability_det(prob.config));
    results["res_infinity_omega22"] = cx_json(form_residue(curve, form.omega22, CurvePoint::infinity()));
    results["residuals"] = vb.residuals;
    rep["results"] = std::move(results);
    rep["seeds"] = ordered_json{{"gluing", seed}};
    rep["pass"] = vb.pass;
    write_json_file(opt.output, rep);
    return vb.pass ? 0 : 1;
}

int coords_body(const std::string& command, const CliOptions& opt) {
    Problem prob = load_problem(opt.input);
    apply_tol_overrides(prob.tol, opt.tol_overrides);
    const LegendreCurve curve = prob.curve();
    const CanonicalCoords coords = forward_map(curve, prob.spectral, prob.config);

    CoordsFile cf;
    cf.lambda = prob.lambda;
    cf.spectral = prob.spectral;
    cf.coords = coords;
    for (int k = 0; k < 3; ++k)
        cf.branch_hints[static_cast<std::size_t>(k)] = prob.config.pts[static_cast<std::size_t>(k)].v;

    ordered_json rep = report_head(command, problem_to_json(prob));
    rep["results"] = coords_to_json(cf);
    rep["pass"] = true;
    write_json_file(opt.output, rep);
    return 0;
}

int invert_body(const std::string& command, const CliOptions& opt) {
    CoordsFile cf = load_coords(opt.input);
    apply_tol_overrides(cf.tol, opt.tol_overrides);
    const LegendreCurve curve(cf.lambda);
    const ApparentConfig cfg = inverse_map(curve, cf.spectral, cf.coords, cf.branch_hints);

    // round-trip: forward of the reconstruction must reproduce the inputs
    const CanonicalCoords back = forward_map(curve, cf.spectral, cfg);
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double ref = std::max(1.0, std::abs(cf.coords.p[static_cast<std::size_t>(k)]));
        worst = std::max(worst, std::abs(back.p[static_cast<std::size_t>(k)] -
                                         cf.coords.p[static_cast<std::size_t>(k)]) / ref);
    }
    const bool pass = worst <= cf.tol.roundtrip;

    Problem echo;
    echo.lambda = cf.lambda;
    echo.spectral = cf.spectral;
    echo.config = cfg;
    ordered_json rep = report_head(command, coords_to_json(cf));
    ordered_json results;
    results["apparent"] = problem_to_json(echo)["apparent"];
    results["roundtrip_residual"] = worst;
    rep["results"] = std::move(results);
    rep["pass"] = pass;
    write_json_file(opt.output, rep);
    return pass ? 0 : 1;
}

int verify_body(const std::string& command, const CliOptions& opt) {
    Problem prob = load_problem(opt.input);
    apply_tol_overrides(prob.tol, opt.tol_overrides);
    const LegendreCurve curve = prob.curve();
    const std::uint64_t seed = resolve_seed({});

    const CompanionForm form = build_companion(curve, prob.spectral, prob.config);
    const ConnectionAtlas atlas = build_atlas(form);
    VerifyBundle vb = verify_instance(prob, form, atlas, seed);

    // coordinate dual-path agreement rides along; a disagreement is a
    // verification failure (exit 1), not an input error
    bool coords_ok = true;
    try {
        (void)canonical_coordinates(atlas);
    } catch (const DisagreementError&) {
        coords_ok = false;
    }
    note(vb, "coords_dual_path", coords_ok ? 0.0 : 1.0, prob.tol.coords_agreement);

    ordered_json rep = report_head(command, problem_to_json(prob));
    rep["results"] = ordered_json{{"residuals", vb.residuals}};
    rep["seeds"] = ordered_json{{"gluing", seed}};
    rep["pass"] = vb.pass;
    write_json_file(opt.output, rep);
    return vb.pass ? 0 : 1;
}

int symp_body(const std::string& command, const CliOptions& opt) {
    if (opt.pairs <= 0) throw InvalidData("--pairs must be positive (vacuous run rejected)");
    if (opt.steps.size() < 2) throw InvalidData("--steps needs at least two values");
    Problem prob = load_problem(opt.input);
    apply_tol_overrides(prob.tol, opt.tol_overrides);
    const LegendreCurve curve = prob.curve();
    const std::uint64_t seed = resolve_seed(opt.seed);

    const auto rows = verify_symplectomorphism(curve, prob.spectral, prob.config,
                                               opt.pairs, opt.steps, seed);
    bool pass = true;
    ordered_json table = ordered_json::array();
    for (const auto& r : rows) {
        ordered_json row;
        row["pair"] = r.pair_index;
        row["fd_step"] = r.fd_step;
        row["cech"] = cx_json(r.cech_value);
        row["darboux"] = cx_json(r.darboux_value);
        row["residual"] = r.residual;
        row["extrapolated"] = r.extrapolated;
        if (r.extrapolated) row["order"] = r.order;
        if (r.degenerate) row["degenerate"] = true;
        table.push_back(std::move(row));
        if (r.extrapolated && !r.degenerate)
            pass = pass && (r.residual < prob.tol.symp_extrapolated) && (r.order >= 1.8);
    }

    ordered_json rep = report_head(command, problem_to_json(prob));
    ordered_json results;
    results["pairs"] = opt.pairs;
    ordered_json steps = ordered_json::array();
    for (double h : opt.steps) steps.push_back(h);
    results["steps"] = std::move(steps);
    results["table"] = std::move(table);
    rep["results"] = std::move(results);
    rep["seeds"] = ordered_json{{"directions", seed}};
    rep["pass"] = pass;
    write_json_file(opt.output, rep);
    return pass ? 0 : 1;
}

} // namespace

int run_solve(const CliOptions& opt) { return guarded("solve", opt, solve_body); }
int run_verify(const CliOptions& opt) { return guarded("verify", opt, verify_body); }
int run_coords(const CliOptions& opt) { return guarded("coords", opt, coords_body); }
int run_invert(const CliOptions& opt) { return guarded("invert", opt, invert_body); }
int run_symp_check(const CliOptions& opt) { return guarded("symp-check", opt, symp_body); }

} // namespace dconn
