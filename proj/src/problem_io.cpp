#include "dconn/problem_io.hpp"

#include <fstream>

namespace dconn {

using nlohmann::json;
using nlohmann::ordered_json;

std::map<std::string, double*> Tolerances::fields() {
    return {
        {"apparency", &apparency},
        {"residue", &residue},
        {"spectral_log", &spectral_log},
        {"spectral_irr", &spectral_irr},
        {"gluing", &gluing},
        {"trace_identity", &trace_identity},
        {"coords_agreement", &coords_agreement},
        {"roundtrip", &roundtrip},
        {"symp_extrapolated", &symp_extrapolated},
    };
}

ordered_json cx_json(Cx z) { return ordered_json::array({z.real(), z.imag()}); }

Cx cx_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw InvalidData("complex values must be [re, im] pairs");
    return Cx(j[0].get<double>(), j[1].get<double>());
}

namespace {

json slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidData("cannot open input file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InvalidData(std::string("malformed JSON: ") + e.what());
    }
    return j;
}

void require_schema(const json& j) {
    if (!j.contains("schema_version"))
        throw InvalidData("missing mandatory schema_version field");
    if (j["schema_version"].get<int>() != kSchemaVersion)
        throw InvalidData("unsupported schema_version");
}

Tolerances parse_tolerances(const json& j) {
    Tolerances tol;
    if (!j.contains("tolerances")) return tol;
    const json& t = j.at("tolerances");
    if (!t.is_object()) throw InvalidData("tolerances must be an object");
    auto fields = tol.fields();
    for (auto it = t.begin(); it != t.end(); ++it) {
        auto f = fields.find(it.key());
        if (f == fields.end()) throw InvalidData("unknown tolerance key: " + it.key());
        *f->second = it.value().get<double>();
    }
    return tol;
}

SpectralData parse_spectral(const json& s) {
    if (!s.is_object() || !s.contains("type")) throw InvalidData("spectral block needs a type tag");
    const std::string type = s.at("type").get<std::string>();
    if (type == "logarithmic") {
        LogSpectral lg;
        lg.t = cx_from_json(s.at("t"));
        lg.s = cx_from_json(s.at("s_branch"));
        const json& t1 = s.at("theta1");
        const json& t2 = s.at("theta2");
        if (!t1.is_array() || t1.size() != 2 || !t2.is_array() || t2.size() != 2)
            throw InvalidData("theta1/theta2 must be [plus, minus] pairs");
        lg.th1p = cx_from_json(t1[0]);
        lg.th1m = cx_from_json(t1[1]);
        lg.th2p = cx_from_json(t2[0]);
        lg.th2m = cx_from_json(t2[1]);
        return lg;
    }
    if (type == "irregular") {
        IrregularSpectral irr;
        const std::string root = s.at("t_root").get<std::string>();
        if (root == "0") irr.root = IrregularSpectral::Root::Zero;
        else if (root == "1") irr.root = IrregularSpectral::Root::One;
        else if (root == "lambda") irr.root = IrregularSpectral::Root::Lambda;
        else if (root == "infty" || root == "infinity")
            throw InvalidData("t_root=infty is not supported by this build (finite roots only)");
        else throw InvalidData("t_root must be one of \"0\", \"1\", \"lambda\"");
        const json& tm2 = s.at("theta_m2");
        if (!tm2.is_array() || tm2.size() != 2)
            throw InvalidData("theta_m2 must be [plus, minus]");
        irr.th_m2_plus = cx_from_json(tm2[0]);
        irr.th_m2_minus = cx_from_json(tm2[1]);
        irr.th_m1_plus = cx_from_json(s.at("theta_m1_plus"));
        return irr;
    }
    throw InvalidData("spectral type must be \"logarithmic\" or \"irregular\"");
}

ordered_json spectral_to_json(const SpectralData& sd) {
    ordered_json s;
    if (const auto* lg = std::get_if<LogSpectral>(&sd)) {
        s["type"] = "logarithmic";
        s["t"] = cx_json(lg->t);
        s["s_branch"] = cx_json(lg->s);
        s["theta1"] = ordered_json::array({cx_json(lg->th1p), cx_json(lg->th1m)});
        s["theta2"] = ordered_json::array({cx_json(lg->th2p), cx_json(lg->th2m)});
    } else {
        const auto& irr = std::get<IrregularSpectral>(sd);
        s["type"] = "irregular";
        switch (irr.root) {
            case IrregularSpectral::Root::Zero: s["t_root"] = "0"; break;
            case IrregularSpectral::Root::One: s["t_root"] = "1"; break;
            case IrregularSpectral::Root::Lambda: s["t_root"] = "lambda"; break;
        }
        s["theta_m2"] = ordered_json::array({cx_json(irr.th_m2_plus), cx_json(irr.th_m2_minus)});
        s["theta_m1_plus"] = cx_json(irr.th_m1_plus);
    }
    return s;
}

} // namespace

Problem problem_from_json(const json& j) {
    require_schema(j);
    Problem p;
    p.lambda = cx_from_json(j.at("lambda"));
    p.spectral = parse_spectral(j.at("spectral"));
    const json& ap = j.at("apparent");
    if (!ap.is_array() || ap.size() != 3)
        throw InvalidData("apparent must list exactly 3 points");
    const LegendreCurve curve(p.lambda);
    for (int k = 0; k < 3; ++k) {
        const json& e = ap[static_cast<std::size_t>(k)];
        const Cx u = cx_from_json(e.at("u"));
        const Cx vh = cx_from_json(e.at("v_branch"));
        const CurvePoint q = lift_point(curve, u, vh);
        p.config.pts[static_cast<std::size_t>(k)] = {q.x, q.y, cx_from_json(e.at("zeta"))};
    }
    p.tol = parse_tolerances(j);
    return p;
}

Problem load_problem(const std::string& path) { return problem_from_json(slurp(path)); }

ordered_json problem_to_json(const Problem& p) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["lambda"] = cx_json(p.lambda);
    j["spectral"] = spectral_to_json(p.spectral);
    ordered_json ap = ordered_json::array();
    for (const auto& pt : p.config.pts) {
        ordered_json e;
        e["u"] = cx_json(pt.u);
        e["v_branch"] = cx_json(pt.v);
        e["zeta"] = cx_json(pt.zeta);
        ap.push_back(std::move(e));
    }
    j["apparent"] = std::move(ap);
    return j;
}

CoordsFile load_coords(const std::string& path) {
    const json j = slurp(path);
    require_schema(j);
    CoordsFile c;
    c.lambda = cx_from_json(j.at("lambda"));
    c.spectral = parse_spectral(j.at("spectral"));
    const json& pts = j.at("coords");
    if (!pts.is_array() || pts.size() != 3) throw InvalidData("coords must list exactly 3 pairs");
    const json& hints = j.at("branch_hints");
    if (!hints.is_array() || hints.size() != 3) throw InvalidData("branch_hints must list 3 values");
    for (int k = 0; k < 3; ++k) {
        c.coords.u[static_cast<std::size_t>(k)] = cx_from_json(pts[static_cast<std::size_t>(k)].at("u"));
        c.coords.p[static_cast<std::size_t>(k)] = cx_from_json(pts[static_cast<std::size_t>(k)].at("p"));
        c.branch_hints[static_cast<std::size_t>(k)] = cx_from_json(hints[static_cast<std::size_t>(k)]);
    }
    c.tol = parse_tolerances(j);
    return c;
}

ordered_json coords_to_json(const CoordsFile& c) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["lambda"] = cx_json(c.lambda);
    j["spectral"] = spectral_to_json(c.spectral);
    ordered_json pts = ordered_json::array();
    for (int k = 0; k < 3; ++k) {
        ordered_json e;
        e["u"] = cx_json(c.coords.u[static_cast<std::size_t>(k)]);
        e["p"] = cx_json(c.coords.p[static_cast<std::size_t>(k)]);
        pts.push_back(std::move(e));
    }
    j["coords"] = std::move(pts);
    ordered_json hints = ordered_json::array();
    for (int k = 0; k < 3; ++k) hints.push_back(cx_json(c.branch_hints[static_cast<std::size_t>(k)]));
    j["branch_hints"] = std::move(hints);
    return j;
}

void write_json_file(const std::string& path, const ordered_json& j) {
    std::ofstream out(path);
    if (!out) throw InvalidData("cannot open output file: " + path);
    out << j.dump(2) << "\n";
}

} // namespace dconn
