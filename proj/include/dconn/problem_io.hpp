#pragma once

#include <map>
#include <string>

#include "dconn/coords.hpp"

#include <json.hpp>

namespace dconn {

/// Tolerances used by the verification commands; every value can be
/// overridden per problem file under "tolerances".
struct Tolerances {
    double apparency = 1e-10;
    double residue = 1e-10;
    double spectral_log = 1e-9;
    double spectral_irr = 1e-8;
    double gluing = 1e-9;
    double trace_identity = 1e-10;
    double coords_agreement = 1e-10;
    double roundtrip = 1e-8;
    double symp_extrapolated = 1e-6;

    std::map<std::string, double*> fields();
};

struct Problem {
    Cx lambda{};
    SpectralData spectral = LogSpectral{};
    ApparentConfig config{};
    Tolerances tol{};

    LegendreCurve curve() const { return LegendreCurve(lambda); }
};

inline constexpr int kSchemaVersion = 1;

Problem load_problem(const std::string& path);
Problem problem_from_json(const nlohmann::json& j);
nlohmann::ordered_json problem_to_json(const Problem& p);

struct CoordsFile {
    Cx lambda{};
    SpectralData spectral = LogSpectral{};
    CanonicalCoords coords{};
    std::array<Cx, 3> branch_hints{};
    Tolerances tol{};
};

CoordsFile load_coords(const std::string& path);
nlohmann::ordered_json coords_to_json(const CoordsFile& c);

nlohmann::ordered_json cx_json(Cx z);
Cx cx_from_json(const nlohmann::json& j);

void write_json_file(const std::string& path, const nlohmann::ordered_json& j);

} // namespace dconn
