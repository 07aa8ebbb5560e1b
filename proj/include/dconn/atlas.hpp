#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dconn/companion.hpp"

namespace dconn {

/// 2x2 matrix over the function field.  Used both for transition matrices
/// (plain functions) and for connection matrices, whose entries are then the
/// dx1-coefficients of the corresponding 1-forms.
struct FMat2 {
    FieldElem e[2][2];

    static FMat2 zero() { return FMat2{}; }
    static FMat2 identity();
};

FMat2 fm_add(const FMat2& p, const FMat2& q);
FMat2 fm_sub(const FMat2& p, const FMat2& q);
FMat2 fm_mul(const LegendreCurve& c, const FMat2& p, const FMat2& q);
FMat2 fm_inverse(const LegendreCurve& c, const FMat2& p);
/// Entrywise d/dx (turns a function matrix into the dx-coefficients of dB).
FMat2 fm_ddx(const LegendreCurve& c, const FMat2& p);
FieldElem fm_det(const LegendreCurve& c, const FMat2& p);

struct ConnectionAtlas {
    CompanionForm companion;
    FMat2 B0q[3];       // transition from U_qj-frame to U_0-frame
    FMat2 B0inf;        // transition from U_infty-frame to U_0-frame (x1 coords)
    FMat2 A0;           // dx1-coefficients of the U_0 connection matrix
    FMat2 Aq[3];        // dx1-coefficients of the U_qj connection matrices
    FMat2 Ainf;         // dx1-coefficients of the U_infty matrix, transported to x1
};

/// Assemble transitions and connection matrices from the displayed formulas.
ConnectionAtlas assemble_atlas(const CompanionForm& form);

/// assemble + holomorphy at q_j + gluing + trace identity + polar-part
/// fidelity; throws GluingFailure on violation.
ConnectionAtlas build_atlas(const CompanionForm& form);

struct GluingReport {
    struct Overlap {
        std::string name;
        double max_residual = 0.0;
        int samples = 0;
    };
    std::vector<Overlap> overlaps;
    std::uint64_t seed = 0;
    bool vacuous = false; // n_samples == 0
    double worst() const;
};

/// Sampled residual of B^-1 A_0 B + B^-1 dB - A_target on each overlap,
/// avoiding singular x by 0.05.  Deterministic for a fixed seed.
GluingReport check_gluing(const ConnectionAtlas& atlas, int n_samples,
                          std::uint64_t seed = 0x5eedULL);

/// |value at q_j| of the (1,2)-entry's order -1 coefficient; nonzero means
/// A_qj has a pole at q_j (apparency broken).
std::array<double, 3> holomorphy_residuals(const ConnectionAtlas& atlas);

struct TraceSection {
    CurveForm on_U0;       // omega22
    CurveForm on_Uq[3];    // omega11^(j) + omega22^(j)
    CurveForm on_Uinf_x1;  // omega22 - dx1/x1 (the U_infty matrix in x1 coords)
    std::array<double, 4> cocycle_residuals{}; // vs d log det of the transitions
};

TraceSection extract_trace_section(const ConnectionAtlas& atlas);

struct DetLineDegree {
    int degree = 0;            // rounded winding sum; 1 for these atlases
    double preround_distance = 0.0;
};

/// Winding contributions of d log det(B^{-1}) around each gluing annulus.
DetLineDegree det_line_degree(const ConnectionAtlas& atlas);

struct SpectralFidelity {
    // logarithmic: per pole i, eigenvalue set distance to {theta_i+, theta_i-}
    // irregular: coefficient residuals at orders (-2,-1) plus the sum/product
    // condition residuals.
    std::vector<double> residuals;
    std::vector<std::string> labels;
    double worst() const;
};

/// Eigenvalue data of the polar part of A0 at the pole divisor, measured by
/// series expansion, against the spectral data.
SpectralFidelity check_spectral_fidelity(const CompanionForm& form, int window = 10);

} // namespace dconn
