#pragma once

#include <array>

#include "dconn/spectral.hpp"

namespace dconn {

struct ApparentPoint {
    Cx u;
    Cx v;    // on-curve branch value, v^2 = K(u)
    Cx zeta; // residue coefficient of beta at the point, coordinate x1 - u
};

struct ApparentConfig {
    std::array<ApparentPoint, 3> pts;
    static constexpr double kMinSeparation = 1e-10;
};

/// Distinctness, distance from {0,1,lambda,t} and from branch points,
/// on-curve check.  Throws InvalidData / OffCurve.
void validate_config(const LegendreCurve& curve, const SpectralData& spectral,
                     const ApparentConfig& config);

/// C_j = sum_{j'!=j} (zeta_j' - zeta_j)/2 * (v_j + v_j')/(u_j - u_j')
///       + (A1 + A2 v_j - zeta_j (B1 + B2 v_j) - zeta_j^2)/(u_j - t)
std::array<Cx, 3> compute_Cj(const ApparentConfig& config, const ResidueParams& params, Cx t);

/// det of rows (1, u_j, zeta_j); zero exactly on the non-stable locus.
Cx stability_det(const ApparentConfig& config);

struct Accessory {
    Cx A3, A4, B3;
};

/// Solve ((1)_j, (u_j)_j, (-zeta_j)_j) (A3,A4,B3)^T = -(C_j)_j by Cramer.
/// Throws NearSingular when the stability determinant is below threshold.
Accessory solve_accessory(const LegendreCurve& curve, const SpectralData& spectral,
                          const ApparentConfig& config);

struct CompanionForm {
    LegendreCurve curve;
    SpectralData spectral;
    ApparentConfig config;
    ResidueParams params;
    Accessory acc;
    CurveForm omega12, omega21, omega22;

    Cx t() const { return pole_x(curve, spectral); }
};

/// Assemble the three 1-forms from given parameters; no verification.
CompanionForm assemble_companion(const LegendreCurve& curve, const SpectralData& spectral,
                                 const ApparentConfig& config, const ResidueParams& params,
                                 const Accessory& acc);

/// Solve the residue parameters and the accessory parameters, assemble, and
/// verify the residue and apparency invariants.
CompanionForm build_companion(const LegendreCurve& curve, const SpectralData& spectral,
                              const ApparentConfig& config);

struct ApparencyReport {
    // residual_j = |C_j + A3 + A4 u_j - zeta_j B3|-equivalent measured through
    // series expansion of omega12 - zeta_j omega22 - zeta_j^2 omega21 at q_j.
    std::array<double, 3> residual{};
    std::array<double, 3> pole_residual{}; // |order -1 coefficient|, must vanish too
    double scale = 1.0;
    bool pass(double tol = 1e-10) const {
        for (double r : residual) if (r > tol * scale) return false;
        for (double r : pole_residual) if (r > tol * scale) return false;
        return true;
    }
};

/// Expansion-based apparency check, independent of the Cramer path.
ApparencyReport verify_apparency(const CompanionForm& form);

/// The forms omega12^(j), omega22^(j), omega11^(j) of the q_j-chart, built
/// from the displayed formulas (not by conjugation).
CurveForm omega11_j(const CompanionForm& form, int j);
CurveForm omega12_j(const CompanionForm& form, int j);
CurveForm omega22_j(const CompanionForm& form, int j);

CurvePoint q_point(const CompanionForm& form, int j);

/// Residual scale max(1,|A3|,|A4|,|B3|,max|C_j|).
double companion_scale(const CompanionForm& form);

} // namespace dconn
