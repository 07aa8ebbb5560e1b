#pragma once

#include <cstdint>
#include <vector>

#include "dconn/coords.hpp"

namespace dconn {

/// Direction in the (u, zeta) chart; six complex components for N = 3.
struct TangentVector {
    std::array<Cx, 3> du{};
    std::array<Cx, 3> dzeta{};

    static constexpr int kDim = 6; // 2N with N = 4g - 3 + n, g = 1, n = 2
    double norm() const;
};

/// Finite-difference deformation cocycles of one direction at one step.
///
/// Per q-chart: samples of the u-block (B^-1 v(B), upper triangular) and the
/// v-block (v(A_qj)) on a circle |x - u_j| = radius, h << radius << nearest
/// singularity, plus the U0 trace variation and the q-chart trace variation
/// used by the det-cocycle bookkeeping.  u-block entries are also exposed as
/// annulus Laurent series extracted from the samples.
struct CocycleData {
    struct Block {
        Cx center;            // u_j of the base configuration
        double radius = 0.0;
        int samples = 0;
        std::vector<Cx> z;    // sample points of the local parameter
        std::vector<Cx> u12, u22;                 // u-block
        std::vector<Cx> a11, a12, a21, a22;       // v-block = v(A_qj)
        std::vector<Cx> v0_22;                    // v(omega22) on U0
        std::vector<Cx> trq;                      // v(tr A_qj)
        LaurentSeries u12_series, u22_series;     // annulus expansions
    };
    std::array<Block, 3> blocks;
    TangentVector direction;
    double step = 0.0;
    std::uint64_t base_id = 0; // hash of the base configuration
};

/// Displace a configuration along v by eps: u_j += eps du_j, v_j continued
/// along the branch, zeta_j += eps dzeta_j.
ApparentConfig displace_config(const LegendreCurve& curve, const ApparentConfig& config,
                               const TangentVector& v, double eps);

/// Central finite differences of the transition and connection matrices of
/// the re-solved family.
CocycleData tangent_cocycles(const LegendreCurve& curve, const SpectralData& spectral,
                             const ApparentConfig& config, const TangentVector& v, double h);

/// -sum_j res_{q_j} of the extended trace pairing of the two cocycles,
/// antisymmetrized in (v, v').  include_trace_terms=false drops the
/// determinant-line (trace variation) contribution; that reproduces the
/// naive pairing of the untwisted coordinates and is wrong by the det
/// cocycle class (regression material, not a user switch).
Cx cech_pairing(const CocycleData& data_v, const CocycleData& data_v2,
                bool include_trace_terms = true);

/// 3x6 Jacobian dp_j / d(u_1..3, zeta_1..3) by central differences.
struct CoordsJacobian {
    std::array<std::array<Cx, 6>, 3> dp{};
    double step = 0.0;
};

CoordsJacobian coords_jacobian(const LegendreCurve& curve, const SpectralData& spectral,
                               const ApparentConfig& config, double h);

std::array<Cx, 3> apply_jacobian(const CoordsJacobian& J, const TangentVector& v);

/// sum_j ( v(p_j) v'(q_j) - v(q_j) v'(p_j) )
Cx darboux_form(const CoordsJacobian& J, const TangentVector& v, const TangentVector& v2);

struct PairingResult {
    int pair_index = 0;
    Cx cech_value{};
    Cx darboux_value{};
    double fd_step = 0.0;   // 0 marks the Richardson-extrapolated row
    double residual = 0.0;  // |cech - darboux|
    double order = 0.0;     // measured convergence order (extrapolated row)
    bool extrapolated = false;
    bool degenerate = false;
};

/// For each fixed-seed direction pair and each step h: pairing residuals;
/// then the Richardson row across the last two steps with the measured
/// order.  Degenerate base configs (|stability det| < 1e-6) are flagged.
std::vector<PairingResult> verify_symplectomorphism(const LegendreCurve& curve,
                                                    const SpectralData& spectral,
                                                    const ApparentConfig& config,
                                                    int n_direction_pairs,
                                                    const std::vector<double>& steps,
                                                    std::uint64_t seed);

} // namespace dconn
