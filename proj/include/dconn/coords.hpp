#pragma once

#include "dconn/atlas.hpp"

namespace dconn {

/// Canonical coordinate pairs (u_j, p_j); the local coordinate at q_j is
/// always z_j = x1 - u_j.
struct CanonicalCoords {
    std::array<Cx, 3> u{};
    std::array<Cx, 3> p{};
};

/// Closed-form p_j from the parameters (the returned value) cross-checked
/// against the residue of (trace section + zeta_j omega21)/(x1 - u_j).
/// Throws DisagreementError when the two paths differ beyond 1e-10.
CanonicalCoords canonical_coordinates(const ConnectionAtlas& atlas);

/// p_j by the closed formula only (no atlas, no series); used by the
/// finite-difference Jacobian.
std::array<Cx, 3> p_values_closed(const LegendreCurve& curve, const SpectralData& spectral,
                                  const ApparentConfig& config);

CanonicalCoords forward_map(const LegendreCurve& curve, const SpectralData& spectral,
                            const ApparentConfig& config);

/// Reconstruct (zeta_j, A3, A4, B3) from coordinates.  branch_hints pick
/// v_j = +-sqrt(K(u_j)).  Eliminating zeta_j = rho_j - (u_j - t) B3 from the
/// apparency equations leaves a 3x3 linear system in (A3, A4, B3); its
/// determinant coincides with the forward stability determinant.
ApparentConfig inverse_map(const LegendreCurve& curve, const SpectralData& spectral,
                           const CanonicalCoords& coords, const std::array<Cx, 3>& branch_hints);

} // namespace dconn
