#include "dconn/coords.hpp"

#include <cmath>

namespace dconn {

namespace {

// non-zeta, non-B3 part of the p_j formula
Cx G_term(const LegendreCurve& curve, const ApparentConfig& cfg, const ResidueParams& params,
          Cx t, int j) {
    const auto& pj = cfg.pts[static_cast<std::size_t>(j)];
    Cx g = -curve.Kprime_at(pj.u) / (Cx(4.0) * pj.v * pj.v);
    for (int k = 0; k < 3; ++k) {
        if (k == j) continue;
        const auto& pk = cfg.pts[static_cast<std::size_t>(k)];
        g += Cx(0.5) * (pj.v + pk.v) / ((pj.u - pk.u) * pj.v);
    }
    g += (params.B1 + params.B2 * pj.v) / ((pj.u - t) * pj.v);
    return g;
}

} // namespace

std::array<Cx, 3> p_values_closed(const LegendreCurve& curve, const SpectralData& spectral,
                                  const ApparentConfig& config) {
    const ResidueParams params = solve_residue_params(curve, spectral);
    const Accessory acc = solve_accessory(curve, spectral, config);
    const Cx t = pole_x(curve, spectral);
    std::array<Cx, 3> p{};
    for (int j = 0; j < 3; ++j) {
        const auto& pj = config.pts[static_cast<std::size_t>(j)];
        p[static_cast<std::size_t>(j)] = pj.zeta / ((pj.u - t) * pj.v)
                                       + G_term(curve, config, params, t, j)
                                       + acc.B3 / pj.v;
    }
    return p;
}

CanonicalCoords canonical_coordinates(const ConnectionAtlas& atlas) {
    const CompanionForm& form = atlas.companion;
    const LegendreCurve& curve = form.curve;
    const std::array<Cx, 3> closed = p_values_closed(curve, form.spectral, form.config);

    const ResidueParams params = solve_residue_params(curve, form.spectral);
    const Cx t = pole_x(curve, form.spectral);
    CanonicalCoords out;
    for (int j = 0; j < 3; ++j) {
        const auto& pj = form.config.pts[static_cast<std::size_t>(j)];
        out.u[static_cast<std::size_t>(j)] = pj.u;
        // residue route: res_{q_j} (zeta_j omega21 + tr A_qj)/(x1 - u_j)
        const CurveForm trace_qj = cf_add(omega11_j(form, j), omega22_j(form, j));
        const CurveForm numer = cf_add(cf_scale(pj.zeta, form.omega21), trace_qj);
        const RatX xu = RatX::of_poly(Poly::linear(-pj.u, Cx(1.0)));
        const Cx via_residue = form_residue(curve, cf_div_x(numer, xu), q_point(form, j));
        const Cx via_formula = closed[static_cast<std::size_t>(j)];
        // agreement measured against the magnitudes of the contributing terms
        const double scale = std::max({1.0,
                                       std::abs(pj.zeta / ((pj.u - t) * pj.v)),
                                       std::abs(G_term(curve, form.config, params, t, j)),
                                       std::abs(form.acc.B3 / pj.v)});
        if (std::abs(via_residue - via_formula) > 1e-10 * scale)
            throw DisagreementError("canonical coordinate paths disagree at q" + std::to_string(j + 1));
        out.p[static_cast<std::size_t>(j)] = via_formula;
    }
    return out;
}

CanonicalCoords forward_map(const LegendreCurve& curve, const SpectralData& spectral,
                            const ApparentConfig& config) {
    const CompanionForm form = build_companion(curve, spectral, config);
    const ConnectionAtlas atlas = build_atlas(form);
    return canonical_coordinates(atlas);
}

ApparentConfig inverse_map(const LegendreCurve& curve, const SpectralData& spectral,
                           const CanonicalCoords& coords, const std::array<Cx, 3>& branch_hints) {
    const ResidueParams params = solve_residue_params(curve, spectral);
    const Cx t = pole_x(curve, spectral);

    ApparentConfig cfg; // v resolved from hints; zeta filled below
    for (int j = 0; j < 3; ++j) {
        const CurvePoint q = lift_point(curve, coords.u[static_cast<std::size_t>(j)],
                                        branch_hints[static_cast<std::size_t>(j)]);
        if (std::abs(q.y) <= 1e-10)
            throw OffCurve("coordinate point at a branch point of the curve");
        cfg.pts[static_cast<std::size_t>(j)] = {q.x, q.y, Cx(0.0)};
    }

    std::array<Cx, 3> rho{}, m{}, D{};
    Cx V(0.0);
    for (const auto& pt : cfg.pts) V += pt.v;
    for (int j = 0; j < 3; ++j) {
        const auto& pj = cfg.pts[static_cast<std::size_t>(j)];
        const Cx G = G_term(curve, cfg, params, t, j);
        rho[static_cast<std::size_t>(j)] =
            (pj.u - t) * pj.v * (coords.p[static_cast<std::size_t>(j)] - G);
    }
    for (int j = 0; j < 3; ++j) {
        const auto& pj = cfg.pts[static_cast<std::size_t>(j)];
        m[static_cast<std::size_t>(j)] = rho[static_cast<std::size_t>(j)]
                                       + params.B1 + params.B2 * pj.v + Cx(0.5) * (pj.v + V);
        Cx d(0.0);
        for (int k = 0; k < 3; ++k) {
            if (k == j) continue;
            const auto& pk = cfg.pts[static_cast<std::size_t>(k)];
            d += Cx(0.5) * (rho[static_cast<std::size_t>(k)] - rho[static_cast<std::size_t>(j)])
               * (pj.v + pk.v) / (pj.u - pk.u);
        }
        const Cx rj = rho[static_cast<std::size_t>(j)];
        d += (params.A1 + params.A2 * pj.v - rj * (params.B1 + params.B2 * pj.v) - rj * rj)
           / (pj.u - t);
        D[static_cast<std::size_t>(j)] = d;
    }

    LinearSystem sys;
    sys.n = 3;
    for (int j = 0; j < 3; ++j) {
        sys.a[static_cast<std::size_t>(3 * j + 0)] = Cx(1.0);
        sys.a[static_cast<std::size_t>(3 * j + 1)] = cfg.pts[static_cast<std::size_t>(j)].u;
        sys.a[static_cast<std::size_t>(3 * j + 2)] = m[static_cast<std::size_t>(j)];
        sys.rhs[static_cast<std::size_t>(j)] = -D[static_cast<std::size_t>(j)];
    }
    const auto sol = solve_linear(sys);
    const Cx B3 = sol[2];
    for (int j = 0; j < 3; ++j) {
        auto& pj = cfg.pts[static_cast<std::size_t>(j)];
        pj.zeta = rho[static_cast<std::size_t>(j)] - (pj.u - t) * B3;
    }
    validate_config(curve, spectral, cfg);

    // Gauss-Newton polish of zeta against the closed p formula: the linear
    // reconstruction loses digits when |(u-t) v p| dwarfs |zeta|.
    for (int iter = 0; iter < 2; ++iter) {
        std::array<Cx, 3> resid{};
        double worst = 0.0, pscale = 1.0;
        const auto p_now = p_values_closed(curve, spectral, cfg);
        for (int j = 0; j < 3; ++j) {
            resid[static_cast<std::size_t>(j)] =
                coords.p[static_cast<std::size_t>(j)] - p_now[static_cast<std::size_t>(j)];
            worst = std::max(worst, std::abs(resid[static_cast<std::size_t>(j)]));
            pscale = std::max(pscale, std::abs(coords.p[static_cast<std::size_t>(j)]));
        }
        if (worst <= 1e-13 * pscale) break;
        const double h = 1e-6;
        LinearSystem newton;
        newton.n = 3;
        try {
            for (int k = 0; k < 3; ++k) {
                ApparentConfig up = cfg, dn = cfg;
                up.pts[static_cast<std::size_t>(k)].zeta += Cx(h);
                dn.pts[static_cast<std::size_t>(k)].zeta -= Cx(h);
                const auto pu = p_values_closed(curve, spectral, up);
                const auto pd = p_values_closed(curve, spectral, dn);
                for (int j = 0; j < 3; ++j)
                    newton.a[static_cast<std::size_t>(3 * j + k)] =
                        (pu[static_cast<std::size_t>(j)] - pd[static_cast<std::size_t>(j)]) / (2.0 * h);
            }
            newton.rhs = resid;
            const auto dz = solve_linear(newton);
            for (int j = 0; j < 3; ++j)
                cfg.pts[static_cast<std::size_t>(j)].zeta += dz[static_cast<std::size_t>(j)];
        } catch (const NearSingular&) {
            break; // keep the best-effort linear recovery
        }
    }
    return cfg;
}

} // namespace dconn
