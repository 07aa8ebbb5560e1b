#include "dconn/companion.hpp"

#include <cmath>

namespace dconn {

void validate_config(const LegendreCurve& curve, const SpectralData& spectral,
                     const ApparentConfig& config) {
    const Cx t = pole_x(curve, spectral);
    for (int j = 0; j < 3; ++j) {
        const ApparentPoint& p = config.pts[static_cast<std::size_t>(j)];
        if (!is_finite(p.u) || !is_finite(p.v) || !is_finite(p.zeta))
            throw InvalidData("apparent point with non-finite data");
        for (Cx b : curve.branch_x())
            if (std::abs(p.u - b) <= ApparentConfig::kMinSeparation)
                throw InvalidData("apparent point too close to a branch point");
        if (std::abs(p.u - t) <= ApparentConfig::kMinSeparation)
            throw InvalidData("apparent point too close to the pole divisor");
        const Cx Ku = curve.K_at(p.u);
        const double scale = std::max({1.0, std::abs(Ku), std::abs(p.v) * std::abs(p.v)});
        if (std::abs(p.v * p.v - Ku) > 1e-8 * scale)
            throw OffCurve("apparent point not on the curve");
        for (int k = 0; k < j; ++k)
            if (std::abs(p.u - config.pts[static_cast<std::size_t>(k)].u) <= ApparentConfig::kMinSeparation)
                throw InvalidData("apparent points must have distinct x-coordinates");
    }
}

std::array<Cx, 3> compute_Cj(const ApparentConfig& config, const ResidueParams& params, Cx t) {
    std::array<Cx, 3> C{};
    for (int j = 0; j < 3; ++j) {
        const auto& pj = config.pts[static_cast<std::size_t>(j)];
        Cx s(0.0);
        for (int k = 0; k < 3; ++k) {
            if (k == j) continue;
            const auto& pk = config.pts[static_cast<std::size_t>(k)];
            s += Cx(0.5) * (pk.zeta - pj.zeta) * (pj.v + pk.v) / (pj.u - pk.u);
        }
        s += (params.A1 + params.A2 * pj.v - pj.zeta * (params.B1 + params.B2 * pj.v) - pj.zeta * pj.zeta)
             / (pj.u - t);
        C[static_cast<std::size_t>(j)] = s;
    }
    return C;
}

Cx stability_det(const ApparentConfig& config) {
    std::array<Cx, 9> m{};
    for (int j = 0; j < 3; ++j) {
        m[static_cast<std::size_t>(3 * j + 0)] = Cx(1.0);
        m[static_cast<std::size_t>(3 * j + 1)] = config.pts[static_cast<std::size_t>(j)].u;
        m[static_cast<std::size_t>(3 * j + 2)] = config.pts[static_cast<std::size_t>(j)].zeta;
    }
    return det3(m);
}

Accessory solve_accessory(const LegendreCurve& curve, const SpectralData& spectral,
                          const ApparentConfig& config) {
    validate_config(curve, spectral, config);
    const ResidueParams params = solve_residue_params(curve, spectral);
    const Cx t = pole_x(curve, spectral);
    const std::array<Cx, 3> C = compute_Cj(config, params, t);
    LinearSystem sys;
    sys.n = 3;
    for (int j = 0; j < 3; ++j) {
        sys.a[static_cast<std::size_t>(3 * j + 0)] = Cx(1.0);
        sys.a[static_cast<std::size_t>(3 * j + 1)] = config.pts[static_cast<std::size_t>(j)].u;
        sys.a[static_cast<std::size_t>(3 * j + 2)] = -config.pts[static_cast<std::size_t>(j)].zeta;
        sys.rhs[static_cast<std::size_t>(j)] = -C[static_cast<std::size_t>(j)];
    }
    const auto x = solve_linear(sys);
    return Accessory{x[0], x[1], x[2]};
}

namespace {

CurveForm assemble_omega21(Cx t) {
    return CurveForm(RatX::simple_pole(Cx(1.0), t), RatX());
}

CurveForm assemble_omega22(const ApparentConfig& cfg, const ResidueParams& p, Cx t, Cx B3) {
    RatX r1, r2;
    for (const auto& pt : cfg.pts) {
        r1 = r1 + RatX::simple_pole(Cx(0.5) * pt.v, pt.u);
        r2 = r2 + RatX::simple_pole(Cx(0.5), pt.u);
    }
    r1 = r1 + RatX::simple_pole(p.B1, t) + RatX::constant(B3);
    r2 = r2 + RatX::simple_pole(p.B2, t);
    return CurveForm(std::move(r1), std::move(r2));
}

CurveForm assemble_omega12(const ApparentConfig& cfg, const ResidueParams& p, Cx t,
                           Cx A3, Cx A4) {
    RatX r1, r2;
    for (const auto& pt : cfg.pts) {
        r1 = r1 + RatX::simple_pole(Cx(0.5) * pt.zeta * pt.v, pt.u);
        r2 = r2 + RatX::simple_pole(Cx(0.5) * pt.zeta, pt.u);
    }
    r1 = r1 + RatX::simple_pole(p.A1, t) + RatX::of_poly(Poly({A3, A4}));
    r2 = r2 + RatX::simple_pole(p.A2, t);
    return CurveForm(std::move(r1), std::move(r2));
}

} // namespace

CompanionForm assemble_companion(const LegendreCurve& curve, const SpectralData& spectral,
                                 const ApparentConfig& config, const ResidueParams& params,
                                 const Accessory& acc) {
    const Cx t = pole_x(curve, spectral);
    CompanionForm f{curve, spectral, config, params, acc,
                    assemble_omega12(config, params, t, acc.A3, acc.A4),
                    assemble_omega21(t),
                    assemble_omega22(config, params, t, acc.B3)};
    return f;
}

CurvePoint q_point(const CompanionForm& form, int j) {
    const auto& p = form.config.pts[static_cast<std::size_t>(j)];
    return CurvePoint{Chart::U0, p.u, p.v};
}

double companion_scale(const CompanionForm& form) {
    const auto C = compute_Cj(form.config, form.params, form.t());
    double s = std::max({1.0, std::abs(form.acc.A3), std::abs(form.acc.A4), std::abs(form.acc.B3)});
    for (Cx c : C) s = std::max(s, std::abs(c));
    return s;
}

CompanionForm build_companion(const LegendreCurve& curve, const SpectralData& spectral,
                              const ApparentConfig& config) {
    const Accessory acc = solve_accessory(curve, spectral, config);
    const ResidueParams params = solve_residue_params(curve, spectral);
    CompanionForm form = assemble_companion(curve, spectral, config, params, acc);

    // residue matrix at each q_j must be [[0, zeta_j],[0, 1]]
    for (int j = 0; j < 3; ++j) {
        const CurvePoint q = q_point(form, j);
        const Cx r12 = form_residue(curve, form.omega12, q);
        const Cx r21 = form_residue(curve, form.omega21, q);
        const Cx r22 = form_residue(curve, form.omega22, q);
        const auto& pt = config.pts[static_cast<std::size_t>(j)];
        const double tol = 1e-10 * std::max(1.0, std::abs(pt.zeta));
        if (std::abs(r12 - pt.zeta) > tol || std::abs(r21) > 1e-10 || std::abs(r22 - Cx(1.0)) > 1e-10)
            throw InvalidData("companion residue matrix at q_j is off");
    }
    const Cx rinf = form_residue(curve, form.omega22, CurvePoint::infinity());
    if (std::abs(rinf + Cx(2.0)) > 1e-10)
        throw InvalidData("res_infinity omega22 != -2");

    const ApparencyReport rep = verify_apparency(form);
    if (!rep.pass()) throw InvalidData("apparency residual above tolerance");
    return form;
}

CurveForm omega11_j(const CompanionForm& form, int j) {
    const Cx zj = form.config.pts[static_cast<std::size_t>(j)].zeta;
    return CurveForm(RatX::simple_pole(-zj, form.t()), RatX());
}

CurveForm omega12_j(const CompanionForm& form, int j) {
    const Cx t = form.t();
    const auto& p = form.params;
    const auto& pj = form.config.pts[static_cast<std::size_t>(j)];
    RatX r1, r2;
    for (int k = 0; k < 3; ++k) {
        if (k == j) continue;
        const auto& pk = form.config.pts[static_cast<std::size_t>(k)];
        const Cx c = Cx(0.5) * (pk.zeta - pj.zeta);
        r1 = r1 + RatX::simple_pole(c * pk.v, pk.u);
        r2 = r2 + RatX::simple_pole(c, pk.u);
    }
    const Cx zj = pj.zeta;
    r1 = r1 + RatX::simple_pole(p.A1 - zj * p.B1 - zj * zj, t)
            + RatX::of_poly(Poly({form.acc.A3 - zj * form.acc.B3, form.acc.A4}));
    r2 = r2 + RatX::simple_pole(p.A2 - zj * p.B2, t);
    return CurveForm(std::move(r1), std::move(r2));
}

CurveForm omega22_j(const CompanionForm& form, int j) {
    const Cx t = form.t();
    const auto& p = form.params;
    const auto& pj = form.config.pts[static_cast<std::size_t>(j)];
    RatX r1, r2;
    // the j-th term carries -y + v_j instead of y + v_j
    r1 = r1 + RatX::simple_pole(Cx(0.5) * pj.v, pj.u);
    r2 = r2 + RatX::simple_pole(Cx(-0.5), pj.u);
    for (int k = 0; k < 3; ++k) {
        if (k == j) continue;
        const auto& pk = form.config.pts[static_cast<std::size_t>(k)];
        r1 = r1 + RatX::simple_pole(Cx(0.5) * pk.v, pk.u);
        r2 = r2 + RatX::simple_pole(Cx(0.5), pk.u);
    }
    r1 = r1 + RatX::simple_pole(p.B1 + pj.zeta, t) + RatX::constant(form.acc.B3);
    r2 = r2 + RatX::simple_pole(p.B2, t);
    return CurveForm(std::move(r1), std::move(r2));
}

ApparencyReport verify_apparency(const CompanionForm& form) {
    ApparencyReport rep;
    rep.scale = companion_scale(form);
    for (int j = 0; j < 3; ++j) {
        const auto& pj = form.config.pts[static_cast<std::size_t>(j)];
        // omega12 - zeta_j omega22 - zeta_j^2 omega21, expanded at q_j: must
        // be holomorphic (no -1 term) and vanishing (no 0 term).
        const CurveForm combo = cf_sub(cf_sub(form.omega12, cf_scale(pj.zeta, form.omega22)),
                                       cf_scale(pj.zeta * pj.zeta, form.omega21));
        const LaurentSeries s = expand_form(form.curve, combo, q_point(form, j), 8);
        // report in the same scale as the algebraic condition: the value of
        // the dx/y-coefficient at q_j is (C_j + A3 + A4 u_j - zeta_j B3)/v_j
        const double vj = std::abs(pj.v);
        rep.pole_residual[static_cast<std::size_t>(j)] = std::abs(s.coeff_or_zero(-1)) * vj;
        rep.residual[static_cast<std::size_t>(j)] = std::abs(s.coeff_or_zero(0)) * vj;
    }
    return rep;
}

} // namespace dconn
