#include "dconn/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>

namespace dconn {

double TangentVector::norm() const {
    double s = 0.0;
    for (int j = 0; j < 3; ++j)
        s += std::norm(du[static_cast<std::size_t>(j)]) + std::norm(dzeta[static_cast<std::size_t>(j)]);
    return std::sqrt(s);
}

ApparentConfig displace_config(const LegendreCurve& curve, const ApparentConfig& config,
                               const TangentVector& v, double eps) {
    ApparentConfig out = config;
    for (int j = 0; j < 3; ++j) {
        auto& pt = out.pts[static_cast<std::size_t>(j)];
        const Cx du = v.du[static_cast<std::size_t>(j)];
        const Cx u_new = pt.u + eps * du;
        // continue the branch: first-order prediction, then snap to a square root
        const Cx pred = pt.v + (curve.Kprime_at(pt.u) / (Cx(2.0) * pt.v)) * (eps * du);
        const Cx r = std::sqrt(curve.K_at(u_new));
        pt.v = (std::abs(r - pred) <= std::abs(-r - pred)) ? r : -r;
        pt.u = u_new;
        pt.zeta += eps * v.dzeta[static_cast<std::size_t>(j)];
    }
    return out;
}

namespace {

std::uint64_t config_id(const ApparentConfig& cfg) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](double d) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(d));
        std::memcpy(&bits, &d, sizeof(bits));
        h ^= bits;
        h *= 1099511628211ULL;
    };
    for (const auto& pt : cfg.pts) {
        mix(pt.u.real());
        mix(pt.u.imag());
        mix(pt.zeta.real());
        mix(pt.zeta.imag());
    }
    return h;
}

double min_singular_distance(const LegendreCurve& curve, Cx t, const ApparentConfig& cfg, int j) {
    const Cx uj = cfg.pts[static_cast<std::size_t>(j)].u;
    double d = std::abs(uj - t);
    for (Cx b : curve.branch_x()) d = std::min(d, std::abs(uj - b));
    for (int k = 0; k < 3; ++k)
        if (k != j) d = std::min(d, std::abs(uj - cfg.pts[static_cast<std::size_t>(k)].u));
    return d;
}

// walk the circle keeping the y-branch continuous, starting near v_j
std::vector<Cx> branch_walk(const LegendreCurve& curve, Cx center, Cx v_at_center,
                            const std::vector<Cx>& xs) {
    std::vector<Cx> ys(xs.size());
    Cx prev = v_at_center + (curve.Kprime_at(center) / (Cx(2.0) * v_at_center)) * (xs[0] - center);
    for (std::size_t m = 0; m < xs.size(); ++m) {
        const Cx r = std::sqrt(curve.K_at(xs[m]));
        const Cx y = (std::abs(r - prev) <= std::abs(-r - prev)) ? r : -r;
        ys[m] = y;
        prev = y;
    }
    return ys;
}

LaurentSeries annulus_series(const std::vector<Cx>& z, const std::vector<Cx>& f,
                             int low, int high) {
    const int M = static_cast<int>(z.size());
    std::vector<Cx> coef(static_cast<std::size_t>(high - low + 1), Cx(0.0));
    for (int k = low; k <= high; ++k) {
        Cx s(0.0);
        for (int m = 0; m < M; ++m)
            s += f[static_cast<std::size_t>(m)] * std::pow(z[static_cast<std::size_t>(m)], -k);
        coef[static_cast<std::size_t>(k - low)] = s / Cx(static_cast<double>(M));
    }
    return LaurentSeries::from_coeffs(low, std::move(coef), high);
}

Cx contour_residue(const std::vector<Cx>& z, const std::vector<Cx>& f) {
    Cx s(0.0);
    for (std::size_t m = 0; m < z.size(); ++m) s += f[m] * z[m];
    return s / Cx(static_cast<double>(z.size()));
}

struct FamilyMember {
    ApparentConfig cfg;
    CompanionForm form;
};

FamilyMember member_at(const LegendreCurve& curve, const SpectralData& spectral,
                       const ApparentConfig& base, const TangentVector& v, double eps) {
    FamilyMember fm{displace_config(curve, base, v, eps), CompanionForm{curve, spectral, {}, {}, {}, {}, {}, {}}};
    const Accessory acc = solve_accessory(curve, spectral, fm.cfg);
    const ResidueParams params = solve_residue_params(curve, spectral);
    fm.form = assemble_companion(curve, spectral, fm.cfg, params, acc);
    return fm;
}

} // namespace

CocycleData tangent_cocycles(const LegendreCurve& curve, const SpectralData& spectral,
                             const ApparentConfig& config, const TangentVector& v, double h) {
    if (h <= 0.0) throw NumericError("tangent_cocycles: step must be positive");
    const Cx t = pole_x(curve, spectral);

    const FamilyMember plus = member_at(curve, spectral, config, v, h);
    const FamilyMember minus = member_at(curve, spectral, config, v, -h);
    const double inv2h = 1.0 / (2.0 * h);

    CocycleData data;
    data.direction = v;
    data.step = h;
    data.base_id = config_id(config);

    constexpr int M = 192;
    for (int j = 0; j < 3; ++j) {
        const auto& pj = config.pts[static_cast<std::size_t>(j)];
        auto& blk = data.blocks[static_cast<std::size_t>(j)];
        blk.center = pj.u;
        const double dmin = min_singular_distance(curve, t, config, j);
        blk.radius = 0.3 * dmin;
        const double cluster = h * (std::abs(v.du[static_cast<std::size_t>(j)]) + 1e-30);
        if (blk.radius < 10.0 * cluster)
            throw NumericError("tangent_cocycles: step too large for the contour radius");
        blk.samples = M;

        std::vector<Cx> xs(M);
        blk.z.resize(M);
        for (int m = 0; m < M; ++m) {
            const double phi = 2.0 * M_PI * m / M;
            blk.z[static_cast<std::size_t>(m)] = Cx(blk.radius * std::cos(phi), blk.radius * std::sin(phi));
            xs[static_cast<std::size_t>(m)] = pj.u + blk.z[static_cast<std::size_t>(m)];
        }
        const std::vector<Cx> ys = branch_walk(curve, pj.u, pj.v, xs);

        blk.u12.resize(M);
        blk.u22.resize(M);
        blk.a11.resize(M);
        blk.a12.resize(M);
        blk.a21.resize(M);
        blk.a22.resize(M);
        blk.v0_22.resize(M);
        blk.trq.resize(M);

        const auto& pp = plus.cfg.pts[static_cast<std::size_t>(j)];
        const auto& pm = minus.cfg.pts[static_cast<std::size_t>(j)];

        const CurveForm w11p = omega11_j(plus.form, j), w11m = omega11_j(minus.form, j);
        const CurveForm w12p = omega12_j(plus.form, j), w12m = omega12_j(minus.form, j);
        const CurveForm w22p = omega22_j(plus.form, j), w22m = omega22_j(minus.form, j);

        for (int m = 0; m < M; ++m) {
            const Cx x = xs[static_cast<std::size_t>(m)];
            const Cx y = ys[static_cast<std::size_t>(m)];
            // u-block: B0^-1 (B(+h) - B(-h)) / (2h) with B upper triangular
            const Cx b12p = pp.zeta / (x - pp.u), b12m = pm.zeta / (x - pm.u);
            const Cx b22p = Cx(1.0) / (x - pp.u), b22m = Cx(1.0) / (x - pm.u);
            const Cx d12 = (b12p - b12m) * inv2h;
            const Cx d22 = (b22p - b22m) * inv2h;
            blk.u12[static_cast<std::size_t>(m)] = d12 - pj.zeta * d22;
            blk.u22[static_cast<std::size_t>(m)] = (x - pj.u) * d22;

            // v-block: entrywise FD of A_qj
            const Cx a11p = w11p.eval_dx_coeff(x, y), a11m = w11m.eval_dx_coeff(x, y);
            const Cx a12p = w12p.eval_dx_coeff(x, y) / (x - pp.u);
            const Cx a12m = w12m.eval_dx_coeff(x, y) / (x - pm.u);
            const Cx w21 = plus.form.omega21.eval_dx_coeff(x, y); // zeta-independent
            const Cx a21p = (x - pp.u) * w21, a21m = (x - pm.u) * w21;
            const Cx a22p = w22p.eval_dx_coeff(x, y), a22m = w22m.eval_dx_coeff(x, y);
            blk.a11[static_cast<std::size_t>(m)] = (a11p - a11m) * inv2h;
            blk.a12[static_cast<std::size_t>(m)] = (a12p - a12m) * inv2h;
            blk.a21[static_cast<std::size_t>(m)] = (a21p - a21m) * inv2h;
            blk.a22[static_cast<std::size_t>(m)] = (a22p - a22m) * inv2h;

            blk.v0_22[static_cast<std::size_t>(m)] =
                (plus.form.omega22.eval_dx_coeff(x, y) - minus.form.omega22.eval_dx_coeff(x, y)) * inv2h;
            blk.trq[static_cast<std::size_t>(m)] =
                ((a11p + a22p) - (a11m + a22m)) * inv2h;
        }
        blk.u12_series = annulus_series(blk.z, blk.u12, -3, 6);
        blk.u22_series = annulus_series(blk.z, blk.u22, -3, 6);
    }
    return data;
}

namespace {

Cx cech_raw(const CocycleData& a, const CocycleData& b, bool include_trace_terms) {
    Cx total(0.0);
    for (int j = 0; j < 3; ++j) {
        const auto& A = a.blocks[static_cast<std::size_t>(j)];
        const auto& B = b.blocks[static_cast<std::size_t>(j)];
        const std::size_t M = A.z.size();
        std::vector<Cx> integrand(M);
        for (std::size_t m = 0; m < M; ++m) {
            // tr(u(v) v(v')) = u12 * a21' + u22 * a22'
            // tr(v0(v) u(v')) = v0_22 * u22'
            Cx t1 = A.u12[m] * B.a21[m] + A.u22[m] * B.a22[m];
            Cx t2 = A.v0_22[m] * B.u22[m];
            if (!include_trace_terms) {
                t1 = A.u12[m] * B.a21[m] + A.u22[m] * (B.a22[m] - B.trq[m]);
                t2 = Cx(0.0);
            }
            integrand[m] = t1 - t2;
        }
        total += contour_residue(A.z, integrand);
    }
    return -total;
}

} // namespace

Cx cech_pairing(const CocycleData& data_v, const CocycleData& data_v2, bool include_trace_terms) {
    if (data_v.base_id != data_v2.base_id)
        throw NumericError("cech_pairing: cocycles from different base points");
    return Cx(0.5) * (cech_raw(data_v, data_v2, include_trace_terms)
                      - cech_raw(data_v2, data_v, include_trace_terms));
}

CoordsJacobian coords_jacobian(const LegendreCurve& curve, const SpectralData& spectral,
                               const ApparentConfig& config, double h) {
    CoordsJacobian J;
    J.step = h;
    for (int k = 0; k < 6; ++k) {
        TangentVector e;
        if (k < 3) e.du[static_cast<std::size_t>(k)] = Cx(1.0);
        else e.dzeta[static_cast<std::size_t>(k - 3)] = Cx(1.0);
        const auto pp = p_values_closed(curve, spectral, displace_config(curve, config, e, h));
        const auto pm = p_values_closed(curve, spectral, displace_config(curve, config, e, -h));
        for (int j = 0; j < 3; ++j)
            J.dp[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
                (pp[static_cast<std::size_t>(j)] - pm[static_cast<std::size_t>(j)]) / (2.0 * h);
    }
    return J;
}

std::array<Cx, 3> apply_jacobian(const CoordsJacobian& J, const TangentVector& v) {
    std::array<Cx, 3> vp{};
    for (int j = 0; j < 3; ++j) {
        Cx s(0.0);
        for (int k = 0; k < 3; ++k) {
            s += J.dp[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] * v.du[static_cast<std::size_t>(k)];
            s += J.dp[static_cast<std::size_t>(j)][static_cast<std::size_t>(k + 3)] * v.dzeta[static_cast<std::size_t>(k)];
        }
        vp[static_cast<std::size_t>(j)] = s;
    }
    return vp;
}

Cx darboux_form(const CoordsJacobian& J, const TangentVector& v, const TangentVector& v2) {
    const auto vp = apply_jacobian(J, v);
    const auto v2p = apply_jacobian(J, v2);
    Cx s(0.0);
    for (int j = 0; j < 3; ++j)
        s += vp[static_cast<std::size_t>(j)] * v2.du[static_cast<std::size_t>(j)]
           - v.du[static_cast<std::size_t>(j)] * v2p[static_cast<std::size_t>(j)];
    return s;
}

std::vector<PairingResult> verify_symplectomorphism(const LegendreCurve& curve,
                                                    const SpectralData& spectral,
                                                    const ApparentConfig& config,
                                                    int n_direction_pairs,
                                                    const std::vector<double>& steps,
                                                    std::uint64_t seed) {
    if (n_direction_pairs <= 0) throw InvalidData("verify_symplectomorphism: need at least one direction pair");
    if (steps.size() < 2) throw InvalidData("verify_symplectomorphism: need at least two steps for Richardson");
    std::vector<double> hs = steps;
    std::sort(hs.begin(), hs.end(), std::greater<double>());

    const bool degenerate = std::abs(stability_det(config)) < 1e-6;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    auto draw_dir = [&rng, &unit]() {
        TangentVector v;
        for (int j = 0; j < 3; ++j) {
            v.du[static_cast<std::size_t>(j)] = Cx(unit(rng), unit(rng)) * 0.70710678118654752;
            v.dzeta[static_cast<std::size_t>(j)] = Cx(unit(rng), unit(rng)) * 0.70710678118654752;
        }
        return v;
    };

    std::vector<CoordsJacobian> jac;
    jac.reserve(hs.size());
    for (double h : hs) jac.push_back(coords_jacobian(curve, spectral, config, h));

    std::vector<PairingResult> out;
    for (int pair = 0; pair < n_direction_pairs; ++pair) {
        const TangentVector v = draw_dir();
        const TangentVector w = draw_dir();
        std::vector<Cx> cech(hs.size()), darb(hs.size());
        for (std::size_t si = 0; si < hs.size(); ++si) {
            const CocycleData cv = tangent_cocycles(curve, spectral, config, v, hs[si]);
            const CocycleData cw = tangent_cocycles(curve, spectral, config, w, hs[si]);
            cech[si] = cech_pairing(cv, cw);
            darb[si] = darboux_form(jac[si], v, w);
            PairingResult row;
            row.pair_index = pair;
            row.cech_value = cech[si];
            row.darboux_value = darb[si];
            row.fd_step = hs[si];
            row.residual = std::abs(cech[si] - darb[si]);
            row.degenerate = degenerate;
            out.push_back(row);
        }
        // Richardson across the last two steps (second-order differencing)
        const std::size_t n = hs.size();
        const double h1 = hs[n - 2], h2 = hs[n - 1];
        const double w1 = h1 * h1, w2 = h2 * h2;
        const Cx cechR = (w1 * cech[n - 1] - w2 * cech[n - 2]) / (w1 - w2);
        const Cx darbR = (w1 * darb[n - 1] - w2 * darb[n - 2]) / (w1 - w2);
        PairingResult row;
        row.pair_index = pair;
        row.cech_value = cechR;
        row.darboux_value = darbR;
        row.fd_step = 0.0;
        row.residual = std::abs(cechR - darbR);
        const double r1 = std::abs(cech[n - 2] - darb[n - 2]);
        const double r2 = std::abs(cech[n - 1] - darb[n - 1]);
        // converged-to-noise pairs have no measurable order; report 2
        row.order = (r1 > 1e-9 && r2 > 1e-13) ? std::log(r1 / r2) / std::log(h1 / h2) : 2.0;
        row.extrapolated = true;
        row.degenerate = degenerate;
        out.push_back(row);
    }
    return out;
}

} // namespace dconn
