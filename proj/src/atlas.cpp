#include "dconn/atlas.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace dconn {

FMat2 FMat2::identity() {
    FMat2 m;
    m.e[0][0] = FieldElem::one();
    m.e[1][1] = FieldElem::one();
    return m;
}

FMat2 fm_add(const FMat2& p, const FMat2& q) {
    FMat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.e[i][j] = fe_add(p.e[i][j], q.e[i][j]);
    return r;
}

FMat2 fm_sub(const FMat2& p, const FMat2& q) {
    FMat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.e[i][j] = fe_sub(p.e[i][j], q.e[i][j]);
    return r;
}

FMat2 fm_mul(const LegendreCurve& c, const FMat2& p, const FMat2& q) {
    FMat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r.e[i][j] = fe_add(fe_mul(c, p.e[i][0], q.e[0][j]), fe_mul(c, p.e[i][1], q.e[1][j]));
    return r;
}

FieldElem fm_det(const LegendreCurve& c, const FMat2& p) {
    return fe_sub(fe_mul(c, p.e[0][0], p.e[1][1]), fe_mul(c, p.e[0][1], p.e[1][0]));
}

FMat2 fm_inverse(const LegendreCurve& c, const FMat2& p) {
    const FieldElem inv_det = fe_inverse(c, fm_det(c, p));
    FMat2 r;
    r.e[0][0] = fe_mul(c, p.e[1][1], inv_det);
    r.e[0][1] = fe_mul(c, fe_scale(Cx(-1.0), p.e[0][1]), inv_det);
    r.e[1][0] = fe_mul(c, fe_scale(Cx(-1.0), p.e[1][0]), inv_det);
    r.e[1][1] = fe_mul(c, p.e[0][0], inv_det);
    return r;
}

FMat2 fm_ddx(const LegendreCurve& c, const FMat2& p) {
    FMat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.e[i][j] = fe_ddx(c, p.e[i][j]);
    return r;
}

ConnectionAtlas assemble_atlas(const CompanionForm& form) {
    const LegendreCurve& c = form.curve;
    ConnectionAtlas atlas{form, {}, {}, {}, {}, {}};

    for (int j = 0; j < 3; ++j) {
        const auto& pt = form.config.pts[static_cast<std::size_t>(j)];
        FMat2& B = atlas.B0q[j];
        B.e[0][0] = FieldElem::one();
        B.e[0][1] = FieldElem::of_x(RatX::simple_pole(pt.zeta, pt.u));
        B.e[1][0] = FieldElem::zero();
        B.e[1][1] = FieldElem::of_x(RatX::simple_pole(Cx(1.0), pt.u));
    }
    atlas.B0inf.e[0][0] = FieldElem::one();
    atlas.B0inf.e[1][1] = FieldElem::of_x(RatX(Poly::constant(Cx(-1.0)), Poly::x()));

    atlas.A0.e[0][0] = FieldElem::zero();
    atlas.A0.e[0][1] = form.omega12.field(c);
    atlas.A0.e[1][0] = form.omega21.field(c);
    atlas.A0.e[1][1] = form.omega22.field(c);

    for (int j = 0; j < 3; ++j) {
        const auto& pt = form.config.pts[static_cast<std::size_t>(j)];
        const RatX xu = RatX::of_poly(Poly::linear(-pt.u, Cx(1.0)));
        FMat2& A = atlas.Aq[j];
        A.e[0][0] = omega11_j(form, j).field(c);
        A.e[0][1] = cf_div_x(omega12_j(form, j), xu).field(c);
        A.e[1][0] = cf_mul_fn(c, FieldElem::of_x(xu), form.omega21).field(c);
        A.e[1][1] = omega22_j(form, j).field(c);
    }

    const RatX x = RatX::of_poly(Poly::x());
    atlas.Ainf.e[0][0] = FieldElem::zero();
    atlas.Ainf.e[0][1] = cf_scale(Cx(-1.0), cf_div_x(form.omega12, x)).field(c);
    atlas.Ainf.e[1][0] = cf_scale(Cx(-1.0), cf_mul_fn(c, FieldElem::of_x(x), form.omega21)).field(c);
    atlas.Ainf.e[1][1] = cf_sub(form.omega22, CurveForm::from_dx_coeff(rat_inverse(x))).field(c);
    return atlas;
}

namespace {

std::vector<Cx> singular_x(const CompanionForm& form) {
    std::vector<Cx> s;
    for (Cx b : form.curve.branch_x()) s.push_back(b);
    s.push_back(form.t());
    for (const auto& pt : form.config.pts) s.push_back(pt.u);
    return s;
}

double dist_to_singular(Cx x, const std::vector<Cx>& sing) {
    double d = 1e300;
    for (Cx s : sing) d = std::min(d, std::abs(x - s));
    return d;
}

using CMat2 = std::array<std::array<Cx, 2>, 2>;

CMat2 eval_mat(const FMat2& m, Cx x, Cx y) {
    CMat2 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m.e[i][j].eval(x, y);
    return out;
}

CMat2 cmul(const CMat2& a, const CMat2& b) {
    CMat2 r{};
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return r;
}

// Evaluate the factors of B^-1 A0 B + B^-1 dB - A_target at the point and
// compose numerically; the pre-assembled field-element difference suffers
// catastrophic coefficient growth for far-out u_j.
double overlap_residual_at(const LegendreCurve& curve, const FMat2& B, const FMat2& Binv,
                           const FMat2& dB, const FMat2& A0, const FMat2& Atarget, Cx x) {
    const Cx y = std::sqrt(curve.K_at(x));
    const CMat2 Bx = eval_mat(B, x, y);
    const CMat2 Bix = eval_mat(Binv, x, y);
    const CMat2 dBx = eval_mat(dB, x, y);
    const CMat2 A0x = eval_mat(A0, x, y);
    const CMat2 Atx = eval_mat(Atarget, x, y);
    const CMat2 lhs1 = cmul(Bix, cmul(A0x, Bx));
    const CMat2 lhs2 = cmul(Bix, dBx);
    double worst = 0.0;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            worst = std::max(worst, std::abs(lhs1[i][j] + lhs2[i][j] - Atx[i][j]));
    return worst;
}

} // namespace

GluingReport check_gluing(const ConnectionAtlas& atlas, int n_samples, std::uint64_t seed) {
    const LegendreCurve& curve = atlas.companion.curve;
    GluingReport rep;
    rep.seed = seed;
    if (n_samples <= 0) {
        rep.vacuous = true;
        return rep;
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::vector<Cx> sing = singular_x(atlas.companion);

    auto run_overlap = [&](const std::string& name, const FMat2& B, const FMat2& Atarget,
                           Cx center, double rlo, double rhi) {
        const FMat2 Binv = fm_inverse(curve, B);
        const FMat2 dB = fm_ddx(curve, B);
        GluingReport::Overlap ov;
        ov.name = name;
        while (ov.samples < n_samples) {
            const double r = rlo + (rhi - rlo) * unit(rng);
            const double phi = 2.0 * M_PI * unit(rng);
            const Cx x = center + Cx(r * std::cos(phi), r * std::sin(phi));
            if (dist_to_singular(x, sing) <= 0.05) continue;
            ov.max_residual = std::max(ov.max_residual,
                                       overlap_residual_at(curve, B, Binv, dB, atlas.A0, Atarget, x));
            ++ov.samples;
        }
        rep.overlaps.push_back(std::move(ov));
    };

    for (int j = 0; j < 3; ++j) {
        const auto& pt = atlas.companion.config.pts[static_cast<std::size_t>(j)];
        double d = 1e300;
        for (Cx s : sing)
            if (std::abs(s - pt.u) > 1e-12) d = std::min(d, std::abs(s - pt.u));
        run_overlap("U0-Uq" + std::to_string(j + 1), atlas.B0q[j], atlas.Aq[j],
                    pt.u, std::max(0.06, 0.2 * d), std::max(0.12, 0.6 * d));
    }
    run_overlap("U0-Uinf", atlas.B0inf, atlas.Ainf, Cx(0.0), 1.5, 3.0);
    return rep;
}

double GluingReport::worst() const {
    double w = 0.0;
    for (const auto& ov : overlaps) w = std::max(w, ov.max_residual);
    return w;
}

std::array<double, 3> holomorphy_residuals(const ConnectionAtlas& atlas) {
    const CompanionForm& form = atlas.companion;
    std::array<double, 3> out{};
    for (int j = 0; j < 3; ++j) {
        const auto& pt = form.config.pts[static_cast<std::size_t>(j)];
        const RatX xu = RatX::of_poly(Poly::linear(-pt.u, Cx(1.0)));
        const CurveForm entry12 = cf_div_x(omega12_j(form, j), xu);
        const LaurentSeries s = expand_form(form.curve, entry12, q_point(form, j), 8);
        out[static_cast<std::size_t>(j)] = std::abs(s.coeff_or_zero(-1)) * std::abs(pt.v);
    }
    return out;
}

namespace {

// deterministic generic on-curve point away from the singular x-set
CurvePoint generic_probe_point(const CompanionForm& form) {
    const std::vector<Cx> sing = singular_x(form);
    for (int k = 0; k < 64; ++k) {
        const Cx x = Cx(0.37 + 0.61 * k, 0.53 + 0.17 * k);
        if (dist_to_singular(x, sing) > 0.2) {
            const Cx y = std::sqrt(form.curve.K_at(x));
            return CurvePoint{Chart::U0, x, y};
        }
    }
    throw NumericError("no generic probe point found");
}

double series_max_abs(const LaurentSeries& s) { return s.max_abs(); }

} // namespace

TraceSection extract_trace_section(const ConnectionAtlas& atlas) {
    const CompanionForm& form = atlas.companion;
    const LegendreCurve& curve = form.curve;
    TraceSection tr;
    tr.on_U0 = form.omega22;
    for (int j = 0; j < 3; ++j)
        tr.on_Uq[j] = cf_add(omega11_j(form, j), omega22_j(form, j));
    tr.on_Uinf_x1 = CurveForm::from_field(
        curve, fe_add(atlas.Ainf.e[0][0], atlas.Ainf.e[1][1]));

    const CurvePoint probe = generic_probe_point(form);
    // residuals are measured relative to the size of the compared sections
    const double ref = std::max(1.0, series_max_abs(expand_form(curve, tr.on_U0, probe, 8)));
    for (int j = 0; j < 3; ++j) {
        const auto& pt = form.config.pts[static_cast<std::size_t>(j)];
        // tr(A_qj) - tr(A_0) = d log det(B_0qj) = -dx/(x - u_j)
        const CurveForm expected_diff =
            CurveForm::from_dx_coeff(RatX::simple_pole(Cx(-1.0), pt.u));
        const CurveForm resid = cf_sub(cf_sub(tr.on_Uq[j], tr.on_U0), expected_diff);
        tr.cocycle_residuals[static_cast<std::size_t>(j)] =
            series_max_abs(expand_form(curve, resid, probe, 8)) / ref;
    }
    // tr(A_inf) - tr(A_0) = d log det(B_0inf) = -dx/x
    const CurveForm expected_inf = CurveForm::from_dx_coeff(RatX::simple_pole(Cx(-1.0), Cx(0.0)));
    const CurveForm resid_inf = cf_sub(cf_sub(tr.on_Uinf_x1, tr.on_U0), expected_inf);
    tr.cocycle_residuals[3] = series_max_abs(expand_form(curve, resid_inf, probe, 8)) / ref;
    return tr;
}

DetLineDegree det_line_degree(const ConnectionAtlas& atlas) {
    const CompanionForm& form = atlas.companion;
    Cx winding(0.0);
    for (int j = 0; j < 3; ++j) {
        const auto& pt = form.config.pts[static_cast<std::size_t>(j)];
        // det(B_0qj^{-1}) = x - u_j, d log = dx/(x - u_j)
        const CurveForm dlog = CurveForm::from_dx_coeff(RatX::simple_pole(Cx(1.0), pt.u));
        winding += form_residue(form.curve, dlog, q_point(form, j));
    }
    // det(B_0inf^{-1}) = -x1, d log = dx1/x1
    const CurveForm dlog_inf = CurveForm::from_dx_coeff(RatX::simple_pole(Cx(1.0), Cx(0.0)));
    winding += form_residue(form.curve, dlog_inf, CurvePoint::infinity());
    DetLineDegree out;
    const double rounded = std::round(winding.real());
    out.degree = static_cast<int>(rounded);
    out.preround_distance = std::hypot(winding.real() - rounded, winding.imag());
    return out;
}

SpectralFidelity check_spectral_fidelity(const CompanionForm& form, int window) {
    SpectralFidelity out;
    const LegendreCurve& curve = form.curve;
    if (const auto* lg = std::get_if<LogSpectral>(&form.spectral)) {
        const CurvePoint t1{Chart::U0, lg->t, lg->s};
        const CurvePoint t2{Chart::U0, lg->t, -lg->s};
        const Cx th[2][2] = {{lg->th1p, lg->th1m}, {lg->th2p, lg->th2m}};
        const CurvePoint tp[2] = {t1, t2};
        for (int i = 0; i < 2; ++i) {
            const Cx r12 = form_residue(curve, form.omega12, tp[i]);
            const Cx r21 = form_residue(curve, form.omega21, tp[i]);
            const Cx r22 = form_residue(curve, form.omega22, tp[i]);
            const Cx disc = std::sqrt(r22 * r22 + Cx(4.0) * r12 * r21);
            const Cx l1 = Cx(0.5) * (r22 + disc);
            const Cx l2 = Cx(0.5) * (r22 - disc);
            const double d1 = std::max(std::abs(l1 - th[i][0]), std::abs(l2 - th[i][1]));
            const double d2 = std::max(std::abs(l1 - th[i][1]), std::abs(l2 - th[i][0]));
            out.residuals.push_back(std::min(d1, d2));
            out.labels.push_back("eigenvalues_t" + std::to_string(i + 1));
        }
    } else {
        const auto& irr = std::get<IrregularSpectral>(form.spectral);
        const Cx t = irr.t(curve);
        const CurvePoint tp{Chart::U0, t, Cx(0.0)};
        const int W = window;
        const LaurentSeries a = expand_form(curve, form.omega12, tp, W);
        const LaurentSeries b = expand_form(curve, form.omega21, tp, W);
        const LaurentSeries c = expand_form(curve, form.omega22, tp, W);
        const Cx sum_m2 = irr.th_m2_plus + irr.th_m2_minus;
        const Cx sum_m1 = irr.th_m1_plus + irr.th_m1_minus();
        out.residuals.push_back(std::abs(c.coeff_or_zero(-2) - sum_m2));
        out.labels.push_back("trace_order_m2");
        out.residuals.push_back(std::abs(c.coeff_or_zero(-1) - sum_m1));
        out.labels.push_back("trace_order_m1");
        const LaurentSeries det = series_scale(Cx(-1.0), series_mul(a, b));
        out.residuals.push_back(std::abs(det.coeff_or_zero(-4) - irr.th_m2_plus * irr.th_m2_minus));
        out.labels.push_back("det_order_m4");
        const Cx cross = irr.th_m2_plus * irr.th_m1_minus() + irr.th_m2_minus * irr.th_m1_plus;
        out.residuals.push_back(std::abs(det.coeff_or_zero(-3) - cross));
        out.labels.push_back("det_order_m3");
        // individual eigenvalues by the quadratic formula on the series
        const LaurentSeries disc = series_add(series_mul(c, c),
                                              series_scale(Cx(4.0), series_mul(a, b)));
        const LaurentSeries root = series_sqrt(disc, irr.th_m2_plus - irr.th_m2_minus);
        const LaurentSeries lp = series_scale(Cx(0.5), series_add(c, root));
        const LaurentSeries lm = series_scale(Cx(0.5), series_sub(c, root));
        out.residuals.push_back(std::abs(lp.coeff_or_zero(-2) - irr.th_m2_plus));
        out.labels.push_back("eig_plus_order_m2");
        out.residuals.push_back(std::abs(lp.coeff_or_zero(-1) - irr.th_m1_plus));
        out.labels.push_back("eig_plus_order_m1");
        out.residuals.push_back(std::abs(lm.coeff_or_zero(-2) - irr.th_m2_minus));
        out.labels.push_back("eig_minus_order_m2");
        out.residuals.push_back(std::abs(lm.coeff_or_zero(-1) - irr.th_m1_minus()));
        out.labels.push_back("eig_minus_order_m1");
    }
    return out;
}

double SpectralFidelity::worst() const {
    double w = 0.0;
    for (double r : residuals) w = std::max(w, r);
    return w;
}

ConnectionAtlas build_atlas(const CompanionForm& form) {
    ConnectionAtlas atlas = assemble_atlas(form);
    const double scale = companion_scale(form);

    const auto holo = holomorphy_residuals(atlas);
    for (int j = 0; j < 3; ++j)
        if (holo[static_cast<std::size_t>(j)] > 1e-10 * scale)
            throw GluingFailure(holo[static_cast<std::size_t>(j)], "holomorphy at q" + std::to_string(j + 1));

    const GluingReport glue = check_gluing(atlas, 20);
    for (const auto& ov : glue.overlaps)
        if (ov.max_residual > 1e-9) throw GluingFailure(ov.max_residual, ov.name);

    const TraceSection tr = extract_trace_section(atlas);
    for (std::size_t k = 0; k < tr.cocycle_residuals.size(); ++k)
        if (tr.cocycle_residuals[k] > 1e-10)
            throw GluingFailure(tr.cocycle_residuals[k], "trace identity #" + std::to_string(k));

    const SpectralFidelity fid = check_spectral_fidelity(form);
    const double fid_tol = is_logarithmic(form.spectral) ? 1e-9 : 1e-8;
    if (fid.worst() > fid_tol) throw GluingFailure(fid.worst(), "polar part fidelity");

    const DetLineDegree deg = det_line_degree(atlas);
    if (deg.degree != 1 || deg.preround_distance > 1e-8)
        throw GluingFailure(deg.preround_distance, "determinant line degree");
    return atlas;
}

} // namespace dconn
