#include "dconn/curve.hpp"

#include <cmath>

namespace dconn {

LegendreCurve::LegendreCurve(Cx lambda) : lambda_(lambda) {
    if (!is_finite(lambda)) throw DegenerateCurve("lambda must be finite");
    if (std::abs(lambda) <= 1e-12 || std::abs(lambda - Cx(1.0)) <= 1e-12)
        throw DegenerateCurve("lambda in {0,1}: K has a repeated root");
    // K(x) = x (x-1)(x-lambda) = x^3 - (1+lambda) x^2 + lambda x
    K_ = Poly({Cx(0.0), lambda, -(Cx(1.0) + lambda), Cx(1.0)});
    Kp_ = K_.derivative();
    // Kinf(x2) = x2 (1-x2)(1-lambda x2) = x2 - (1+lambda) x2^2 + lambda x2^3
    Kinf_ = Poly({Cx(0.0), Cx(1.0), -(Cx(1.0) + lambda), lambda});
}

bool LegendreCurve::near_branch_x(Cx x) const {
    for (Cx b : branch_x())
        if (std::abs(x - b) <= kBranchSnap) return true;
    return false;
}

CurvePoint lift_point(const LegendreCurve& curve, Cx u, Cx v_hint) {
    if (!is_finite(u) || !is_finite(v_hint)) throw OffCurve("non-finite point data");
    const Cx Ku = curve.K_at(u);
    const double scale = std::max({1.0, std::abs(Ku), std::abs(v_hint) * std::abs(v_hint)});
    if (std::abs(v_hint * v_hint - Ku) > 1e-8 * scale)
        throw OffCurve("v_hint^2 does not match K(u)");
    for (Cx b : curve.branch_x()) {
        if (std::abs(u - b) <= LegendreCurve::kBranchSnap)
            return CurvePoint{Chart::U0, b, Cx(0.0)};
    }
    const Cx r = std::sqrt(Ku);
    const Cx v = (std::abs(r - v_hint) <= std::abs(-r - v_hint)) ? r : -r;
    return CurvePoint{Chart::U0, u, v};
}

void validate_point(const LegendreCurve& curve, const CurvePoint& p, double tol) {
    const Poly& cubic = (p.chart == Chart::U0) ? curve.K() : curve.Kinf();
    const Cx k = cubic.eval(p.x);
    const double scale = std::max({1.0, std::abs(k), std::abs(p.y) * std::abs(p.y)});
    if (std::abs(p.y * p.y - k) > tol * scale) throw OffCurve("point fails curve equation");
}

FieldElem fe_add(const FieldElem& p, const FieldElem& q) { return FieldElem(p.a + q.a, p.b + q.b); }
FieldElem fe_sub(const FieldElem& p, const FieldElem& q) { return FieldElem(p.a - q.a, p.b - q.b); }
FieldElem fe_scale(Cx s, const FieldElem& p) { return FieldElem(s * p.a, s * p.b); }

FieldElem fe_mul(const LegendreCurve& c, const FieldElem& p, const FieldElem& q) {
    // (a1 + b1 y)(a2 + b2 y) = a1 a2 + b1 b2 K + (a1 b2 + a2 b1) y
    const RatX K = RatX::of_poly(c.K());
    return FieldElem(p.a * q.a + (p.b * q.b) * K, p.a * q.b + q.a * p.b);
}

FieldElem fe_inverse(const LegendreCurve& c, const FieldElem& p) {
    if (p.is_zero()) throw NumericError("fe_inverse: zero element");
    // 1/(a + b y) = (a - b y) / (a^2 - b^2 K)
    const RatX K = RatX::of_poly(c.K());
    const RatX norm = p.a * p.a - (p.b * p.b) * K;
    if (norm.is_zero()) throw NumericError("fe_inverse: zero norm");
    const RatX inv = rat_inverse(norm);
    return FieldElem(p.a * inv, (Cx(-1.0) * p.b) * inv);
}

FieldElem fe_ddx(const LegendreCurve& c, const FieldElem& p) {
    // d(a + b y)/dx = a' + (b' + b K' / (2K)) y
    const RatX K = RatX::of_poly(c.K());
    const RatX Kp = RatX::of_poly(c.K().derivative());
    const RatX half = RatX::constant(Cx(0.5));
    return FieldElem(p.a.derivative(), p.b.derivative() + half * p.b * Kp * rat_inverse(K));
}

CurveForm CurveForm::from_field(const LegendreCurve& c, const FieldElem& f) {
    return CurveForm(f.b * RatX::of_poly(c.K()), f.a);
}

FieldElem CurveForm::field(const LegendreCurve& c) const {
    return FieldElem(r2, r1 * rat_inverse(RatX::of_poly(c.K())));
}

CurveForm cf_add(const CurveForm& p, const CurveForm& q) { return CurveForm(p.r1 + q.r1, p.r2 + q.r2); }
CurveForm cf_sub(const CurveForm& p, const CurveForm& q) { return CurveForm(p.r1 - q.r1, p.r2 - q.r2); }
CurveForm cf_scale(Cx s, const CurveForm& p) { return CurveForm(s * p.r1, s * p.r2); }

CurveForm cf_mul_fn(const LegendreCurve& c, const FieldElem& f, const CurveForm& w) {
    // (a + b y) * (r1 + r2 y)/y dx = (a r1 + b r2 K + (a r2 + b r1) y)/y dx
    const RatX K = RatX::of_poly(c.K());
    return CurveForm(f.a * w.r1 + (f.b * w.r2) * K, f.a * w.r2 + f.b * w.r1);
}

CurveForm cf_div_x(const CurveForm& w, const RatX& g) {
    const RatX inv = rat_inverse(g);
    return CurveForm(w.r1 * inv, w.r2 * inv);
}

LaurentSeries branch_y_series(const LegendreCurve& curve, Cx u, Cx v, int window) {
    // y(u+z) = sqrt(K(u+z)), branch picked by v
    const Poly Ks = curve.K().shifted(u);
    const LaurentSeries kser = LaurentSeries::from_coeffs(0, Ks.c, window);
    return series_sqrt(kser, v);
}

namespace {

// x(w) at a finite branch point b of K: the series solving K(x(w)) = w^2
// with x(0) = b.  Newton iteration on truncated series.
LaurentSeries branch_x_of_w(const Poly& cubic, Cx b, int window) {
    const Poly cubp = cubic.derivative();
    const Cx kpb = cubp.eval(b);
    if (kpb == Cx(0.0)) throw DegenerateCurve("repeated root in branch expansion");
    const LaurentSeries w2 = LaurentSeries::monomial(Cx(1.0), 2, window + 2);
    LaurentSeries x = series_add(LaurentSeries::constant(b, window + 2),
                                 series_scale(Cx(1.0) / kpb, w2));
    for (int it = 0; it < 8; ++it) {
        const LaurentSeries fx = series_sub(poly_on_series(cubic, x, window + 2), w2);
        if (fx.is_zero()) break;
        const LaurentSeries fpx = poly_on_series(cubp, x, window + 2);
        const LaurentSeries corr = series_div(fx, fpx);
        if (corr.is_zero()) break;
        x = series_sub(x, corr);
        if (corr.lowest_order() > window + 1) break;
    }
    return x;
}

LaurentSeries expand_generic_u0(const LegendreCurve& curve, const CurveForm& form,
                                Cx u, Cx v, int window) {
    // local parameter z = x - u; dx = dz
    const int W = window + 4;
    const LaurentSeries y = branch_y_series(curve, u, v, W);
    const LaurentSeries r1 = rat_expand_at(form.r1, u, W);
    const LaurentSeries r2 = rat_expand_at(form.r2, u, W);
    const LaurentSeries num = series_add(r1, series_mul(r2, y));
    return series_div(num, y).truncated(window);
}

LaurentSeries expand_generic_chart(const Poly& cubic, const RatX& a, const RatX& b,
                                   Cx u, Cx v, int window) {
    // dz-coefficient a + b y expanded at a generic chart point (u, v)
    const int W = window + 4;
    const Poly Ks = cubic.shifted(u);
    const LaurentSeries y = series_sqrt(LaurentSeries::from_coeffs(0, Ks.c, W), v);
    const LaurentSeries as = rat_expand_at(a, u, W);
    const LaurentSeries bs = rat_expand_at(b, u, W);
    return series_add(as, series_mul(bs, y)).truncated(window);
}

LaurentSeries expand_branch_chart(const Poly& cubic, const RatX& a, const RatX& b,
                                  Cx root, int window) {
    // local parameter w = y; x = x(w), dx = x'(w) dw
    const int W = window + 8;
    const LaurentSeries x = branch_x_of_w(cubic, root, W);
    const LaurentSeries dxdw = series_derivative(x);
    const LaurentSeries w = LaurentSeries::monomial(Cx(1.0), 1, W);
    const LaurentSeries as = rat_on_series_at_root(a, x, root, W);
    const LaurentSeries bs = rat_on_series_at_root(b, x, root, W);
    const LaurentSeries f = series_add(as, series_mul(bs, w));
    return series_mul(f, dxdw).truncated(window);
}

} // namespace

InfChartForm transport_to_infinity(const CurveForm& form) {
    // f dx1, f = r2 + (r1/K) y1; with x1 = 1/x2, y1 = y2/x2^2, dx1 = -dx2/x2^2:
    // dx2-coefficient = -(1/x2^2) [ a(1/x2) + b(1/x2) y2 / x2^2 ],
    // where a = r2 and b = r1/K.
    // Work with r-form directly: (r1 + r2 y1) dx1 / y1
    //   = (r1(1/x2) + r2(1/x2) y2/x2^2) * (-dx2/x2^2) * x2^2 / y2
    //   = -(r1(1/x2) + r2(1/x2) y2/x2^2) dx2 / y2.
    // So a2 + b2 y2 = dx2-coeff with
    //   a2 = -r2(1/x2) / x2^2 * ... (collect y2 powers via y2^2 = Kinf)
    // Simplest: dx2-coeff = -r1(1/x2)/y2 - r2(1/x2)/x2^2
    //   = -r1(1/x2) y2 / Kinf(x2) - r2(1/x2)/x2^2.
    const RatX r1i = form.r1.substitute_inverse();
    const RatX r2i = form.r2.substitute_inverse();
    const RatX x2sq = RatX::of_poly(Poly({Cx(0.0), Cx(0.0), Cx(1.0)}));
    InfChartForm out;
    out.a2 = Cx(-1.0) * r2i * rat_inverse(x2sq);
    out.b2 = Cx(-1.0) * r1i; // divided by Kinf at expansion time
    return out;
}

LaurentSeries expand_form(const LegendreCurve& curve, const CurveForm& form,
                          const CurvePoint& at, int window) {
    if (window < 4) throw NumericError("expand_form: window must be >= 4");
    LaurentSeries out;
    if (at.chart == Chart::U0) {
        if (curve.near_branch_x(at.x)) {
            // snap to the exact root
            Cx root = at.x;
            for (Cx b : curve.branch_x())
                if (std::abs(at.x - b) <= LegendreCurve::kBranchSnap) root = b;
            const RatX a = form.r2;
            const RatX b = form.r1 * rat_inverse(RatX::of_poly(curve.K()));
            out = expand_branch_chart(curve.K(), a, b, root, window);
        } else {
            out = expand_generic_u0(curve, form, at.x, at.y, window);
        }
    } else {
        const InfChartForm t = transport_to_infinity(form);
        const RatX a2 = t.a2;
        const RatX b2 = t.b2 * rat_inverse(RatX::of_poly(curve.Kinf()));
        // roots of Kinf: {0, 1, 1/lambda}; x2 = 0 is the point at infinity
        bool branch = false;
        Cx root{};
        for (Cx b : {Cx(0.0), Cx(1.0), Cx(1.0) / curve.lambda()}) {
            if (std::abs(at.x - b) <= LegendreCurve::kBranchSnap) {
                branch = true;
                root = b;
            }
        }
        if (branch)
            out = expand_branch_chart(curve.Kinf(), a2, b2, root, window);
        else
            out = expand_generic_chart(curve.Kinf(), a2, b2, at.x, at.y, window);
    }
    if (!out.is_zero() && out.truncation_order() < -1)
        throw WindowExhausted("expand_form: window exhausted before order -1");
    return out;
}

Cx form_residue(const LegendreCurve& curve, const CurveForm& form, const CurvePoint& at) {
    return residue(expand_form(curve, form, at));
}

} // namespace dconn
