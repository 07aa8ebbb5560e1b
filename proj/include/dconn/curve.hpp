#pragma once

#include <array>
#include <optional>

#include "dconn/ratfun.hpp"

namespace dconn {

/// The elliptic curve y1^2 = x1 (x1 - 1)(x1 - lambda) in chart U0, glued to
/// U_infty: y2^2 = x2 (1 - x2)(1 - lambda x2) by x1 = 1/x2, y1 = y2 / x2^2.
class LegendreCurve {
public:
    static constexpr double kBranchSnap = 1e-10;

    explicit LegendreCurve(Cx lambda);

    Cx lambda() const { return lambda_; }
    const Poly& K() const { return K_; }          // chart U0 cubic
    const Poly& Kinf() const { return Kinf_; }    // chart UInfty cubic
    Cx K_at(Cx x) const { return K_.eval(x); }
    Cx Kprime_at(Cx x) const { return Kp_.eval(x); }
    std::array<Cx, 3> branch_x() const { return {Cx(0.0), Cx(1.0), lambda_}; }

    bool near_branch_x(Cx x) const;               // within kBranchSnap of {0,1,lambda}

private:
    Cx lambda_;
    Poly K_, Kp_, Kinf_;
};

enum class Chart { U0, UInfty };

struct CurvePoint {
    Chart chart = Chart::U0;
    Cx x{};
    Cx y{};

    static CurvePoint infinity() { return CurvePoint{Chart::UInfty, Cx(0.0), Cx(0.0)}; }
    bool is_infinity() const { return chart == Chart::UInfty && std::abs(x) <= 1e-14 && std::abs(y) <= 1e-14; }
};

/// Snap (u, v_hint) to the curve in chart U0.  v_hint^2 must match K(u) to
/// 1e-8 relative; points within kBranchSnap of a root of K become the exact
/// branch point.
CurvePoint lift_point(const LegendreCurve& curve, Cx u, Cx v_hint);

void validate_point(const LegendreCurve& curve, const CurvePoint& p, double tol = 1e-12);

/// Element a(x) + b(x) y of the function field, chart U0 coordinates.
struct FieldElem {
    RatX a, b;

    FieldElem() = default;
    FieldElem(RatX a_, RatX b_) : a(std::move(a_)), b(std::move(b_)) {}
    static FieldElem zero() { return FieldElem(); }
    static FieldElem one() { return FieldElem(RatX::constant(Cx(1.0)), RatX()); }
    static FieldElem of_x(RatX r) { return FieldElem(std::move(r), RatX()); }

    bool is_zero() const { return a.is_zero() && b.is_zero(); }
    Cx eval(Cx x, Cx y) const { return a.eval(x) + b.eval(x) * y; }
};

FieldElem fe_add(const FieldElem& p, const FieldElem& q);
FieldElem fe_sub(const FieldElem& p, const FieldElem& q);
FieldElem fe_scale(Cx s, const FieldElem& p);
FieldElem fe_mul(const LegendreCurve& c, const FieldElem& p, const FieldElem& q);
FieldElem fe_inverse(const LegendreCurve& c, const FieldElem& p);
/// d/dx with dy/dx = K'(x) y / (2 K(x)).
FieldElem fe_ddx(const LegendreCurve& c, const FieldElem& p);

/// Meromorphic 1-form (r1(x) + r2(x) y) dx / y on the curve.
struct CurveForm {
    RatX r1, r2;

    CurveForm() = default;
    CurveForm(RatX r1_, RatX r2_) : r1(std::move(r1_)), r2(std::move(r2_)) {}
    /// f dx with f = a + b y  ->  r1 = b K, r2 = a.
    static CurveForm from_field(const LegendreCurve& c, const FieldElem& f);
    /// g(x) dx for rational g (no y part):  r1 = 0, r2 = g.
    static CurveForm from_dx_coeff(RatX g) { return CurveForm(RatX(), std::move(g)); }

    /// dx-coefficient as a field element: f = r2 + (r1/K) y.
    FieldElem field(const LegendreCurve& c) const;
    Cx eval_dx_coeff(Cx x, Cx y) const { return (r1.eval(x) + r2.eval(x) * y) / y; }
};

CurveForm cf_add(const CurveForm& p, const CurveForm& q);
CurveForm cf_sub(const CurveForm& p, const CurveForm& q);
CurveForm cf_scale(Cx s, const CurveForm& p);
CurveForm cf_mul_fn(const LegendreCurve& c, const FieldElem& f, const CurveForm& w);
/// Divide by the rational function g(x).
CurveForm cf_div_x(const CurveForm& w, const RatX& g);

/// Laurent expansion of the form in the canonical local parameter of the
/// point: x - u at a generic point, y at a finite branch point, y2 at
/// infinity.  The series is the dz-coefficient: omega = (series) dz.
LaurentSeries expand_form(const LegendreCurve& curve, const CurveForm& form,
                          const CurvePoint& at, int window = 16);

Cx form_residue(const LegendreCurve& curve, const CurveForm& form, const CurvePoint& at);

/// y(u + z) on the branch through (u, v); generic points only.
LaurentSeries branch_y_series(const LegendreCurve& curve, Cx u, Cx v, int window);

/// Transport of a chart-U0 form to chart UInfty:
/// f~(x2, y2) dx2 with f~ = -a(1/x2)/x2^2 - b(1/x2) y2 / x2^4.
struct InfChartForm {
    RatX a2, b2; // dx2-coefficient a2(x2) + b2(x2) y2
};
InfChartForm transport_to_infinity(const CurveForm& form);

} // namespace dconn
