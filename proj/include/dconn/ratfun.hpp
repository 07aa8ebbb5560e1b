#pragma once

#include <vector>

#include "dconn/numeric.hpp"

namespace dconn {

/// Dense polynomial over Cx, coefficients ascending.
struct Poly {
    std::vector<Cx> c;

    Poly() : c{Cx(0.0)} {}
    explicit Poly(std::vector<Cx> coeffs) : c(std::move(coeffs)) { trim(); }
    static Poly constant(Cx a) { return Poly({a}); }
    static Poly x() { return Poly({Cx(0.0), Cx(1.0)}); }
    static Poly linear(Cx a0, Cx a1) { return Poly({a0, a1}); }

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.size() == 1 && c[0] == Cx(0.0); }
    void trim();

    Cx eval(Cx x) const;
    Poly derivative() const;
    /// Taylor recentering: coefficients of p(u + z) in z.
    Poly shifted(Cx u) const;
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly operator*(Cx s, const Poly& a);

/// Horner evaluation of a polynomial on a Laurent series.
LaurentSeries poly_on_series(const Poly& p, const LaurentSeries& s, int trunc_hint);

/// Rational function of one variable: num/den, den kept monic.
struct RatX {
    Poly num;
    Poly den;

    RatX() : num(Poly::constant(Cx(0.0))), den(Poly::constant(Cx(1.0))) {}
    RatX(Poly n, Poly d);
    static RatX constant(Cx a) { return RatX(Poly::constant(a), Poly::constant(Cx(1.0))); }
    static RatX of_poly(Poly p) { return RatX(std::move(p), Poly::constant(Cx(1.0))); }
    /// a / (x - pole)
    static RatX simple_pole(Cx a, Cx pole) {
        return RatX(Poly::constant(a), Poly::linear(-pole, Cx(1.0)));
    }

    bool is_zero() const { return num.is_zero(); }
    Cx eval(Cx x) const;
    RatX derivative() const;
    /// r(1/x) as a rational function of x.
    RatX substitute_inverse() const;

    void normalize();
};

RatX operator+(const RatX& a, const RatX& b);
RatX operator-(const RatX& a, const RatX& b);
RatX operator*(const RatX& a, const RatX& b);
RatX operator*(Cx s, const RatX& a);
RatX rat_inverse(const RatX& a);

/// Laurent expansion of r(center + z) (or of r in the series argument).
LaurentSeries rat_on_series(const RatX& r, const LaurentSeries& s, int trunc_hint);
LaurentSeries rat_expand_at(const RatX& r, Cx center, int window);

/// Remove every root of p at u by exact synthetic division; returns the
/// multiplicity.  Detection is relative to the evaluation scale at u.
int poly_deflate_at(Poly& p, Cx u);

/// Composition r(s) when s(0) = root and num/den may vanish at root: the
/// vanishing factors are deflated exactly before composing, avoiding the
/// roundoff junk that otherwise fakes the lowest order.
LaurentSeries rat_on_series_at_root(const RatX& r, const LaurentSeries& s, Cx root,
                                    int trunc_hint);

} // namespace dconn
