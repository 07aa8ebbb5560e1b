#include "dconn/ratfun.hpp"

#include <algorithm>
#include <cmath>

namespace dconn {

void Poly::trim() {
    double m = 0.0;
    for (const Cx& a : c) m = std::max(m, std::abs(a));
    if (m == 0.0) {
        c.assign(1, Cx(0.0));
        return;
    }
    while (c.size() > 1 && std::abs(c.back()) <= 1e-14 * m) c.pop_back();
}

Cx Poly::eval(Cx x) const {
    Cx r(0.0);
    for (std::size_t k = c.size(); k-- > 0;) r = r * x + c[k];
    return r;
}

Poly Poly::derivative() const {
    if (c.size() <= 1) return Poly::constant(Cx(0.0));
    std::vector<Cx> d(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = Cx(static_cast<double>(k)) * c[k];
    return Poly(std::move(d));
}

Poly Poly::shifted(Cx u) const {
    // repeated synthetic division by (x - u) gives Taylor coefficients at u
    std::vector<Cx> a = c;
    std::vector<Cx> res;
    res.reserve(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        Cx r(0.0);
        std::vector<Cx> q(a.size() > 1 ? a.size() - 1 : 0);
        if (a.size() == 1) {
            r = a[0];
        } else {
            Cx carry = a.back();
            for (std::size_t j = a.size() - 1; j-- > 0;) {
                q[j] = carry;
                carry = a[j] + carry * u;
            }
            r = carry;
        }
        res.push_back(r);
        if (q.empty()) break;
        a = std::move(q);
    }
    res.resize(c.size(), Cx(0.0));
    return Poly(std::move(res));
}

Poly operator+(const Poly& a, const Poly& b) {
    std::vector<Cx> c(std::max(a.c.size(), b.c.size()), Cx(0.0));
    for (std::size_t k = 0; k < a.c.size(); ++k) c[k] += a.c[k];
    for (std::size_t k = 0; k < b.c.size(); ++k) c[k] += b.c[k];
    return Poly(std::move(c));
}

Poly operator-(const Poly& a, const Poly& b) {
    std::vector<Cx> c(std::max(a.c.size(), b.c.size()), Cx(0.0));
    for (std::size_t k = 0; k < a.c.size(); ++k) c[k] += a.c[k];
    for (std::size_t k = 0; k < b.c.size(); ++k) c[k] -= b.c[k];
    return Poly(std::move(c));
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly::constant(Cx(0.0));
    std::vector<Cx> c(a.c.size() + b.c.size() - 1, Cx(0.0));
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j) c[i + j] += a.c[i] * b.c[j];
    return Poly(std::move(c));
}

Poly operator*(Cx s, const Poly& a) {
    std::vector<Cx> c = a.c;
    for (Cx& x : c) x *= s;
    return Poly(std::move(c));
}

LaurentSeries poly_on_series(const Poly& p, const LaurentSeries& s, int trunc_hint) {
    LaurentSeries r = LaurentSeries::constant(p.c.back(), trunc_hint);
    for (std::size_t k = p.c.size() - 1; k-- > 0;) {
        r = series_mul(r, s);
        r = series_add(r, LaurentSeries::constant(p.c[k], r.truncation_order()));
    }
    return r;
}

RatX::RatX(Poly n, Poly d) : num(std::move(n)), den(std::move(d)) {
    if (den.is_zero()) throw NumericError("RatX: zero denominator");
    normalize();
}

void RatX::normalize() {
    num.trim();
    den.trim();
    const Cx lead = den.c.back();
    if (lead != Cx(1.0)) {
        const Cx inv = Cx(1.0) / lead;
        for (Cx& x : num.c) x *= inv;
        for (Cx& x : den.c) x *= inv;
        den.c.back() = Cx(1.0);
    }
    if (num.is_zero()) den = Poly::constant(Cx(1.0));
}

Cx RatX::eval(Cx x) const { return num.eval(x) / den.eval(x); }

RatX RatX::derivative() const {
    return RatX(num.derivative() * den - num * den.derivative(), den * den);
}

RatX RatX::substitute_inverse() const {
    // num(1/x)/den(1/x) = x^(dd-dn) * rev(num)/rev(den)
    std::vector<Cx> rn(num.c.rbegin(), num.c.rend());
    std::vector<Cx> rd(den.c.rbegin(), den.c.rend());
    const int dn = num.degree(), dd = den.degree();
    Poly n{std::move(rn)}, d{std::move(rd)};
    if (dd > dn) {
        std::vector<Cx> shift(static_cast<std::size_t>(dd - dn + 1), Cx(0.0));
        shift.back() = Cx(1.0);
        n = n * Poly(std::move(shift));
    } else if (dn > dd) {
        std::vector<Cx> shift(static_cast<std::size_t>(dn - dd + 1), Cx(0.0));
        shift.back() = Cx(1.0);
        d = d * Poly(std::move(shift));
    }
    return RatX(std::move(n), std::move(d));
}

namespace {

// bitwise-equal denominators occur constantly (forms assembled over the same
// pole divisor); cross-multiplying them duplicates roots and inflates the
// coefficient scale enough to wreck later expansions
bool same_poly(const Poly& a, const Poly& b) { return a.c == b.c; }

} // namespace

RatX operator+(const RatX& a, const RatX& b) {
    if (same_poly(a.den, b.den)) return RatX(a.num + b.num, a.den);
    return RatX(a.num * b.den + b.num * a.den, a.den * b.den);
}

RatX operator-(const RatX& a, const RatX& b) {
    if (same_poly(a.den, b.den)) return RatX(a.num - b.num, a.den);
    return RatX(a.num * b.den - b.num * a.den, a.den * b.den);
}

RatX operator*(const RatX& a, const RatX& b) {
    return RatX(a.num * b.num, a.den * b.den);
}

RatX operator*(Cx s, const RatX& a) { return RatX(s * a.num, a.den); }

RatX rat_inverse(const RatX& a) {
    if (a.is_zero()) throw NumericError("rat_inverse: zero");
    return RatX(a.den, a.num);
}

LaurentSeries rat_on_series(const RatX& r, const LaurentSeries& s, int trunc_hint) {
    const LaurentSeries n = poly_on_series(r.num, s, trunc_hint);
    const LaurentSeries d = poly_on_series(r.den, s, trunc_hint);
    if (r.num.is_zero()) return LaurentSeries::zero(0, n.truncation_order());
    return series_div(n, d);
}

namespace {

// sum |c_k| |u|^k: the scale against which p(u) ~ 0 is judged
double eval_scale(const Poly& p, Cx u) {
    double s = 0.0, pw = 1.0;
    const double au = std::abs(u);
    for (const Cx& c : p.c) {
        s += std::abs(c) * pw;
        pw *= au;
    }
    return std::max(s, 1e-300);
}

// exact synthetic division by (x - u); the remainder is dropped
Poly deflate_root(const Poly& p, Cx u) {
    if (p.c.size() <= 1) return Poly::constant(Cx(0.0));
    std::vector<Cx> q(p.c.size() - 1);
    Cx carry = p.c.back();
    for (std::size_t j = p.c.size() - 1; j-- > 0;) {
        q[j] = carry;
        carry = p.c[j] + carry * u;
    }
    return Poly(std::move(q));
}

// number of roots at u (within roundoff of the evaluation scale), removed
int deflate_all(Poly& p, Cx u) {
    int order = 0;
    while (p.degree() > 0 && std::abs(p.eval(u)) <= 1e-12 * eval_scale(p, u)) {
        p = deflate_root(p, u);
        ++order;
    }
    return order;
}

} // namespace

int poly_deflate_at(Poly& p, Cx u) { return deflate_all(p, u); }

LaurentSeries rat_on_series_at_root(const RatX& r, const LaurentSeries& s, Cx root,
                                    int trunc_hint) {
    if (r.num.is_zero()) return LaurentSeries::zero(0, trunc_hint);
    Poly num = r.num;
    Poly den = r.den;
    const int num_ord = deflate_all(num, root);
    const int den_ord = deflate_all(den, root);
    const LaurentSeries ns = poly_on_series(num, s, trunc_hint);
    const LaurentSeries ds = poly_on_series(den, s, trunc_hint);
    LaurentSeries base = series_div(ns, ds);
    const int shift = num_ord - den_ord;
    if (shift != 0) {
        const LaurentSeries z =
            series_sub(s, LaurentSeries::constant(root, s.truncation_order()));
        LaurentSeries zp = z;
        for (int k = 1; k < std::abs(shift); ++k) zp = series_mul(zp, z);
        base = (shift > 0) ? series_mul(base, zp) : series_div(base, zp);
    }
    return base;
}

LaurentSeries rat_expand_at(const RatX& r, Cx center, int window) {
    if (r.num.is_zero()) return LaurentSeries::zero(0, window);
    // deflate roots sitting exactly at the center; relative trimming of the
    // shifted coefficients cannot see them once |center| makes the
    // coefficient scale large
    Poly num = r.num;
    Poly den = r.den;
    const int num_ord = deflate_all(num, center);
    const int den_ord = deflate_all(den, center);
    const Poly n = num.shifted(center);
    const Poly d = den.shifted(center);
    const int shift = num_ord - den_ord;
    const LaurentSeries ns = LaurentSeries::from_coeffs(0, n.c, window - std::min(0, shift));
    const LaurentSeries ds = LaurentSeries::from_coeffs(0, d.c, window - std::min(0, shift));
    return series_div(ns, ds).shifted(shift).truncated(window);
}

} // namespace dconn
