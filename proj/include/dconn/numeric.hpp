#pragma once

#include <array>
#include <complex>
#include <vector>

#include "dconn/errors.hpp"

namespace dconn {

using Cx = std::complex<double>;

inline bool is_finite(Cx z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Truncated complex Laurent expansion in a local parameter.
///
/// coef[k] is the coefficient of zeta^(lowest+k); the expansion is only
/// trusted up to order trunc (inclusive).  An empty coef vector means the
/// series vanishes identically on its window.  Leading coefficients smaller
/// than kTrimRel * max|coef| are trimmed so lowest_order is well defined.
class LaurentSeries {
public:
    static constexpr int kDefaultWindow = 12; // terms past the lowest order
    static constexpr double kTrimRel = 1e-13;

    LaurentSeries() : lowest_(0), trunc_(kDefaultWindow) {}

    static LaurentSeries zero(int lowest, int trunc);
    static LaurentSeries constant(Cx c, int trunc = kDefaultWindow);
    static LaurentSeries monomial(Cx c, int order, int trunc);
    static LaurentSeries from_coeffs(int lowest, std::vector<Cx> coef, int trunc);

    bool is_zero() const { return coef_.empty(); }
    int lowest_order() const { return lowest_; }
    int truncation_order() const { return trunc_; }
    int length() const { return static_cast<int>(coef_.size()); }

    /// Coefficient of zeta^order; zero below the window, throws above it.
    Cx coeff(int order) const;
    /// As coeff(), but returns zero above the window too (for reporting).
    Cx coeff_or_zero(int order) const;
    Cx leading() const;

    double max_abs() const;
    const std::vector<Cx>& raw() const { return coef_; }

    LaurentSeries truncated(int new_trunc) const;
    LaurentSeries shifted(int by) const; // multiply by zeta^by

private:
    int lowest_;
    int trunc_;
    std::vector<Cx> coef_;

    void normalize();
    friend LaurentSeries series_add(const LaurentSeries&, const LaurentSeries&);
    friend LaurentSeries series_scale(Cx, const LaurentSeries&);
};

LaurentSeries series_add(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries series_sub(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries series_scale(Cx c, const LaurentSeries& a);
LaurentSeries series_mul(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries series_inverse(const LaurentSeries& a);
LaurentSeries series_div(const LaurentSeries& a, const LaurentSeries& b);

/// Square root with an explicit branch: branch_value^2 must match the
/// leading coefficient and the lowest order must be even.
LaurentSeries series_sqrt(const LaurentSeries& a, Cx branch_value);

LaurentSeries series_derivative(const LaurentSeries& a);

/// Coefficient of zeta^-1.  Zero if the window starts above -1 is impossible
/// (that is a pole we missed), so that case throws WindowExhausted; a window
/// that starts at order >= 0 simply has residue zero.
Cx residue(const LaurentSeries& a);

struct LinearSystem {
    int n = 0;                 // 2 or 3
    std::array<Cx, 9> a{};     // row-major n x n
    std::array<Cx, 3> rhs{};
};

Cx det2(Cx a, Cx b, Cx c, Cx d);
Cx det3(const std::array<Cx, 9>& m);

/// Explicit Cramer solve for n in {2,3} with one refinement pass.
/// Throws NearSingular when |det| <= singular_factor * prod(row norms).
std::array<Cx, 3> solve_linear(const LinearSystem& sys, double singular_factor = 1e-10);

} // namespace dconn
