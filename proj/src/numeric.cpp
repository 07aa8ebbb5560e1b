#include "dconn/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace dconn {

LaurentSeries LaurentSeries::zero(int lowest, int trunc) {
    LaurentSeries s;
    s.lowest_ = lowest;
    s.trunc_ = trunc;
    return s;
}

LaurentSeries LaurentSeries::constant(Cx c, int trunc) {
    return monomial(c, 0, trunc);
}

LaurentSeries LaurentSeries::monomial(Cx c, int order, int trunc) {
    LaurentSeries s;
    s.lowest_ = order;
    s.trunc_ = trunc;
    if (c != Cx(0.0)) s.coef_.assign(1, c);
    s.normalize();
    return s;
}

LaurentSeries LaurentSeries::from_coeffs(int lowest, std::vector<Cx> coef, int trunc) {
    LaurentSeries s;
    s.lowest_ = lowest;
    s.coef_ = std::move(coef);
    s.trunc_ = trunc;
    if (s.trunc_ < lowest + static_cast<int>(s.coef_.size()) - 1)
        s.coef_.resize(std::max(0, s.trunc_ - lowest + 1));
    s.normalize();
    return s;
}

double LaurentSeries::max_abs() const {
    double m = 0.0;
    for (const Cx& c : coef_) m = std::max(m, std::abs(c));
    return m;
}

void LaurentSeries::normalize() {
    const double m = max_abs();
    if (m == 0.0) {
        coef_.clear();
        return;
    }
    // Leading-zero detection against a short look-ahead max rather than the
    // global one.  Series with small convergence radii (eigenvalue branches,
    // infinity-chart compositions) have tails growing by orders of magnitude
    // per coefficient, and a global threshold would swallow genuine small
    // leading coefficients; cancellation junk below the true lowest order is
    // removed at the source by root deflation, so a window of 4 suffices.
    std::size_t k = 0;
    while (k < coef_.size()) {
        double local = 0.0;
        for (std::size_t j = k; j < std::min(coef_.size(), k + 4); ++j)
            local = std::max(local, std::abs(coef_[j]));
        if (std::abs(coef_[k]) > kTrimRel * local) break;
        ++k;
    }
    if (k > 0) {
        coef_.erase(coef_.begin(), coef_.begin() + static_cast<long>(k));
        lowest_ += static_cast<int>(k);
    }
    if (coef_.empty()) return;
    // keep the window bound consistent
    if (lowest_ + static_cast<int>(coef_.size()) - 1 > trunc_)
        coef_.resize(static_cast<std::size_t>(std::max(0, trunc_ - lowest_ + 1)));
    if (coef_.empty()) lowest_ = trunc_;
}

Cx LaurentSeries::coeff(int order) const {
    if (is_zero()) {
        if (order > trunc_) throw WindowExhausted("coefficient above truncation order");
        return Cx(0.0);
    }
    if (order > trunc_) throw WindowExhausted("coefficient above truncation order");
    if (order < lowest_) return Cx(0.0);
    return coef_[static_cast<std::size_t>(order - lowest_)];
}

Cx LaurentSeries::coeff_or_zero(int order) const {
    if (is_zero() || order < lowest_ || order > trunc_) return Cx(0.0);
    int k = order - lowest_;
    if (k >= length()) return Cx(0.0);
    return coef_[static_cast<std::size_t>(k)];
}

Cx LaurentSeries::leading() const {
    if (is_zero()) return Cx(0.0);
    return coef_.front();
}

LaurentSeries LaurentSeries::truncated(int new_trunc) const {
    LaurentSeries s = *this;
    if (new_trunc < s.trunc_) {
        s.trunc_ = new_trunc;
        if (!s.coef_.empty())
            s.coef_.resize(static_cast<std::size_t>(std::max(0, new_trunc - s.lowest_ + 1)));
        s.normalize();
    }
    return s;
}

LaurentSeries LaurentSeries::shifted(int by) const {
    LaurentSeries s = *this;
    s.lowest_ += by;
    s.trunc_ += by;
    return s;
}

LaurentSeries series_add(const LaurentSeries& a, const LaurentSeries& b) {
    const int trunc = std::min(a.truncation_order(), b.truncation_order());
    if (a.is_zero() && b.is_zero()) return LaurentSeries::zero(std::min(a.lowest_order(), b.lowest_order()), trunc);
    if (a.is_zero()) return b.truncated(trunc);
    if (b.is_zero()) return a.truncated(trunc);
    const int lowest = std::min(a.lowest_order(), b.lowest_order());
    if (trunc < lowest) throw EmptyWindow("series_add: empty window");
    std::vector<Cx> c(static_cast<std::size_t>(trunc - lowest + 1), Cx(0.0));
    for (int k = lowest; k <= trunc; ++k)
        c[static_cast<std::size_t>(k - lowest)] = a.coeff_or_zero(k) + b.coeff_or_zero(k);
    return LaurentSeries::from_coeffs(lowest, std::move(c), trunc);
}

LaurentSeries series_sub(const LaurentSeries& a, const LaurentSeries& b) {
    return series_add(a, series_scale(Cx(-1.0), b));
}

LaurentSeries series_scale(Cx c, const LaurentSeries& a) {
    if (c == Cx(0.0) || a.is_zero()) return LaurentSeries::zero(a.lowest_order(), a.truncation_order());
    LaurentSeries s = a;
    for (Cx& x : s.coef_) x *= c;
    s.normalize();
    return s;
}

LaurentSeries series_mul(const LaurentSeries& a, const LaurentSeries& b) {
    // product trusted up to min attainable order
    const int trunc = std::min(a.lowest_order() + b.truncation_order(),
                               b.lowest_order() + a.truncation_order());
    const int lowest = a.lowest_order() + b.lowest_order();
    if (trunc < lowest) throw EmptyWindow("series_mul: empty window after truncation");
    if (a.is_zero() || b.is_zero()) return LaurentSeries::zero(lowest, trunc);
    std::vector<Cx> c(static_cast<std::size_t>(trunc - lowest + 1), Cx(0.0));
    const auto& ca = a.raw();
    const auto& cb = b.raw();
    for (std::size_t i = 0; i < ca.size(); ++i) {
        const int oi = a.lowest_order() + static_cast<int>(i);
        for (std::size_t j = 0; j < cb.size(); ++j) {
            const int o = oi + b.lowest_order() + static_cast<int>(j);
            if (o > trunc) break;
            c[static_cast<std::size_t>(o - lowest)] += ca[i] * cb[j];
        }
    }
    return LaurentSeries::from_coeffs(lowest, std::move(c), trunc);
}

LaurentSeries series_inverse(const LaurentSeries& a) {
    if (a.is_zero() || a.leading() == Cx(0.0))
        throw NumericError("series_inverse: zero leading coefficient");
    const int la = a.lowest_order();
    const int window = a.truncation_order() - la; // number of known orders past leading
    // invert u = a / (lead * zeta^la), a Taylor series with u0 = 1
    const auto& ca = a.raw();
    const Cx lead = ca[0];
    std::vector<Cx> u(static_cast<std::size_t>(window + 1), Cx(0.0));
    for (std::size_t k = 0; k < u.size() && k < ca.size(); ++k) u[k] = ca[k] / lead;
    std::vector<Cx> inv(u.size(), Cx(0.0));
    inv[0] = Cx(1.0);
    for (std::size_t k = 1; k < u.size(); ++k) {
        Cx s(0.0);
        for (std::size_t j = 1; j <= k; ++j) s += u[j] * inv[k - j];
        inv[k] = -s;
    }
    for (Cx& x : inv) x /= lead;
    return LaurentSeries::from_coeffs(-la, std::move(inv), -la + window);
}

LaurentSeries series_div(const LaurentSeries& a, const LaurentSeries& b) {
    return series_mul(a, series_inverse(b));
}

LaurentSeries series_sqrt(const LaurentSeries& a, Cx branch_value) {
    if (a.is_zero()) throw NumericError("series_sqrt: zero series");
    const int la = a.lowest_order();
    if (la % 2 != 0) throw NumericError("series_sqrt: odd lowest order");
    const Cx lead = a.leading();
    if (std::abs(branch_value * branch_value - lead) > 1e-8 * std::abs(lead))
        throw NumericError("series_sqrt: branch value does not square to leading coefficient");
    const int window = a.truncation_order() - la;
    // u = a / (lead * zeta^la) = 1 + ..., take Taylor sqrt of u
    const auto& ca = a.raw();
    std::vector<Cx> u(static_cast<std::size_t>(window + 1), Cx(0.0));
    for (std::size_t k = 0; k < u.size() && k < ca.size(); ++k) u[k] = ca[k] / lead;
    std::vector<Cx> r(u.size(), Cx(0.0));
    r[0] = Cx(1.0);
    // coefficient recursion from r*r = u
    for (std::size_t k = 1; k < u.size(); ++k) {
        Cx s(0.0);
        for (std::size_t j = 1; j < k; ++j) s += r[j] * r[k - j];
        r[k] = (u[k] - s) / (Cx(2.0) * r[0]);
    }
    for (Cx& x : r) x *= branch_value;
    return LaurentSeries::from_coeffs(la / 2, std::move(r), la / 2 + window);
}

LaurentSeries series_derivative(const LaurentSeries& a) {
    if (a.is_zero()) return LaurentSeries::zero(a.lowest_order() - 1, a.truncation_order() - 1);
    const auto& ca = a.raw();
    std::vector<Cx> c(ca.size(), Cx(0.0));
    for (std::size_t k = 0; k < ca.size(); ++k) {
        const int o = a.lowest_order() + static_cast<int>(k);
        c[k] = Cx(static_cast<double>(o)) * ca[k];
    }
    return LaurentSeries::from_coeffs(a.lowest_order() - 1, std::move(c), a.truncation_order() - 1);
}

Cx residue(const LaurentSeries& a) {
    if (a.is_zero()) {
        if (a.truncation_order() < -1 || a.lowest_order() > -1) {
            // zero on a window not containing -1 still has residue zero only
            // when the window starts below it; otherwise we cannot know.
        }
        return Cx(0.0);
    }
    if (a.lowest_order() > -1) return Cx(0.0);
    if (a.truncation_order() < -1) throw WindowExhausted("residue: window ends before order -1");
    return a.coeff(-1);
}

Cx det2(Cx a, Cx b, Cx c, Cx d) { return a * d - b * c; }

Cx det3(const std::array<Cx, 9>& m) {
    return m[0] * (m[4] * m[8] - m[5] * m[7])
         - m[1] * (m[3] * m[8] - m[5] * m[6])
         + m[2] * (m[3] * m[7] - m[4] * m[6]);
}

namespace {

std::array<Cx, 3> cramer(const LinearSystem& sys, const std::array<Cx, 3>& rhs, Cx det) {
    std::array<Cx, 3> x{};
    const int n = sys.n;
    for (int col = 0; col < n; ++col) {
        LinearSystem tmp = sys;
        for (int row = 0; row < n; ++row) tmp.a[static_cast<std::size_t>(row * n + col)] = rhs[static_cast<std::size_t>(row)];
        const Cx dk = (n == 2) ? det2(tmp.a[0], tmp.a[1], tmp.a[2], tmp.a[3]) : det3(tmp.a);
        x[static_cast<std::size_t>(col)] = dk / det;
    }
    return x;
}

} // namespace

std::array<Cx, 3> solve_linear(const LinearSystem& sys, double singular_factor) {
    if (sys.n != 2 && sys.n != 3) throw NumericError("solve_linear: n must be 2 or 3");
    const int n = sys.n;
    for (int i = 0; i < n * n; ++i)
        if (!is_finite(sys.a[static_cast<std::size_t>(i)])) throw NumericError("solve_linear: non-finite matrix entry");
    double scale = 1.0;
    for (int row = 0; row < n; ++row) {
        double rn = 0.0;
        for (int col = 0; col < n; ++col) rn += std::abs(sys.a[static_cast<std::size_t>(row * n + col)]);
        scale *= rn;
    }
    const Cx det = (n == 2) ? det2(sys.a[0], sys.a[1], sys.a[2], sys.a[3]) : det3(sys.a);
    const double threshold = singular_factor * scale;
    if (std::abs(det) <= threshold) throw NearSingular(std::abs(det), threshold);

    std::array<Cx, 3> x = cramer(sys, sys.rhs, det);
    // one refinement pass keeps the back-substitution residual near roundoff
    std::array<Cx, 3> r{};
    for (int row = 0; row < n; ++row) {
        Cx s = sys.rhs[static_cast<std::size_t>(row)];
        for (int col = 0; col < n; ++col) s -= sys.a[static_cast<std::size_t>(row * n + col)] * x[static_cast<std::size_t>(col)];
        r[static_cast<std::size_t>(row)] = s;
    }
    const std::array<Cx, 3> dx = cramer(sys, r, det);
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] += dx[static_cast<std::size_t>(i)];

    // verify the residual on every call
    double worst = 0.0, norm = 0.0;
    for (int row = 0; row < n; ++row) {
        Cx s = sys.rhs[static_cast<std::size_t>(row)];
        double rownorm = std::abs(sys.rhs[static_cast<std::size_t>(row)]);
        for (int col = 0; col < n; ++col) {
            s -= sys.a[static_cast<std::size_t>(row * n + col)] * x[static_cast<std::size_t>(col)];
            rownorm += std::abs(sys.a[static_cast<std::size_t>(row * n + col)] * x[static_cast<std::size_t>(col)]);
        }
        worst = std::max(worst, std::abs(s));
        norm = std::max(norm, rownorm);
    }
    if (worst > 1e-12 * std::max(1.0, norm))
        throw NumericError("solve_linear: back-substitution residual exceeds 1e-12");
    return x;
}

} // namespace dconn
