#pragma once

// Test-only oracles, independent of the library implementation paths.

#include <array>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "dconn/numeric.hpp"

namespace oracle {

// exact rational arithmetic on int64 with __int128 intermediates
struct Rat {
    long long n = 0;
    long long d = 1;

    Rat() = default;
    Rat(long long num, long long den = 1) : n(num), d(den) { normalize(); }

    void normalize() {
        if (d == 0) throw std::runtime_error("Rat: zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        const long long g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
    }

    static Rat from128(__int128 num, __int128 den) {
        if (den == 0) throw std::runtime_error("Rat: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        __int128 a = num < 0 ? -num : num, b = den;
        while (b) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            num /= a;
            den /= a;
        }
        if (num > INT64_MAX || num < INT64_MIN || den > INT64_MAX)
            throw std::runtime_error("Rat: overflow");
        Rat r;
        r.n = static_cast<long long>(num);
        r.d = static_cast<long long>(den);
        return r;
    }

    double value() const { return static_cast<double>(n) / static_cast<double>(d); }
};

inline Rat operator+(Rat a, Rat b) {
    return Rat::from128(static_cast<__int128>(a.n) * b.d + static_cast<__int128>(b.n) * a.d,
                        static_cast<__int128>(a.d) * b.d);
}
inline Rat operator-(Rat a, Rat b) {
    return Rat::from128(static_cast<__int128>(a.n) * b.d - static_cast<__int128>(b.n) * a.d,
                        static_cast<__int128>(a.d) * b.d);
}
inline Rat operator*(Rat a, Rat b) {
    return Rat::from128(static_cast<__int128>(a.n) * b.n, static_cast<__int128>(a.d) * b.d);
}
inline Rat operator/(Rat a, Rat b) {
    if (b.n == 0) throw std::runtime_error("Rat: division by zero");
    return Rat::from128(static_cast<__int128>(a.n) * b.d, static_cast<__int128>(a.d) * b.n);
}
inline bool operator==(Rat a, Rat b) { return a.n == b.n && a.d == b.d; }

// Gaussian rationals a + b i
struct GaussRat {
    Rat re, im;

    GaussRat() = default;
    GaussRat(Rat r, Rat i = Rat(0)) : re(r), im(i) {}
    GaussRat(long long r) : re(Rat(r)) {}

    dconn::Cx value() const { return dconn::Cx(re.value(), im.value()); }
};

inline GaussRat operator+(GaussRat a, GaussRat b) { return {a.re + b.re, a.im + b.im}; }
inline GaussRat operator-(GaussRat a, GaussRat b) { return {a.re - b.re, a.im - b.im}; }
inline GaussRat operator*(GaussRat a, GaussRat b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline GaussRat operator/(GaussRat a, GaussRat b) {
    const Rat nrm = b.re * b.re + b.im * b.im;
    if (nrm.n == 0) throw std::runtime_error("GaussRat: division by zero");
    const GaussRat c = a * GaussRat{b.re, Rat(0) - b.im};
    return {c.re / nrm, c.im / nrm};
}

inline GaussRat det3(const std::array<GaussRat, 9>& m) {
    return m[0] * (m[4] * m[8] - m[5] * m[7])
         - m[1] * (m[3] * m[8] - m[5] * m[6])
         + m[2] * (m[3] * m[7] - m[4] * m[6]);
}

// exact Cramer solve of a 3x3 Gaussian-rational system
inline std::array<GaussRat, 3> cramer3(const std::array<GaussRat, 9>& m,
                                       const std::array<GaussRat, 3>& rhs) {
    const GaussRat det = det3(m);
    std::array<GaussRat, 3> x;
    for (int col = 0; col < 3; ++col) {
        std::array<GaussRat, 9> t = m;
        for (int row = 0; row < 3; ++row) t[static_cast<std::size_t>(3 * row + col)] = rhs[static_cast<std::size_t>(row)];
        x[static_cast<std::size_t>(col)] = det3(t) / det;
    }
    return x;
}

// direct convolution of coefficient vectors (series product ground truth)
inline std::vector<dconn::Cx> convolve(const std::vector<dconn::Cx>& a,
                                       const std::vector<dconn::Cx>& b) {
    std::vector<dconn::Cx> c(a.size() + b.size() - 1, dconn::Cx(0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

// Newton iteration for sqrt of a Taylor series, independent of series_sqrt
inline std::vector<dconn::Cx> newton_sqrt(const std::vector<dconn::Cx>& a, dconn::Cx branch,
                                          std::size_t terms) {
    std::vector<dconn::Cx> r(terms, dconn::Cx(0.0));
    r[0] = branch;
    for (int it = 0; it < 40; ++it) {
        // r <- (r + a/r)/2, truncated
        std::vector<dconn::Cx> inv(terms, dconn::Cx(0.0));
        inv[0] = dconn::Cx(1.0) / r[0];
        for (std::size_t k = 1; k < terms; ++k) {
            dconn::Cx s(0.0);
            for (std::size_t j = 1; j <= k; ++j) s += (j < r.size() ? r[j] : dconn::Cx(0.0)) * inv[k - j];
            inv[k] = -s / r[0];
        }
        std::vector<dconn::Cx> aor(terms, dconn::Cx(0.0));
        for (std::size_t k = 0; k < terms; ++k) {
            dconn::Cx s(0.0);
            for (std::size_t j = 0; j <= k; ++j)
                s += (j < a.size() ? a[j] : dconn::Cx(0.0)) * inv[k - j];
            aor[k] = s;
        }
        for (std::size_t k = 0; k < terms; ++k) r[k] = (r[k] + aor[k]) * 0.5;
    }
    return r;
}

} // namespace oracle
