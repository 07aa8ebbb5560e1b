#pragma once

// Shared fixed and random instances for the test suites.

#include <random>

#include "dconn/companion.hpp"

namespace testing_instances {

using namespace dconn;

// lambda = 2, t = 3, theta1 = (1/4, -1/4), theta2 = (-1/3, -2/3)
inline LegendreCurve sample_curve() { return LegendreCurve(Cx(2.0)); }

inline LogSpectral sample_log_spectral() {
    LogSpectral lg;
    lg.t = Cx(3.0);
    lg.s = std::sqrt(Cx(6.0)); // K(3) = 3*2*1
    lg.th1p = Cx(0.25);
    lg.th1m = Cx(-0.25);
    lg.th2p = Cx(-1.0 / 3.0);
    lg.th2m = Cx(-2.0 / 3.0);
    return lg;
}

inline IrregularSpectral sample_irr_spectral() {
    IrregularSpectral irr;
    irr.root = IrregularSpectral::Root::Zero;
    irr.th_m2_plus = Cx(0.5, 0.1);
    irr.th_m2_minus = Cx(-0.3, -0.05);
    irr.th_m1_plus = Cx(0.25, 0.15);
    return irr;
}

inline ApparentConfig sample_config(const LegendreCurve& curve) {
    ApparentConfig cfg;
    const Cx us[3] = {Cx(-1.0), Cx(0.5), Cx(5.0)};
    const Cx zs[3] = {Cx(0.3), Cx(-0.7), Cx(0.2)};
    for (int j = 0; j < 3; ++j) {
        const Cx u = us[j];
        const Cx v = std::sqrt(curve.K_at(u));
        cfg.pts[static_cast<std::size_t>(j)] = {u, v, zs[j]};
    }
    return cfg;
}

struct Instance {
    LegendreCurve curve;
    SpectralData spectral;
    ApparentConfig config;
};

inline Cx draw_box(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return Cx(d(rng), d(rng));
}

inline Cx draw_theta(std::mt19937_64& rng) {
    // complex with clearly nonzero imaginary part: resonance-safe
    std::uniform_real_distribution<double> re(-0.9, 0.9);
    std::uniform_real_distribution<double> im(0.15, 0.8);
    std::uniform_int_distribution<int> sign(0, 1);
    return Cx(re(rng), (sign(rng) ? 1.0 : -1.0) * im(rng));
}

// curve + pole data with healthy separations
inline LegendreCurve draw_curve(std::mt19937_64& rng) {
    for (;;) {
        const Cx lam = draw_box(rng, -2.0, 2.0);
        if (std::abs(lam) < 0.35 || std::abs(lam - Cx(1.0)) < 0.35) continue;
        return LegendreCurve(lam);
    }
}

inline LogSpectral draw_log_spectral(std::mt19937_64& rng, const LegendreCurve& curve) {
    LogSpectral lg;
    for (;;) {
        lg.t = draw_box(rng, -2.5, 2.5);
        bool ok = true;
        for (Cx b : curve.branch_x())
            if (std::abs(lg.t - b) < 0.3) ok = false;
        if (!ok) continue;
        break;
    }
    lg.s = std::sqrt(curve.K_at(lg.t));
    lg.th1p = draw_theta(rng);
    lg.th1m = draw_theta(rng);
    lg.th2p = draw_theta(rng);
    lg.th2m = Cx(-1.0) - lg.th1p - lg.th1m - lg.th2p;
    return lg;
}

inline IrregularSpectral draw_irr_spectral(std::mt19937_64& rng) {
    IrregularSpectral irr;
    std::uniform_int_distribution<int> pick(0, 2);
    const int r = pick(rng);
    irr.root = (r == 0) ? IrregularSpectral::Root::Zero
             : (r == 1) ? IrregularSpectral::Root::One
                        : IrregularSpectral::Root::Lambda;
    for (;;) {
        irr.th_m2_plus = draw_theta(rng);
        irr.th_m2_minus = draw_theta(rng);
        if (std::abs(irr.th_m2_plus - irr.th_m2_minus) > 0.25) break;
    }
    irr.th_m1_plus = draw_theta(rng);
    return irr;
}

inline ApparentConfig draw_config(std::mt19937_64& rng, const LegendreCurve& curve, Cx t,
                                  double min_sep = 0.3) {
    ApparentConfig cfg;
    std::uniform_real_distribution<double> mag(0.25, 1.2);
    std::uniform_real_distribution<double> ang(0.0, 6.283185307179586);
    for (int j = 0; j < 3; ++j) {
        for (;;) {
            const Cx u = draw_box(rng, -3.0, 3.0);
            bool ok = std::abs(u - t) > min_sep;
            for (Cx b : curve.branch_x()) ok = ok && std::abs(u - b) > min_sep;
            for (int k = 0; k < j; ++k)
                ok = ok && std::abs(u - cfg.pts[static_cast<std::size_t>(k)].u) > min_sep;
            if (!ok) continue;
            const double a = ang(rng);
            const Cx zeta = mag(rng) * Cx(std::cos(a), std::sin(a));
            cfg.pts[static_cast<std::size_t>(j)] = {u, std::sqrt(curve.K_at(u)), zeta};
            break;
        }
    }
    return cfg;
}

/// Logarithmic instance with |stability det| above det_floor (redraws the
/// zeta triple until it clears the floor).
inline Instance draw_log_instance(std::mt19937_64& rng, double det_floor = 1e-4) {
    for (;;) {
        LegendreCurve curve = draw_curve(rng);
        LogSpectral lg = draw_log_spectral(rng, curve);
        if (!check_genericity(SpectralData(lg)).all_pass) continue;
        ApparentConfig cfg = draw_config(rng, curve, lg.t);
        if (std::abs(stability_det(cfg)) <= det_floor) continue;
        return Instance{curve, lg, cfg};
    }
}

inline Instance draw_irr_instance(std::mt19937_64& rng, double det_floor = 1e-4) {
    for (;;) {
        LegendreCurve curve = draw_curve(rng);
        IrregularSpectral irr = draw_irr_spectral(rng);
        if (!check_genericity(SpectralData(irr)).all_pass) continue;
        ApparentConfig cfg = draw_config(rng, curve, irr.t(curve));
        if (std::abs(stability_det(cfg)) <= det_floor) continue;
        return Instance{curve, irr, cfg};
    }
}

} // namespace testing_instances
