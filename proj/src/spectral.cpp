#include "dconn/spectral.hpp"

#include <cmath>

namespace dconn {

namespace {

double integer_distance(Cx z) {
    const double re = z.real();
    return std::hypot(re - std::round(re), z.imag());
}

} // namespace

Cx pole_x(const LegendreCurve& curve, const SpectralData& sd) {
    if (const auto* lg = std::get_if<LogSpectral>(&sd)) return lg->t;
    return std::get<IrregularSpectral>(sd).t(curve);
}

bool is_logarithmic(const SpectralData& sd) {
    return std::holds_alternative<LogSpectral>(sd);
}

GenericityReport check_genericity(const SpectralData& data) {
    GenericityReport rep;
    auto add = [&rep](std::string name, bool pass, double measure) {
        rep.rows.push_back({std::move(name), pass, measure});
        rep.all_pass = rep.all_pass && pass;
    };
    constexpr double kIntTol = 1e-8;
    if (const auto* lg = std::get_if<LogSpectral>(&data)) {
        const Cx fuchs = lg->th1p + lg->th1m + lg->th2p + lg->th2m + Cx(1.0);
        add("fuchs_sum_is_minus_one", std::abs(fuchs) <= 1e-12, std::abs(fuchs));
        const double d1 = integer_distance(lg->th1p - lg->th1m);
        add("theta1_difference_nonresonant", d1 > kIntTol, d1);
        const double d2 = integer_distance(lg->th2p - lg->th2m);
        add("theta2_difference_nonresonant", d2 > kIntTol, d2);
        const Cx th1[2] = {lg->th1p, lg->th1m};
        const Cx th2[2] = {lg->th2p, lg->th2m};
        const char* tag1[2] = {"plus", "minus"};
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                const double d = integer_distance(th1[i] + th2[j]);
                add(std::string("sign_sum_") + tag1[i] + "_" + tag1[j] + "_noninteger", d > kIntTol, d);
            }
        }
    } else {
        const auto& irr = std::get<IrregularSpectral>(data);
        const double dsep = std::abs(irr.th_m2_plus - irr.th_m2_minus);
        add("theta_m2_eigenvalues_distinct", dsep > kIntTol, dsep);
        const double dp = integer_distance(irr.th_m1_plus);
        add("theta_m1_plus_noninteger", dp > kIntTol, dp);
        const double dm = integer_distance(irr.th_m1_minus());
        add("theta_m1_minus_noninteger", dm > kIntTol, dm);
    }
    return rep;
}

void validate_spectral(const LegendreCurve& curve, const SpectralData& data) {
    const GenericityReport rep = check_genericity(data);
    if (!rep.all_pass) {
        for (const auto& row : rep.rows)
            if (!row.pass) throw InvalidData("spectral data fails genericity: " + row.condition);
    }
    if (const auto* lg = std::get_if<LogSpectral>(&data)) {
        for (Cx z : {lg->t, lg->s, lg->th1p, lg->th1m, lg->th2p, lg->th2m})
            if (!is_finite(z)) throw InvalidData("non-finite spectral value");
        if (curve.near_branch_x(lg->t))
            throw InvalidData("logarithmic pole sits at a branch point; use the irregular variant");
        const Cx Kt = curve.K_at(lg->t);
        const double scale = std::max({1.0, std::abs(Kt), std::abs(lg->s) * std::abs(lg->s)});
        if (std::abs(lg->s * lg->s - Kt) > 1e-12 * scale)
            throw InvalidData("s^2 != K(t)");
        if (std::abs(lg->s) == 0.0) throw InvalidData("s must be nonzero in the logarithmic case");
    } else {
        const auto& irr = std::get<IrregularSpectral>(data);
        for (Cx z : {irr.th_m2_plus, irr.th_m2_minus, irr.th_m1_plus})
            if (!is_finite(z)) throw InvalidData("non-finite spectral value");
    }
}

ResidueParams solve_residue_params(const LegendreCurve& curve, const SpectralData& data) {
    validate_spectral(curve, data);
    ResidueParams out;
    if (const auto* lg = std::get_if<LogSpectral>(&data)) {
        const Cx s = lg->s;
        // Eigenvalues of [[0, r12],[r21, r22]] are theta+- iff
        // r12 r21 = -theta+ theta- and r22 = theta+ + theta-.
        // At t1: r12 = (A1 + A2 s)/s, r21 = 1/s; at t2 both flip sign of s.
        LinearSystem sysA;
        sysA.n = 2;
        sysA.a = {Cx(1.0), s, Cx(1.0), -s, 0, 0, 0, 0, 0};
        sysA.rhs = {-s * s * lg->th1p * lg->th1m, -s * s * lg->th2p * lg->th2m, 0};
        const auto A = solve_linear(sysA);
        // (B1 + B2 s)/s = th1+ + th1-,  (B1 - B2 s)/(-s) = th2+ + th2-
        LinearSystem sysB;
        sysB.n = 2;
        sysB.a = {Cx(1.0), s, Cx(1.0), -s, 0, 0, 0, 0, 0};
        sysB.rhs = {s * (lg->th1p + lg->th1m), -s * (lg->th2p + lg->th2m), 0};
        const auto B = solve_linear(sysB);
        out.A1 = A[0];
        out.A2 = A[1];
        out.B1 = B[0];
        out.B2 = B[1];
    } else {
        const auto& irr = std::get<IrregularSpectral>(data);
        out.B1 = Cx(0.5) * (irr.th_m2_plus + irr.th_m2_minus);
        out.B2 = Cx(-0.5);
        out.A1 = Cx(-0.25) * irr.th_m2_plus * irr.th_m2_minus;
        out.A2 = Cx(-0.25) * (irr.th_m2_plus * irr.th_m1_minus() + irr.th_m2_minus * irr.th_m1_plus);
    }
    return out;
}

} // namespace dconn
