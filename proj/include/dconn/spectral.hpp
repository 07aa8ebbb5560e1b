#pragma once

#include <string>
#include <variant>
#include <vector>

#include "dconn/curve.hpp"

namespace dconn {

/// Two simple poles t1 = (t, s), t2 = (t, -s) with residue eigenvalues
/// theta_i^+/-; Fuchs relation: sum of all four equals -1.
struct LogSpectral {
    Cx t;
    Cx s;
    Cx th1p, th1m, th2p, th2m;
};

/// One unramified irregular point of order 2 sitting at a finite branch
/// point of the curve (t in {0, 1, lambda}); local coordinate y1.
struct IrregularSpectral {
    enum class Root { Zero, One, Lambda };
    Root root = Root::Zero;
    Cx th_m2_plus, th_m2_minus;
    Cx th_m1_plus;

    Cx th_m1_minus() const { return Cx(-1.0) - th_m1_plus; }
    Cx t(const LegendreCurve& c) const {
        switch (root) {
            case Root::Zero: return Cx(0.0);
            case Root::One: return Cx(1.0);
            default: return c.lambda();
        }
    }
};

using SpectralData = std::variant<LogSpectral, IrregularSpectral>;

Cx pole_x(const LegendreCurve& curve, const SpectralData& sd);
bool is_logarithmic(const SpectralData& sd);

struct GenericityReport {
    struct Row {
        std::string condition;
        bool pass;
        double measure; // distance to the violated set (integer distance etc.)
    };
    std::vector<Row> rows;
    bool all_pass = true;
};

/// Fuchs relation and non-resonance checks; report only, never throws.
GenericityReport check_genericity(const SpectralData& data);

/// Throws InvalidData when the spectral data violates its invariants
/// (includes the curve-dependent conditions s^2 = K(t), t not a root, ...).
void validate_spectral(const LegendreCurve& curve, const SpectralData& data);

/// Pole-local parameters of the companion form.
struct ResidueParams {
    Cx A1, A2, B1, B2;
};

/// Logarithmic case: the two 2x2 systems of the residue lemma, with the
/// eigenvalue-true sign (res w12 * res w21 = -theta+ theta-).
/// Irregular case: closed forms; B2 = -1/2 exactly.
ResidueParams solve_residue_params(const LegendreCurve& curve, const SpectralData& data);

} // namespace dconn
