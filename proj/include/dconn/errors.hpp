#pragma once

#include <stdexcept>
#include <string>

namespace dconn {

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Truncation windows of two series do not overlap after an operation.
struct EmptyWindow : NumericError {
    using NumericError::NumericError;
};

// A series window ends before the order a caller asked about.
struct WindowExhausted : NumericError {
    using NumericError::NumericError;
};

// Linear system determinant below the configured threshold.  In the
// companion solver this is exactly the non-stable locus.
struct NearSingular : NumericError {
    double det_abs;
    double threshold;
    NearSingular(double d, double t)
        : NumericError("near-singular stability determinant: |det| = " + std::to_string(d) +
                       " < threshold " + std::to_string(t)),
          det_abs(d), threshold(t) {}
};

struct DegenerateCurve : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OffCurve : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GluingFailure : std::runtime_error {
    double worst_residual;
    std::string where;
    GluingFailure(double r, std::string w)
        : std::runtime_error("gluing check failed at " + w + ", residual " + std::to_string(r)),
          worst_residual(r), where(std::move(w)) {}
};

// The two independent routes to a canonical coordinate disagree.
struct DisagreementError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace dconn
