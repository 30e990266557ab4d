#ifndef FLUXREC_COMMON_HPP
#define FLUXREC_COMMON_HPP

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace fluxrec {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Grid is non-uniform, unsorted, or otherwise malformed.
struct InvalidGridError : Error { using Error::Error; };
/// Evaluation point lies outside a function's domain.
struct OutOfDomainError : Error { using Error::Error; };
/// Interpolant domain is not contained in the comparison domain.
struct DomainMismatchError : Error { using Error::Error; };
/// f1'(v) * f2'(u) <= 0 at some evaluated state.
struct HyperbolicityError : Error { using Error::Error; };
/// Root finder could not bracket a Hugoniot locus point.
struct NoLocusPointError : Error { using Error::Error; };
/// Requested wave-curve point violates the entropy/monotonicity condition.
struct InadmissibleBranchError : Error { using Error::Error; };
/// A wave curve or an evolution left the configured hyperbolicity rectangle.
struct DomainExitError : Error { using Error::Error; };
/// Wave curves do not intersect inside the rectangle.
struct NoSolutionError : Error { using Error::Error; };
/// Iterative solver stagnated before reaching its tolerance.
struct SolverConvergenceError : Error { using Error::Error; };
/// Wave kind flips along a branch (composite wave, out of scope).
struct KindChangeError : Error { using Error::Error; };
/// Observation carries no usable wave information for unequal nodes.
struct DegenerateObservationError : Error { using Error::Error; };
/// Internal data structures violate an invariant (library bug or bad input file).
struct InternalConsistencyError : Error { using Error::Error; };
/// A recorded-profile directory is missing a step file.
struct ObservationGapError : Error { using Error::Error; };
/// A profile or report file does not match the expected schema.
struct SchemaError : Error { using Error::Error; };
/// Mesh refinement failed to stabilize a measured quantity.
struct InconclusiveMeasurementError : Error { using Error::Error; };
/// A declared-known flux component was not reproduced by the observations.
struct ObservationInconsistencyError : Error { using Error::Error; };

/// Closed interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }
    bool contains(double x, double slack = 0.0) const {
        return x >= lo - slack && x <= hi + slack;
    }
    bool contains(const Interval& other, double slack = 0.0) const {
        return other.lo >= lo - slack && other.hi <= hi + slack;
    }
};

/// Round-trip decimal formatting (17 significant digits) for all numeric output.
inline std::string fmt_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline bool nearly_equal(double a, double b, double tol) {
    return std::fabs(a - b) <= tol;
}

}  // namespace fluxrec

#endif  // FLUXREC_COMMON_HPP
