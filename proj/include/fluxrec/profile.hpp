#ifndef FLUXREC_PROFILE_HPP
#define FLUXREC_PROFILE_HPP

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "fluxrec/riemann.hpp"

namespace fluxrec {

struct ProfileSample {
    double x = 0.0;
    State state;
};

struct ConstantSegment {
    double x_lo = 0.0;
    double x_hi = 0.0;
    State state;
};

struct FanSegment {
    std::vector<ProfileSample> samples;  // x strictly increasing

    double x_lo() const { return samples.front().x; }
    double x_hi() const { return samples.back().x; }
};

using Segment = std::variant<ConstantSegment, FanSegment>;

/// A Riemann solution materialized at one observation time: the only input the
/// inverse pipeline may read. Segments tile [x_min, x_max]; the first and last
/// segments are the constant far fields.
struct ObservedProfile {
    double T = 1.0;
    double x_min = 0.0;
    double x_max = 0.0;
    std::vector<Segment> segments;

    State left_state() const;
    State right_state() const;

    /// Throws SchemaError when the tiling/monotonicity invariants fail.
    void validate() const;

    nlohmann::json to_json() const;
    static ObservedProfile from_json(const nlohmann::json& j);
    void write_csv(std::ostream& os) const;
};

/// Materialize a solution at time T. Fans are resampled uniformly in xi with
/// `samples_per_fan` points; the domain extends `margin` beyond the outermost
/// wave positions.
ObservedProfile observe(const RiemannSolution& sol, double T, int samples_per_fan,
                        double margin);

struct DetectedWave {
    WaveKind kind = WaveKind::Shock;
    double position = 0.0;        // Shock: boundary location
    Interval interval{0.0, 0.0};  // Rarefaction: fan support
    State left;
    State right;
    int segment_index = -1;  // Fan: index into profile.segments

    double min_x() const { return kind == WaveKind::Shock ? position : interval.lo; }
    double max_x() const { return kind == WaveKind::Shock ? position : interval.hi; }
};

struct DetectedWaves {
    std::vector<DetectedWave> waves;  // ordered by position
    int shock_count = 0;
    int fan_count = 0;
    std::vector<std::string> warnings;
};

/// Read waves off the profile alone: every constant/constant boundary with a
/// state jump above `jump_tol` is a shock, every fan segment a rarefaction
/// interval. Jumps within [0.1, 10] x jump_tol attach an ambiguity warning.
DetectedWaves detect_waves(const ObservedProfile& p, double jump_tol);

/// Equivalent shock of a fan: the mass centroid of the monotone inverse
/// profile, computed from observable quantities only via the
/// integration-by-parts identity (trapezoid quadrature on the fan samples).
struct EquivalentShock {
    Interval interval{0.0, 0.0};
    double xi_u = 0.0;
    double xi_v = 0.0;
    double s_u = 0.0;  // xi_u / T
    double s_v = 0.0;  // xi_v / T
    double du = 0.0;   // jump across the fan
    double dv = 0.0;
    bool degenerate_u = false;  // zero jump: centroid placed at the midpoint
    bool degenerate_v = false;
};

EquivalentShock equivalent_shock(const ObservedProfile& p, int fan_segment_index);

struct FluxIncrements {
    double df1 = 0.0;
    double df2 = 0.0;
};

/// Accumulated flux changes across all detected discontinuities: a shock
/// contributes its observed speed times the jump to both sums, a fan its
/// equivalent-shock speeds s_u and s_v to the respective sums.
FluxIncrements nodal_flux_increments(const ObservedProfile& p, const DetectedWaves& waves);

}  // namespace fluxrec

#endif  // FLUXREC_PROFILE_HPP
