#ifndef FLUXREC_RIEMANN_HPP
#define FLUXREC_RIEMANN_HPP

#include <utility>
#include <vector>

#include "fluxrec/flux.hpp"

namespace fluxrec {

/// A point in the (u, v) state plane.
struct State {
    double u = 0.0;
    double v = 0.0;

    friend bool operator==(const State& a, const State& b) { return a.u == b.u && a.v == b.v; }
};

/// Hyperbolicity rectangle [u_lo, u_hi] x [v_lo, v_hi].
struct Rect {
    Interval u;
    Interval v;

    bool contains(const State& s, double slack = 0.0) const {
        return u.contains(s.u, slack) && v.contains(s.v, slack);
    }
};

enum class WaveKind { Shock, Rarefaction };

/// One sample of a rarefaction fan: state and its self-similar coordinate
/// xi = lambda_family(state).
struct FanSample {
    double xi = 0.0;
    State state;
};

/// A single wave of a Riemann solution. Shocks carry a speed; rarefactions
/// carry the xi span and an ordered sample list along the integral curve.
struct Wave {
    WaveKind kind = WaveKind::Shock;
    int family = 1;       // 1 or 2
    State left;
    State right;
    double shock_speed = 0.0;     // Shock only
    Interval xi_span{0.0, 0.0};   // Rarefaction only
    std::vector<FanSample> fan;   // Rarefaction only

    double min_speed() const { return kind == WaveKind::Shock ? shock_speed : xi_span.lo; }
    double max_speed() const { return kind == WaveKind::Shock ? shock_speed : xi_span.hi; }
};

struct RiemannSolution {
    State left;
    State middle;
    State right;
    std::vector<Wave> waves;  // ordered by speed, at most one per family
    FluxPair flux_pair;
};

/// Wave-pattern regions of the state plane relative to the left state:
/// I = (S,S), II = (S,R), III = (R,R), IV = (R,S).
enum class RegionTag { I, II, III, IV };

/// Solver-level configuration. All evaluated states are checked against
/// `rect`; `ode_steps` is the fixed RK4 substep count for a rarefaction
/// integral curve, with one step-halving Richardson check when
/// `richardson_check` is set.
struct SolverConfig {
    Rect rect;
    double tol = 1e-10;
    int ode_steps = 256;
    bool richardson_check = true;
    double zero_strength_tol = 1e-12;
    int max_iterations = 80;
};

/// Characteristic speeds lambda_{1,2} = -/+ sqrt(f1'(v) f2'(u)).
/// Throws HyperbolicityError when the product is not positive.
std::pair<double, double> eigenvalues(const FluxPair& fp, const State& s);

struct ShockPoint {
    State to;
    double speed = 0.0;
};

/// Point on the admissible shock half of the Hugoniot locus through `from`.
/// `strength` is the u-jump for family 1 and the v-jump for family 2.
ShockPoint shock_branch(const FluxPair& fp, const State& from, int family, double strength,
                        const SolverConfig& cfg);

struct RarefactionPoint {
    State to;
    std::vector<FanSample> fan;  // ordered by increasing xi; empty when degenerate
};

/// Point on the rarefaction integral curve through `from` at parameter
/// `strength` (u-jump for family 1, v-jump for family 2). The characteristic
/// speed must be monotone along the path; either traversal direction is
/// accepted and the fan is returned in wave order (increasing xi).
RarefactionPoint rarefaction_branch(const FluxPair& fp, const State& from, int family,
                                    double strength, const SolverConfig& cfg);

/// Exact solution of the Riemann problem (left | right): middle state on the
/// admissible 1-wave curve from `left`, with `right` on the admissible 2-wave
/// curve from the middle state.
RiemannSolution solve_riemann(const FluxPair& fp, const State& left, const State& right,
                              const SolverConfig& cfg);

/// Wave-pattern region of `right` relative to `left`. Zero-strength waves
/// count as rarefactions, so the degenerate left == right case maps to III.
RegionTag classify_region(const FluxPair& fp, const State& left, const State& right,
                          const SolverConfig& cfg);

/// Solution value at position x and time T > 0. Constant states are returned
/// bitwise; inside a fan the state with lambda_family(state) = x/T is found by
/// monotone inversion of the fan samples.
State sample_at_time(const RiemannSolution& sol, double T, double x);

/// State inside a rarefaction fan at self-similar coordinate xi, by monotone
/// inversion of the stored fan samples. Endpoints are returned bitwise.
State fan_state_at_xi(const FluxPair& fp, const Wave& w, double xi);

nlohmann::json to_json(const State& s);
nlohmann::json to_json(const Wave& w);
nlohmann::json to_json(const RiemannSolution& sol);

}  // namespace fluxrec

#endif  // FLUXREC_RIEMANN_HPP
