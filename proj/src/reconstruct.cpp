#include "fluxrec/reconstruct.hpp"

#include <algorithm>
#include <cmath>

namespace fluxrec {

const char* to_string(CaseTag tag) {
    switch (tag) {
        case CaseTag::SS: return "SS";
        case CaseTag::SR: return "SR";
        case CaseTag::RS: return "RS";
        case CaseTag::RR: return "RR";
        case CaseTag::General: return "General";
    }
    return "?";
}

ForwardObservationSource::ForwardObservationSource(FluxPair fp, GridSpec grid, double T,
                                                   SolverConfig cfg, int samples_per_fan,
                                                   double margin)
    : fp_(std::move(fp)),
      grid_(grid),
      T_(T),
      cfg_(cfg),
      samples_per_fan_(samples_per_fan),
      margin_(margin) {
    grid_.validate();
    if (!(T_ > 0.0)) throw Error("observation time must be positive");
    // Intermediate states can leave the grid box, so the hyperbolicity
    // rectangle must be strictly larger than it.
    if (!(cfg_.rect.u.lo < grid_.u_star && cfg_.rect.u.hi > grid_.u_sup &&
          cfg_.rect.v.lo < grid_.v_star && cfg_.rect.v.hi > grid_.v_sup))
        throw DomainExitError(
            "hyperbolicity rectangle must strictly contain the reconstruction grid box");
}

ObservedProfile ForwardObservationSource::profile_for_step(int h) const {
    const RiemannSolution sol =
        solve_riemann(fp_, grid_.node_state(h), grid_.node_state(h + 1), cfg_);
    return observe(sol, T_, samples_per_fan_, margin_);
}

namespace {

double node_scale(const State& a, const State& b) {
    return 1.0 + std::max(std::max(std::fabs(a.u), std::fabs(a.v)),
                          std::max(std::fabs(b.u), std::fabs(b.v)));
}

}  // namespace

ReconstructionStep reconstruct_step(const ObservedProfile& p, const DetectedWaves& waves,
                                    const State& left_node, const State& right_node, double f1_h,
                                    double f2_h, int h) {
    const double scale = node_scale(left_node, right_node);
    const double far_tol = 1e-7 * scale;
    const State far_l = p.left_state();
    const State far_r = p.right_state();
    if (std::fabs(far_l.u - left_node.u) > far_tol || std::fabs(far_l.v - left_node.v) > far_tol ||
        std::fabs(far_r.u - right_node.u) > far_tol ||
        std::fabs(far_r.v - right_node.v) > far_tol)
        throw InternalConsistencyError("step " + std::to_string(h) +
                                       ": observed far fields do not match the Riemann datum");

    ReconstructionStep step;
    step.h = h;

    if (waves.waves.empty()) {
        const bool nodes_equal = std::fabs(left_node.u - right_node.u) <= far_tol &&
                                 std::fabs(left_node.v - right_node.v) <= far_tol;
        if (!nodes_equal)
            throw DegenerateObservationError(
                "step " + std::to_string(h) +
                ": no detectable waves although the datum states differ");
        step.case_tag = CaseTag::General;
        step.intermediate = left_node;
        step.f1_value = f1_h;
        step.f2_value = f2_h;
        return step;
    }

    // intermediate state re-detected from the profile alone
    if (waves.waves.size() == 2) {
        step.intermediate = waves.waves[0].right;
        const WaveKind k1 = waves.waves[0].kind;
        const WaveKind k2 = waves.waves[1].kind;
        if (k1 == WaveKind::Shock)
            step.case_tag = (k2 == WaveKind::Shock) ? CaseTag::SS : CaseTag::SR;
        else
            step.case_tag = (k2 == WaveKind::Shock) ? CaseTag::RS : CaseTag::RR;
    } else {
        step.case_tag = CaseTag::General;
        if (waves.waves.size() == 1) {
            // the wave family follows from the sign of its position: 1-waves
            // travel left, 2-waves right
            const auto& w = waves.waves[0];
            const double pos = w.kind == WaveKind::Shock ? w.position : w.interval.midpoint();
            step.intermediate = (pos < 0.0) ? w.right : w.left;
        } else {
            step.intermediate = waves.waves[0].right;
        }
    }

    // measured speeds, recorded as the case demands
    int fan_seen = 0;
    for (std::size_t i = 0; i < waves.waves.size(); ++i) {
        const auto& w = waves.waves[i];
        if (w.kind == WaveKind::Shock) {
            (i == 0 ? step.speeds.s1 : step.speeds.s2) = w.position / p.T;
        } else {
            const EquivalentShock es = equivalent_shock(p, w.segment_index);
            if (fan_seen == 0) {
                step.speeds.s_u = es.s_u;
                step.speeds.s_v = es.s_v;
            } else {
                step.speeds.s_u2 = es.s_u;
                step.speeds.s_v2 = es.s_v;
            }
            ++fan_seen;
        }
    }

    const FluxIncrements inc = nodal_flux_increments(p, waves);
    step.f1_increment = inc.df1;
    step.f2_increment = inc.df2;
    step.f1_value = f1_h + inc.df1;
    step.f2_value = f2_h + inc.df2;
    return step;
}

ReconstructionReport reconstruct_all(const ObservationSource& source, const GridSpec& grid,
                                     double T, std::optional<Anchors> anchors) {
    grid.validate();
    if (!(T > 0.0)) throw Error("reconstruct_all: T must be positive");
    if (source.step_count() != grid.steps())
        throw InternalConsistencyError("reconstruct_all: observation source provides " +
                                       std::to_string(source.step_count()) + " steps, grid needs " +
                                       std::to_string(grid.steps()));

    const int n = grid.steps();
    const double c1 = anchors ? anchors->c1 : 0.0;
    const double c2 = anchors ? anchors->c2 : 0.0;

    std::vector<double> inc1(n), inc2(n);
    std::vector<ReconstructionStep> steps;
    steps.reserve(n);
    double cum1 = 0.0, cum2 = 0.0;
    for (int h = 0; h < n; ++h) {
        const State ln = grid.node_state(h);
        const State rn = grid.node_state(h + 1);
        try {
            const ObservedProfile p = source.profile_for_step(h);
            const double jump_tol = 1e-8 * node_scale(ln, rn);
            const DetectedWaves waves = detect_waves(p, jump_tol);
            ReconstructionStep step =
                reconstruct_step(p, waves, ln, rn, c1 + cum1, c2 + cum2, h);
            inc1[h] = step.f1_increment;
            inc2[h] = step.f2_increment;
            cum1 += step.f1_increment;
            cum2 += step.f2_increment;
            steps.push_back(std::move(step));
        } catch (const Error& e) {
            throw Error("reconstruction aborted at step h = " + std::to_string(h) + ": " +
                        e.what());
        }
    }

    ReconstructionReport report{
        grid,
        anchors ? AnchorMode::Known : AnchorMode::Unknown,
        c1,
        c2,
        {},
        {},
        std::move(steps),
        QuadC1Interpolant::from_increments({grid.v_star, grid.v_sup}, inc1, c1),
        QuadC1Interpolant::from_increments({grid.u_star, grid.u_sup}, inc2, c2)};
    report.nodal_f1 = report.f1m.grid().values();
    report.nodal_f2 = report.f2m.grid().values();
    return report;
}

ReconstructionReport reconstruct_all(const FluxPair& truth, const GridSpec& grid, double T,
                                     std::optional<Anchors> anchors, const SolverConfig& cfg,
                                     int samples_per_fan) {
    ForwardObservationSource source(truth, grid, T, cfg, samples_per_fan);
    return reconstruct_all(source, grid, T, anchors);
}

ShiftCheck reference_shift_check(const ReconstructionReport& report, const ScalarFlux& truth_f1,
                                 const ScalarFlux& truth_f2) {
    ShiftCheck out;
    const int n = report.grid.node_count();
    std::vector<double> o1(n), o2(n);
    for (int a = 0; a < n; ++a) {
        o1[a] = report.nodal_f1[a] - truth_f1.value(report.grid.v_node(a));
        o2[a] = report.nodal_f2[a] - truth_f2.value(report.grid.u_node(a));
        out.const1 += o1[a] / n;
        out.const2 += o2[a] / n;
    }
    for (int a = 0; a < n; ++a) {
        out.spread1 = std::max(out.spread1, std::fabs(o1[a] - out.const1));
        out.spread2 = std::max(out.spread2, std::fabs(o2[a] - out.const2));
    }
    return out;
}

nlohmann::json ReconstructionReport::to_json() const {
    nlohmann::json jsteps = nlohmann::json::array();
    for (const auto& s : steps) {
        nlohmann::json speeds;
        auto put = [&speeds](const char* key, const std::optional<double>& v) {
            if (v) speeds[key] = *v;
        };
        put("s1", s.speeds.s1);
        put("s2", s.speeds.s2);
        put("s_u", s.speeds.s_u);
        put("s_v", s.speeds.s_v);
        put("s_u_tilde", s.speeds.s_u2);
        put("s_v_tilde", s.speeds.s_v2);
        jsteps.push_back({{"h", s.h},
                          {"case", to_string(s.case_tag)},
                          {"intermediate", fluxrec::to_json(s.intermediate)},
                          {"speeds", std::move(speeds)},
                          {"f1_increment", s.f1_increment},
                          {"f2_increment", s.f2_increment},
                          {"f1_value", s.f1_value},
                          {"f2_value", s.f2_value}});
    }
    return nlohmann::json{
        {"grid",
         {{"u_star", grid.u_star},
          {"u_sup", grid.u_sup},
          {"v_star", grid.v_star},
          {"v_sup", grid.v_sup},
          {"m", grid.m},
          {"delta", grid.delta()},
          {"eta", grid.eta()}}},
        {"anchor_mode", anchor_mode == AnchorMode::Known ? "known" : "unknown"},
        {"c1", c1},
        {"c2", c2},
        {"nodal_f1", nodal_f1},
        {"nodal_f2", nodal_f2},
        {"steps", std::move(jsteps)},
        {"f1m", f1m.to_json()},
        {"f2m", f2m.to_json()}};
}

}  // namespace fluxrec
