#include <cmath>

#include "doctest.h"
#include "fluxrec/reconstruct.hpp"

using namespace fluxrec;

namespace {

FluxPair linear_pair() {
    auto id = std::make_shared<AnalyticFlux>([](double x) { return x; },
                                             [](double) { return 1.0; }, Interval{-5.0, 5.0}, 0.0);
    return FluxPair{id, id};
}

FluxPair exp_pair() {
    auto e = std::make_shared<AnalyticFlux>([](double x) { return std::exp(x); },
                                            [](double x) { return std::exp(x); },
                                            Interval{-3.0, 3.0}, std::exp(3.0));
    return FluxPair{e, e};
}

SolverConfig wide_cfg() {
    SolverConfig cfg;
    cfg.rect = Rect{{-1.5, 1.9}, {-1.5, 1.9}};
    return cfg;
}

struct StepData {
    ObservedProfile profile;
    DetectedWaves waves;
    ReconstructionStep step;
};

StepData run_step(const FluxPair& fp, const State& l, const State& r, double T) {
    auto sol = solve_riemann(fp, l, r, wide_cfg());
    StepData d{observe(sol, T, 512, 0.5), {}, {}};
    d.waves = detect_waves(d.profile, 1e-8);
    d.step = reconstruct_step(d.profile, d.waves, l, r, 0.0, 0.0, 0);
    return d;
}

}  // namespace

TEST_CASE("case formulas match the general accumulation") {
    auto fp = exp_pair();
    auto cfg = wide_cfg();
    const double T = 1.0;

    auto closed_form = [&](const StepData& d, const State& l, const State& r) {
        // first/second wave speeds for the u- and v-sums
        REQUIRE(d.waves.waves.size() == 2);
        const State m = d.step.intermediate;
        double su1, sv1, su2, sv2;
        const auto& w1 = d.waves.waves[0];
        const auto& w2 = d.waves.waves[1];
        if (w1.kind == WaveKind::Shock) {
            su1 = sv1 = *d.step.speeds.s1;
        } else {
            su1 = *d.step.speeds.s_u;
            sv1 = *d.step.speeds.s_v;
        }
        if (w2.kind == WaveKind::Shock) {
            su2 = sv2 = *d.step.speeds.s2;
        } else if (w1.kind == WaveKind::Rarefaction) {
            su2 = *d.step.speeds.s_u2;
            sv2 = *d.step.speeds.s_v2;
        } else {
            su2 = *d.step.speeds.s_u;
            sv2 = *d.step.speeds.s_v;
        }
        const double f1 = su1 * (m.u - l.u) + su2 * (r.u - m.u);
        const double f2 = sv1 * (m.v - l.v) + sv2 * (r.v - m.v);
        return std::pair{f1, f2};
    };

    auto check_case = [&](const State& l, const State& r, CaseTag expect) {
        auto d = run_step(fp, l, r, T);
        CAPTURE(to_string(expect));
        REQUIRE(d.step.case_tag == expect);
        auto [f1, f2] = closed_form(d, l, r);
        CHECK(std::fabs(d.step.f1_increment - f1) <= 1e-12 * (1.0 + std::fabs(f1)));
        CHECK(std::fabs(d.step.f2_increment - f2) <= 1e-12 * (1.0 + std::fabs(f2)));
        // speeds present exactly as the case demands
        const auto& sp = d.step.speeds;
        switch (expect) {
            case CaseTag::SS:
                CHECK((sp.s1 && sp.s2 && !sp.s_u && !sp.s_v && !sp.s_u2 && !sp.s_v2));
                break;
            case CaseTag::SR:
                CHECK((sp.s1 && !sp.s2 && sp.s_u && sp.s_v && !sp.s_u2 && !sp.s_v2));
                break;
            case CaseTag::RS:
                CHECK((!sp.s1 && sp.s2 && sp.s_u && sp.s_v && !sp.s_u2 && !sp.s_v2));
                break;
            case CaseTag::RR:
                CHECK((!sp.s1 && !sp.s2 && sp.s_u && sp.s_v && sp.s_u2 && sp.s_v2));
                break;
            default: break;
        }
    };

    const State l{-0.15, 0.15};
    SUBCASE("SS") {
        auto m = shock_branch(fp, l, 1, 0.1, cfg);
        auto r = shock_branch(fp, m.to, 2, -0.12, cfg);
        check_case(l, r.to, CaseTag::SS);
    }
    SUBCASE("SR") {
        auto m = shock_branch(fp, l, 1, 0.1, cfg);
        auto r = rarefaction_branch(fp, m.to, 2, 0.15, cfg);
        check_case(l, r.to, CaseTag::SR);
    }
    SUBCASE("RS") {
        auto m = rarefaction_branch(fp, l, 1, -0.1, cfg);
        auto r = shock_branch(fp, m.to, 2, -0.12, cfg);
        check_case(l, r.to, CaseTag::RS);
    }
    SUBCASE("RR") {
        auto m = rarefaction_branch(fp, l, 1, -0.1, cfg);
        auto r = rarefaction_branch(fp, m.to, 2, 0.15, cfg);
        check_case(l, r.to, CaseTag::RR);
    }
}

TEST_CASE("pure two-shock step recovers analytic values") {
    auto fp = exp_pair();
    auto cfg = wide_cfg();
    const State l{-0.15, 0.15};
    auto m = shock_branch(fp, l, 1, 0.1, cfg);
    auto r = shock_branch(fp, m.to, 2, -0.12, cfg);
    auto d = run_step(fp, l, r.to, 1.0);
    const double f1_h1 = fp.f1v(l.v) + d.step.f1_increment;
    const double f2_h1 = fp.f2v(l.u) + d.step.f2_increment;
    CHECK(std::fabs(f1_h1 - fp.f1v(r.to.v)) <= 1e-9);
    CHECK(std::fabs(f2_h1 - fp.f2v(r.to.u)) <= 1e-9);
}

TEST_CASE("one reconstruction step at m = 3 matches the analytic fluxes") {
    auto fp = exp_pair();
    GridSpec grid{0.0, 1.0, 0.0, 1.0, 3};
    const State l = grid.node_state(2);
    const State r = grid.node_state(3);
    auto d = run_step(fp, l, r, 1.0);
    CHECK(std::fabs((fp.f1v(l.v) + d.step.f1_increment) - fp.f1v(r.v)) <= 1e-6);
    CHECK(std::fabs((fp.f2v(l.u) + d.step.f2_increment) - fp.f2v(r.u)) <= 1e-6);
}

TEST_CASE("degenerate observation with unequal nodes is an error") {
    ObservedProfile p;
    p.T = 1.0;
    p.x_min = -1.0;
    p.x_max = 1.0;
    p.segments.push_back(ConstantSegment{-1.0, 0.0, State{0.0, 0.0}});
    p.segments.push_back(ConstantSegment{0.0, 1.0, State{0.01, 0.01}});
    // a huge tolerance suppresses detection entirely
    auto waves = detect_waves(p, 100.0);
    CHECK(waves.waves.empty());
    CHECK_THROWS_AS(
        reconstruct_step(p, waves, {0.0, 0.0}, {0.01, 0.01}, 0.0, 0.0, 0),
        DegenerateObservationError);
}

TEST_CASE("reconstruct_all on linear fluxes is exact") {
    GridSpec grid{-0.4, 0.4, -0.3, 0.5, 3};
    auto report = reconstruct_all(linear_pair(), grid, 1.0, Anchors{grid.v_star, grid.u_star},
                                  wide_cfg());
    for (int a = 0; a < grid.node_count(); ++a) {
        CHECK(std::fabs(report.nodal_f1[a] - grid.v_node(a)) <= 1e-12);
        CHECK(std::fabs(report.nodal_f2[a] - grid.u_node(a)) <= 1e-12);
    }
}

TEST_CASE("reconstruct_all on the exp pair: nodal exactness at m = 4") {
    auto fp = exp_pair();
    GridSpec grid{0.0, 1.0, 0.0, 1.0, 4};
    auto report =
        reconstruct_all(fp, grid, 1.0, Anchors{fp.f1v(0.0), fp.f2v(0.0)}, wide_cfg());
    double worst = 0.0;
    for (int a = 0; a < grid.node_count(); ++a) {
        worst = std::max(worst, std::fabs(report.nodal_f1[a] - fp.f1v(grid.v_node(a))));
        worst = std::max(worst, std::fabs(report.nodal_f2[a] - fp.f2v(grid.u_node(a))));
    }
    CHECK(worst <= 1e-6);

    SUBCASE("telescoping consistency") {
        double cum1 = 0.0;
        for (int h = 0; h < grid.steps(); ++h) {
            cum1 += report.steps[h].f1_increment;
            CHECK(std::fabs((report.nodal_f1[h + 1] - report.nodal_f1[0]) - cum1) <= 1e-14 * 10);
        }
    }
    SUBCASE("diagonal data ride the symmetric pair's 2-integral curve") {
        // with f1 = f2 the diagonal u = v is itself a 2-wave curve, so each
        // step is one rarefaction and takes the general accumulation path
        for (const auto& s : report.steps) CHECK(s.case_tag == CaseTag::General);
    }
}

TEST_CASE("unknown anchors recover the fluxes up to a constant") {
    auto fp = exp_pair();
    GridSpec grid{0.0, 1.0, 0.0, 1.0, 3};
    auto known =
        reconstruct_all(fp, grid, 1.0, Anchors{fp.f1v(0.0), fp.f2v(0.0)}, wide_cfg());
    auto unknown = reconstruct_all(fp, grid, 1.0, std::nullopt, wide_cfg());
    CHECK(unknown.anchor_mode == AnchorMode::Unknown);
    CHECK(unknown.nodal_f1[0] == 0.0);

    auto shift = reference_shift_check(unknown, *fp.f1, *fp.f2);
    CHECK(shift.spread1 <= 1e-6);
    CHECK(shift.spread2 <= 1e-6);
    CHECK(shift.const1 == doctest::Approx(-fp.f1v(0.0)).epsilon(1e-6));

    SUBCASE("known anchors give near-zero offsets") {
        auto s = reference_shift_check(known, *fp.f1, *fp.f2);
        CHECK(std::fabs(s.const1) <= 1e-6);
        CHECK(std::fabs(s.const2) <= 1e-6);
    }
    SUBCASE("derivative arrays are bitwise identical across anchor modes") {
        REQUIRE(known.f1m.nodal_derivs().size() == unknown.f1m.nodal_derivs().size());
        CHECK(known.f1m.nodal_derivs() == unknown.f1m.nodal_derivs());
        CHECK(known.f2m.nodal_derivs() == unknown.f2m.nodal_derivs());
    }
    SUBCASE("shifted truth shows up as a constant offset") {
        AnalyticFlux shifted([](double x) { return std::exp(x) + 7.0; },
                             [](double x) { return std::exp(x); }, Interval{-3.0, 3.0},
                             std::exp(3.0));
        auto s = reference_shift_check(unknown, shifted, *fp.f2);
        CHECK(s.const1 == doctest::Approx(-(7.0 + fp.f1v(0.0))).epsilon(1e-6));
        CHECK(s.spread1 <= 1e-6);
    }
}

TEST_CASE("forward source demands a strictly larger rectangle") {
    GridSpec grid{0.0, 1.0, 0.0, 1.0, 3};
    SolverConfig tight;
    tight.rect = Rect{{0.0, 1.0}, {0.0, 1.0}};
    CHECK_THROWS_AS(ForwardObservationSource(exp_pair(), grid, 1.0, tight), DomainExitError);
}

TEST_CASE("step failures abort with the step index") {
    // a source that throws on step 2
    class FailingSource final : public ObservationSource {
    public:
        explicit FailingSource(const ObservationSource& inner) : inner_(inner) {}
        ObservedProfile profile_for_step(int h) const override {
            if (h == 2) throw HyperbolicityError("synthetic failure");
            return inner_.profile_for_step(h);
        }
        int step_count() const override { return inner_.step_count(); }

    private:
        const ObservationSource& inner_;
    };
    GridSpec grid{0.0, 1.0, 0.0, 1.0, 3};
    ForwardObservationSource fwd(exp_pair(), grid, 1.0, wide_cfg());
    FailingSource src(fwd);
    try {
        reconstruct_all(src, grid, 1.0, Anchors{1.0, 1.0});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("h = 2") != std::string::npos);
    }
}

TEST_CASE("report JSON carries the nodal arrays and steps") {
    GridSpec grid{0.0, 1.0, 0.0, 1.0, 3};
    auto report = reconstruct_all(exp_pair(), grid, 1.0, std::nullopt, wide_cfg());
    auto j = report.to_json();
    CHECK(j["anchor_mode"] == "unknown");
    CHECK(j["nodal_f1"].size() == 9);
    CHECK(j["steps"].size() == 8);
    CHECK(j["grid"]["m"] == 3);
}
