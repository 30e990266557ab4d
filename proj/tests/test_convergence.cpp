#include <cmath>

#include "doctest.h"
#include "fluxrec/convergence.hpp"

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

FluxPair kink_pair() {
    auto k = std::make_shared<AnalyticFlux>([](double x) { return x + 0.5 * x * std::fabs(x); },
                                            [](double x) { return 1.0 + std::fabs(x); },
                                            Interval{-2.0, 2.0}, 1.0);
    return FluxPair{k, k};
}

SolverConfig wide_cfg() {
    SolverConfig cfg;
    cfg.rect = Rect{{-1.8, 1.9}, {-1.8, 1.9}};
    return cfg;
}

// exact solution of the linear system via the transported fields u +/- v
State linear_exact(const PiecewiseConstantFn& init, double x, double t) {
    const State a = init.at(x - t);  // carries u + v
    const State b = init.at(x + t);  // carries u - v
    const double wp = a.u + a.v;
    const double wm = b.u - b.v;
    return {0.5 * (wp + wm), 0.5 * (wp - wm)};
}

}  // namespace

TEST_CASE("run_convergence: linear truth sits at roundoff with flagged orders") {
    GridSpec box{-0.4, 0.4, -0.4, 0.4, 0};
    auto table = run_convergence(linear_pair(), box, {3, 4}, wide_cfg(), {});
    REQUIRE(table.rows.size() == 2);
    for (const auto& r : table.rows) {
        CHECK(r.err_f1 <= 1e-10);
        CHECK(r.err_f2 <= 1e-10);
    }
    CHECK(!table.rows[1].order_f1.has_value());
    CHECK(table.csv().find("order_f1") != std::string::npos);
}

TEST_CASE("run_convergence: C11 kink rows satisfy the L eta^2 / 3 L eta bounds") {
    GridSpec box{-1.0, 1.0, -1.0, 1.0, 0};
    auto table = run_convergence(kink_pair(), box, {3, 4}, wide_cfg(), {});
    const double L = 1.0;
    for (const auto& r : table.rows) {
        CHECK(r.err_f1 <= L * r.eta * r.eta);
        CHECK(r.err_f1_deriv <= 3.0 * L * r.eta);
        CHECK(r.err_f2 <= L * r.delta * r.delta);
        CHECK(r.err_f2_deriv <= 3.0 * L * r.delta);
    }
}

TEST_CASE("run_convergence: exp errors decrease monotonically") {
    GridSpec box{0.0, 1.0, 0.0, 1.0, 0};
    auto table = run_convergence(exp_pair(), box, {3, 4, 5}, wide_cfg(), {});
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        CHECK(table.rows[i].err_f1 < table.rows[i - 1].err_f1);
        CHECK(table.rows[i].err_f2 < table.rows[i - 1].err_f2);
        CHECK(table.rows[i].order_f1.has_value());
    }
}

TEST_CASE("evolve_fv") {
    auto cfg = wide_cfg();
    SUBCASE("constant data stay constant") {
        PiecewiseConstantFn init{{}, {State{0.2, 0.1}}};
        auto sol = evolve_fv(exp_pair(), init, 0.5, {{-1.0, 1.0}, 50, 0.45}, cfg);
        for (const auto& s : sol.cell_avg) {
            CHECK(s.u == 0.2);
            CHECK(s.v == 0.1);
        }
    }
    SUBCASE("invalid cfl is rejected") {
        PiecewiseConstantFn init{{}, {State{0.0, 0.0}}};
        CHECK_THROWS_AS(evolve_fv(exp_pair(), init, 0.1, {{-1.0, 1.0}, 50, 1.5}, cfg), Error);
    }
    SUBCASE("single Riemann datum converges to the exact solution") {
        auto fp = exp_pair();
        const State l{-0.1, -0.1}, r{0.2, 0.2};
        PiecewiseConstantFn init{{0.0}, {l, r}};
        auto exact = solve_riemann(fp, l, r, cfg);
        const double T = 0.4;
        auto err_at = [&](int cells) {
            auto sol = evolve_fv(fp, init, T, {{-1.0, 1.0}, cells, 0.45}, cfg);
            double acc = 0.0;
            for (int i = 0; i < cells; ++i) {
                // subsample the exact profile per cell
                double cu = 0.0, cv = 0.0;
                const int sub = 16;
                for (int q = 0; q < sub; ++q) {
                    const double x = sol.domain.lo + (i + (q + 0.5) / sub) * sol.dx;
                    State s = sample_at_time(exact, T, x);
                    cu += s.u / sub;
                    cv += s.v / sub;
                }
                acc += (std::fabs(sol.cell_avg[i].u - cu) + std::fabs(sol.cell_avg[i].v - cv)) *
                       sol.dx;
            }
            return acc;
        };
        const double e100 = err_at(100);
        const double e200 = err_at(200);
        const double e400 = err_at(400);
        CHECK(e200 < e100);
        CHECK(e400 < e200);
        CHECK(e400 <= 0.5 * std::sqrt(2.0 / 400) + 0.02);
    }
    SUBCASE("linear fluxes transport the characteristic fields") {
        auto fp = linear_pair();
        PiecewiseConstantFn init{{-0.2, 0.3}, {State{0.1, 0.0}, State{0.3, 0.2}, State{0.0, 0.1}}};
        const double T = 0.25;
        auto err_at = [&](int cells) {
            auto sol = evolve_fv(fp, init, T, {{-1.2, 1.2}, cells, 0.45}, cfg);
            double acc = 0.0;
            for (int i = 0; i < cells; ++i) {
                double cu = 0.0, cv = 0.0;
                const int sub = 16;
                for (int q = 0; q < sub; ++q) {
                    const double x = sol.domain.lo + (i + (q + 0.5) / sub) * sol.dx;
                    State s = linear_exact(init, x, T);
                    cu += s.u / sub;
                    cv += s.v / sub;
                }
                acc += (std::fabs(sol.cell_avg[i].u - cu) + std::fabs(sol.cell_avg[i].v - cv)) *
                       sol.dx;
            }
            return acc;
        };
        const double e150 = err_at(150);
        const double e300 = err_at(300);
        const double e600 = err_at(600);
        CHECK(e300 < e150);
        CHECK(e600 < e300);
    }
}

TEST_CASE("stability_experiment: machine-precision interpolant gives near-zero distance") {
    // linear truth is reproduced exactly by the quadratic interpolant, so the
    // two evolutions run with numerically identical fluxes
    GridSpec grid{-0.4, 0.4, -0.4, 0.4, 3};
    PiecewiseConstantFn init{{0.0}, {State{-0.15, -0.15}, State{0.15, 0.15}}};
    auto res = stability_experiment(linear_pair(), 0.0, 0.0, grid, 0.4, init, wide_cfg(),
                                    {{-1.0, 1.0}, 100, 0.45}, 1600);
    CHECK(res.L1_distance <= 1e-10);
    CHECK(res.m == 3);
}
