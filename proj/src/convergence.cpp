#include "fluxrec/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <future>
#include <sstream>
#include <unordered_map>

namespace fluxrec {

namespace {

constexpr double kRoundoffFloor = 1e-13;

std::optional<double> order_of(double prev, double cur) {
    if (prev <= kRoundoffFloor || cur <= kRoundoffFloor) return std::nullopt;
    return std::log2(prev / cur);
}

}  // namespace

ConvergenceTable run_convergence(const FluxPair& truth, const GridSpec& box,
                                 const std::vector<int>& m_list, const SolverConfig& cfg,
                                 const ConvergenceParams& params) {
    if (m_list.empty()) throw Error("run_convergence: empty m list");
    for (std::size_t i = 0; i + 1 < m_list.size(); ++i)
        if (m_list[i] >= m_list[i + 1]) throw Error("run_convergence: m list must increase");

    auto row_for = [&](int m) {
        GridSpec grid = box;
        grid.m = m;
        std::optional<Anchors> anchors;
        if (params.known_anchors)
            anchors = Anchors{truth.f1v(grid.v_star), truth.f2v(grid.u_star)};
        auto report = reconstruct_all(truth, grid, params.T, anchors, cfg,
                                      params.samples_per_fan);
        auto e1 = linf_errors(report.f1m, *truth.f1, params.err_samples_per_interval);
        auto e2 = linf_errors(report.f2m, *truth.f2, params.err_samples_per_interval);
        ConvergenceRow row;
        row.m = m;
        row.delta = grid.delta();
        row.eta = grid.eta();
        row.err_f1 = e1.value;
        row.err_f1_deriv = e1.deriv;
        row.err_f2 = e2.value;
        row.err_f2_deriv = e2.deriv;
        return row;
    };

    std::vector<std::future<ConvergenceRow>> futures;
    futures.reserve(m_list.size());
    for (int m : m_list)
        futures.push_back(std::async(std::launch::async, row_for, m));

    ConvergenceTable table;
    for (std::size_t i = 0; i < futures.size(); ++i) {
        try {
            table.rows.push_back(futures[i].get());
        } catch (const Error& e) {
            throw Error("convergence row m = " + std::to_string(m_list[i]) + ": " + e.what());
        }
    }
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        auto& r = table.rows[i];
        const auto& p = table.rows[i - 1];
        r.order_f1 = order_of(p.err_f1, r.err_f1);
        r.order_f1_deriv = order_of(p.err_f1_deriv, r.err_f1_deriv);
        r.order_f2 = order_of(p.err_f2, r.err_f2);
        r.order_f2_deriv = order_of(p.err_f2_deriv, r.err_f2_deriv);
    }
    return table;
}

std::string ConvergenceTable::csv() const {
    std::ostringstream os;
    os << "m,delta,eta,err_f1,order_f1,err_f1_deriv,order_f1_deriv,"
          "err_f2,order_f2,err_f2_deriv,order_f2_deriv,log2_eta,log2_err_f1\n";
    auto opt = [](const std::optional<double>& v) { return v ? fmt_full(*v) : std::string(); };
    for (const auto& r : rows) {
        os << r.m << ',' << fmt_full(r.delta) << ',' << fmt_full(r.eta) << ','
           << fmt_full(r.err_f1) << ',' << opt(r.order_f1) << ',' << fmt_full(r.err_f1_deriv)
           << ',' << opt(r.order_f1_deriv) << ',' << fmt_full(r.err_f2) << ','
           << opt(r.order_f2) << ',' << fmt_full(r.err_f2_deriv) << ','
           << opt(r.order_f2_deriv) << ',' << fmt_full(std::log2(r.eta)) << ','
           << fmt_full(std::log2(std::max(r.err_f1, kRoundoffFloor))) << '\n';
    }
    return os.str();
}

State PiecewiseConstantFn::at(double x) const {
    std::size_t k = 0;
    while (k < breakpoints.size() && x >= breakpoints[k]) ++k;
    return values[k];
}

void PiecewiseConstantFn::validate() const {
    if (values.size() != breakpoints.size() + 1)
        throw Error("piecewise constant data: need breakpoints.size() + 1 values");
    for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k)
        if (!(breakpoints[k] < breakpoints[k + 1]))
            throw Error("piecewise constant data: breakpoints must increase");
}

namespace {

struct StateKey {
    std::uint64_t b[4];
    bool operator==(const StateKey& o) const { return std::memcmp(b, o.b, sizeof b) == 0; }
};

struct StateKeyHash {
    std::size_t operator()(const StateKey& k) const {
        std::size_t h = 0xcbf29ce484222325ull;
        for (auto w : k.b) {
            h ^= w;
            h *= 0x100000001b3ull;
        }
        return h;
    }
};

StateKey make_key(const State& a, const State& b) {
    StateKey k;
    std::memcpy(&k.b[0], &a.u, 8);
    std::memcpy(&k.b[1], &a.v, 8);
    std::memcpy(&k.b[2], &b.u, 8);
    std::memcpy(&k.b[3], &b.v, 8);
    return k;
}

// exact cell averages of piecewise constant data
std::vector<State> initial_averages(const PiecewiseConstantFn& fn, const Interval& domain,
                                    int cells) {
    std::vector<State> avg(cells);
    const double dx = domain.length() / cells;
    for (int i = 0; i < cells; ++i) {
        const double lo = domain.lo + i * dx;
        const double hi = domain.lo + (i + 1) * dx;
        double cu = 0.0, cv = 0.0, covered = 0.0;
        double cursor = lo;
        int pieces = 0;
        State last;
        for (std::size_t k = 0; k <= fn.breakpoints.size(); ++k) {
            const double seg_hi =
                (k < fn.breakpoints.size()) ? std::min(fn.breakpoints[k], hi) : hi;
            if (seg_hi > cursor) {
                const double w = seg_hi - cursor;
                cu += w * fn.values[k].u;
                cv += w * fn.values[k].v;
                covered += w;
                cursor = seg_hi;
                ++pieces;
                last = fn.values[k];
            }
            if (cursor >= hi) break;
        }
        // single-piece cells take the value bitwise
        avg[i] = (pieces == 1) ? last : State{cu / covered, cv / covered};
    }
    return avg;
}

}  // namespace

FvSolution evolve_fv(const FluxPair& fp, const PiecewiseConstantFn& initial, double T,
                     const FvParams& params, const SolverConfig& cfg) {
    initial.validate();
    if (!(params.cfl > 0.0 && params.cfl < 1.0)) throw Error("evolve_fv: cfl must be in (0,1)");
    if (params.cells < 2) throw Error("evolve_fv: need at least 2 cells");
    if (!(T >= 0.0)) throw Error("evolve_fv: negative horizon");

    // reduced-accuracy interface solves: cell jumps are O(dx), so a short
    // fixed-step integration is far below the scheme's first-order error
    SolverConfig fast = cfg;
    fast.ode_steps = std::min(cfg.ode_steps, 32);
    fast.richardson_check = false;

    FvSolution sol;
    sol.domain = params.domain;
    sol.dx = params.domain.length() / params.cells;
    sol.cell_avg = initial_averages(initial, params.domain, params.cells);

    for (const auto& s : sol.cell_avg)
        if (!cfg.rect.contains(s, 1e-12))
            throw DomainExitError("evolve_fv: initial data outside the hyperbolicity rectangle");

    std::unordered_map<StateKey, State, StateKeyHash> interface_cache;

    const int n = params.cells;
    std::vector<State> next(n);
    std::vector<double> flux1(n + 1), flux2(n + 1);
    double t = 0.0;
    while (t < T) {
        double lam_max = 0.0;
        for (const auto& s : sol.cell_avg) {
            try {
                lam_max = std::max(lam_max, eigenvalues(fp, s).second);
            } catch (const Error& e) {
                throw DomainExitError(std::string("evolve_fv: hyperbolicity lost: ") + e.what());
            }
        }
        if (!(lam_max > 0.0)) throw DomainExitError("evolve_fv: vanishing wave speeds");
        const double dt = std::min(params.cfl * sol.dx / lam_max, T - t);

        for (int i = 0; i <= n; ++i) {
            const State& a = sol.cell_avg[std::max(i - 1, 0)];
            const State& b = sol.cell_avg[std::min(i, n - 1)];
            State star;
            if (a == b) {
                star = a;
            } else {
                const StateKey key = make_key(a, b);
                auto it = interface_cache.find(key);
                if (it != interface_cache.end()) {
                    star = it->second;
                } else {
                    try {
                        star = sample_at_time(solve_riemann(fp, a, b, fast), 1.0, 0.0);
                    } catch (const Error& e) {
                        throw DomainExitError(
                            std::string("evolve_fv: interface Riemann solve failed: ") +
                            e.what());
                    }
                    if (interface_cache.size() > (1u << 22)) interface_cache.clear();
                    interface_cache.emplace(key, star);
                }
            }
            flux1[i] = fp.f1v(star.v);
            flux2[i] = fp.f2v(star.u);
        }
        const double r = dt / sol.dx;
        for (int i = 0; i < n; ++i) {
            next[i].u = sol.cell_avg[i].u - r * (flux1[i + 1] - flux1[i]);
            next[i].v = sol.cell_avg[i].v - r * (flux2[i + 1] - flux2[i]);
        }
        sol.cell_avg.swap(next);
        for (const auto& s : sol.cell_avg)
            if (!cfg.rect.contains(s, 1e-12))
                throw DomainExitError(
                    "evolve_fv: evolution left the hyperbolicity rectangle");
        t += dt;
    }
    return sol;
}

double l1_distance(const FvSolution& a, const FvSolution& b) {
    if (a.cell_avg.size() != b.cell_avg.size() || a.dx != b.dx)
        throw Error("l1_distance: solutions live on different meshes");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.cell_avg.size(); ++i)
        sum += std::fabs(a.cell_avg[i].u - b.cell_avg[i].u) +
               std::fabs(a.cell_avg[i].v - b.cell_avg[i].v);
    return sum * a.dx;
}

StabilityResult stability_experiment(const FluxPair& truth, double L1_const, double L2_const,
                                     const GridSpec& grid, double T,
                                     const PiecewiseConstantFn& initial, const SolverConfig& cfg,
                                     const FvParams& base_mesh, int max_cells) {
    grid.validate();
    auto report = reconstruct_all(truth, grid, T, Anchors{truth.f1v(grid.v_star),
                                                          truth.f2v(grid.u_star)},
                                  cfg);
    FluxPair recon{std::make_shared<QuadC1Interpolant>(report.f1m),
                   std::make_shared<QuadC1Interpolant>(report.f2m)};

    // evolution under the interpolants must stay inside their domain
    SolverConfig evolve_cfg = cfg;
    evolve_cfg.rect = Rect{{grid.u_star, grid.u_sup}, {grid.v_star, grid.v_sup}};

    auto distance_on = [&](int cells) {
        FvParams mesh = base_mesh;
        mesh.cells = cells;
        auto fut_truth = std::async(std::launch::async, [&] {
            return evolve_fv(truth, initial, T, mesh, evolve_cfg);
        });
        auto fut_recon = std::async(std::launch::async, [&] {
            return evolve_fv(recon, initial, T, mesh, evolve_cfg);
        });
        auto a = fut_truth.get();
        auto b = fut_recon.get();
        return l1_distance(a, b);
    };

    int cells = base_mesh.cells;
    double prev = distance_on(cells);
    for (;;) {
        const int next_cells = cells * 2;
        if (next_cells > max_cells)
            throw InconclusiveMeasurementError(
                "stability_experiment: mesh refinement did not stabilize the L1 distance below " +
                std::to_string(max_cells) + " cells");
        const double cur = distance_on(next_cells);
        const double change = std::fabs(cur - prev) / std::max(cur, 1e-300);
        cells = next_cells;
        prev = cur;
        // distances at roundoff level cannot and need not stabilize further
        if (change < 0.05 || cur < 1e-12) {
            StabilityResult out;
            out.m = grid.m;
            out.L1_distance = cur;
            out.bound_rhs = L1_const * grid.eta() + L2_const * grid.delta();
            out.empirical_C =
                out.bound_rhs > 0.0 ? out.L1_distance / (T * out.bound_rhs) : 0.0;
            out.cells_used = cells;
            out.mesh_change = change;
            return out;
        }
    }
}

}  // namespace fluxrec
