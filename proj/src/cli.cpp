#include "fluxrec/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace fluxrec {

namespace fs = std::filesystem;

namespace {

struct ConfigError : Error {
    std::string field;
    ConfigError(std::string field_, const std::string& msg) : Error(msg), field(std::move(field_)) {}
};

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    os << content;
}

std::string step_filename(int h) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "step_%05d.json", h);
    return buf;
}

GridSpec grid_from(const RunConfig& cfg, const CatalogEntry& entry) {
    GridSpec grid = entry.default_box;
    grid.m = cfg.m;
    if (cfg.rect) {
        grid.u_star = (*cfg.rect)[0];
        grid.u_sup = (*cfg.rect)[1];
        grid.v_star = (*cfg.rect)[2];
        grid.v_sup = (*cfg.rect)[3];
    }
    if (!(grid.u_star < grid.u_sup))
        throw ConfigError("rect", "rect: u_star must be below u_sup");
    if (!(grid.v_star < grid.v_sup))
        throw ConfigError("rect", "rect: v_star must be below v_sup");
    const Rect& r = entry.solver_rect;
    if (!(r.u.lo < grid.u_star && r.u.hi > grid.u_sup && r.v.lo < grid.v_star &&
          r.v.hi > grid.v_sup))
        throw ConfigError("rect", "rect: grid box must lie strictly inside the catalog "
                                  "entry's hyperbolicity rectangle");
    return grid;
}

SolverConfig solver_from(const RunConfig& cfg, const CatalogEntry& entry) {
    if (!(cfg.T > 0.0)) throw ConfigError("T", "T must be positive");
    if (!(cfg.tol > 0.0)) throw ConfigError("tol", "tol must be positive");
    if (cfg.samples_per_fan < 2)
        throw ConfigError("samples-per-fan", "samples-per-fan must be at least 2");
    SolverConfig sc;
    sc.rect = entry.solver_rect;
    sc.tol = cfg.tol;
    return sc;
}

std::optional<Anchors> anchors_from(const RunConfig& cfg, const GridSpec& grid,
                                    const FluxPair* truth) {
    if (cfg.anchors == "unknown") return std::nullopt;
    if (cfg.anchors == "known") {
        if (!truth)
            throw ConfigError("anchors",
                              "anchors=known needs a named catalog flux; recorded-profile "
                              "reconstructions must pass explicit values c1,c2 or 'unknown'");
        return Anchors{truth->f1v(grid.v_star), truth->f2v(grid.u_star)};
    }
    double c1 = 0.0, c2 = 0.0;
    if (std::sscanf(cfg.anchors.c_str(), "%lf,%lf", &c1, &c2) != 2)
        throw ConfigError("anchors", "anchors must be 'known', 'unknown', or 'c1,c2'");
    return Anchors{c1, c2};
}

State state_from(const std::optional<std::pair<double, double>>& p, const char* field) {
    if (!p) throw ConfigError(field, std::string(field) + " is required (format: u,v)");
    return State{p->first, p->second};
}

double unit_double(std::mt19937_64& rng) { return std::ldexp(static_cast<double>(rng()), -64); }

// ---------------------------------------------------------------------------
// subcommands

int cmd_solve_riemann(const RunConfig& cfg, const fs::path& out) {
    const CatalogEntry& entry = catalog_entry(cfg.flux);
    const SolverConfig sc = solver_from(cfg, entry);

    if (cfg.sweep > 0) {
        const GridSpec box = grid_from(cfg, entry);
        std::mt19937_64 rng(cfg.seed);
        auto unif = [&](double lo, double hi) { return lo + (hi - lo) * unit_double(rng); };
        const double jump_u = 0.25 * (box.u_sup - box.u_star);
        const double jump_v = 0.25 * (box.v_sup - box.v_star);
        nlohmann::json problems = nlohmann::json::array();
        int solved = 0, rejected = 0;
        for (int k = 0; k < cfg.sweep; ++k) {
            State l{unif(box.u_star, box.u_sup), unif(box.v_star, box.v_sup)};
            State r{std::clamp(l.u + unif(-jump_u, jump_u), box.u_star, box.u_sup),
                    std::clamp(l.v + unif(-jump_v, jump_v), box.v_star, box.v_sup)};
            nlohmann::json rec{{"left", to_json(l)}, {"right", to_json(r)}};
            try {
                auto sol = solve_riemann(entry.pair, l, r, sc);
                double max_res = 0.0;
                nlohmann::json kinds = nlohmann::json::array();
                for (const auto& w : sol.waves) {
                    kinds.push_back(w.kind == WaveKind::Shock ? "shock" : "rarefaction");
                    if (w.kind == WaveKind::Shock) {
                        const double du = w.right.u - w.left.u;
                        const double dv = w.right.v - w.left.v;
                        max_res = std::max(
                            max_res,
                            std::max(std::fabs(entry.pair.f1v(w.right.v) -
                                               entry.pair.f1v(w.left.v) - w.shock_speed * du),
                                     std::fabs(entry.pair.f2v(w.right.u) -
                                               entry.pair.f2v(w.left.u) - w.shock_speed * dv)));
                    }
                }
                rec["middle"] = to_json(sol.middle);
                rec["wave_kinds"] = std::move(kinds);
                rec["max_rh_residual"] = max_res;
                ++solved;
            } catch (const KindChangeError&) {
                rec["rejected"] = "composite-wave configuration (out of solver scope)";
                ++rejected;
            }
            problems.push_back(std::move(rec));
        }
        nlohmann::json j{{"flux", cfg.flux},
                         {"seed", cfg.seed},
                         {"solved", solved},
                         {"rejected", rejected},
                         {"problems", std::move(problems)}};
        write_file(out / "sweep.json", j.dump(2) + "\n");
        return 0;
    }

    const State l = state_from(cfg.left, "left");
    const State r = state_from(cfg.right, "right");
    auto sol = solve_riemann(entry.pair, l, r, sc);
    nlohmann::json j{{"flux", cfg.flux}, {"T", cfg.T}, {"tol", cfg.tol},
                     {"solution", to_json(sol)}};
    write_file(out / "solution.json", j.dump(2) + "\n");
    return 0;
}

nlohmann::json manifest_json(const RunConfig& cfg, const GridSpec& grid) {
    return nlohmann::json{{"flux", cfg.flux},
                          {"u_star", grid.u_star},
                          {"u_sup", grid.u_sup},
                          {"v_star", grid.v_star},
                          {"v_sup", grid.v_sup},
                          {"m", grid.m},
                          {"T", cfg.T},
                          {"samples_per_fan", cfg.samples_per_fan}};
}

int cmd_observe(const RunConfig& cfg, const fs::path& out) {
    const CatalogEntry& entry = catalog_entry(cfg.flux);
    const SolverConfig sc = solver_from(cfg, entry);

    if (cfg.all_steps) {
        const GridSpec grid = grid_from(cfg, entry);
        ForwardObservationSource source(entry.pair, grid, cfg.T, sc, cfg.samples_per_fan,
                                        cfg.margin);
        for (int h = 0; h < grid.steps(); ++h) {
            auto p = source.profile_for_step(h);
            write_file(out / step_filename(h), p.to_json().dump(2) + "\n");
            std::ostringstream csv;
            p.write_csv(csv);
            auto csv_name = step_filename(h);
            csv_name.replace(csv_name.size() - 4, 4, "csv");
            write_file(out / csv_name, csv.str());
        }
        write_file(out / "manifest.json", manifest_json(cfg, grid).dump(2) + "\n");
        return 0;
    }

    const State l = state_from(cfg.left, "left");
    const State r = state_from(cfg.right, "right");
    auto sol = solve_riemann(entry.pair, l, r, sc);
    auto p = observe(sol, cfg.T, cfg.samples_per_fan, cfg.margin);
    write_file(out / "profile.json", p.to_json().dump(2) + "\n");
    std::ostringstream csv;
    p.write_csv(csv);
    write_file(out / "profile.csv", csv.str());
    return 0;
}

void write_report_artifacts(const ReconstructionReport& report, const fs::path& out) {
    write_file(out / "report.json", report.to_json().dump(2) + "\n");
    std::ostringstream csv;
    csv << "alpha,v_node,f1,u_node,f2\n";
    for (int a = 0; a < report.grid.node_count(); ++a)
        csv << a << ',' << fmt_full(report.grid.v_node(a)) << ','
            << fmt_full(report.nodal_f1[a]) << ',' << fmt_full(report.grid.u_node(a)) << ','
            << fmt_full(report.nodal_f2[a]) << '\n';
    write_file(out / "nodal.csv", csv.str());
}

int cmd_reconstruct(const RunConfig& cfg, const fs::path& out) {
    if (fs::is_directory(cfg.flux)) {
        auto source = load_profiles(cfg.flux);
        GridSpec grid;
        double T = cfg.T;
        if (source->manifest()) {
            const auto& man = *source->manifest();
            grid = GridSpec{man.at("u_star").get<double>(), man.at("u_sup").get<double>(),
                            man.at("v_star").get<double>(), man.at("v_sup").get<double>(),
                            man.at("m").get<int>()};
            T = man.at("T").get<double>();
        } else {
            const CatalogEntry& entry = catalog_entry("exp-pair");
            grid = grid_from(cfg, entry);
        }
        auto anchors = anchors_from(cfg, grid, nullptr);
        auto report = reconstruct_all(*source, grid, T, anchors);
        write_report_artifacts(report, out);
        return 0;
    }
    const CatalogEntry& entry = catalog_entry(cfg.flux);
    const SolverConfig sc = solver_from(cfg, entry);
    const GridSpec grid = grid_from(cfg, entry);
    auto anchors = anchors_from(cfg, grid, &entry.pair);
    auto report = reconstruct_all(entry.pair, grid, cfg.T, anchors, sc, cfg.samples_per_fan);
    write_report_artifacts(report, out);
    return 0;
}

int cmd_convergence(const RunConfig& cfg, const fs::path& out) {
    const CatalogEntry& entry = catalog_entry(cfg.flux);
    const SolverConfig sc = solver_from(cfg, entry);
    GridSpec box = grid_from(cfg, entry);
    if (cfg.m_min > cfg.m_max) throw ConfigError("m-min", "m-min must not exceed m-max");
    std::vector<int> ms;
    for (int m = cfg.m_min; m <= cfg.m_max; ++m) ms.push_back(m);
    ConvergenceParams params;
    params.T = cfg.T;
    params.samples_per_fan = cfg.samples_per_fan;
    auto table = run_convergence(entry.pair, box, ms, sc, params);
    write_file(out / "convergence.csv", table.csv());
    return 0;
}

int cmd_stability(const RunConfig& cfg, const fs::path& out) {
    const CatalogEntry& entry = catalog_entry(cfg.flux);
    const SolverConfig sc = solver_from(cfg, entry);
    GridSpec box = grid_from(cfg, entry);
    if (!(cfg.cfl > 0.0 && cfg.cfl < 1.0)) throw ConfigError("cfl", "cfl must be in (0,1)");
    if (cfg.cells < 2) throw ConfigError("cells", "cells must be at least 2");

    // step data on the box diagonal, clear of the box edges
    auto diag_state = [&](double t) {
        return State{box.u_star + t * (box.u_sup - box.u_star),
                     box.v_star + t * (box.v_sup - box.v_star)};
    };
    PiecewiseConstantFn initial{{0.0}, {diag_state(0.35), diag_state(0.65)}};
    const double lam_bound =
        std::max(eigenvalues(entry.pair, initial.values[0]).second,
                 eigenvalues(entry.pair, initial.values[1]).second) *
        1.5;
    FvParams mesh;
    mesh.domain = {-(lam_bound * cfg.T + 0.2), lam_bound * cfg.T + 0.2};
    mesh.cells = cfg.cells;
    mesh.cfl = cfg.cfl;

    const double L1 = entry.lipschitz_f1d({box.v_star, box.v_sup});
    const double L2 = entry.lipschitz_f2d({box.u_star, box.u_sup});

    nlohmann::json rows = nlohmann::json::array();
    double prev_distance = 0.0;
    for (int m = cfg.m_min; m <= cfg.m_max; ++m) {
        GridSpec grid = box;
        grid.m = m;
        auto res = stability_experiment(entry.pair, L1, L2, grid, cfg.T, initial, sc, mesh);
        nlohmann::json row{{"m", res.m},
                           {"L1_distance", res.L1_distance},
                           {"bound_rhs", res.bound_rhs},
                           {"empirical_C", res.empirical_C},
                           {"cells", res.cells_used},
                           {"mesh_change", res.mesh_change}};
        if (m > cfg.m_min && res.L1_distance > 0.0)
            row["distance_ratio_vs_prev"] = prev_distance / res.L1_distance;
        prev_distance = res.L1_distance;
        rows.push_back(std::move(row));
    }
    nlohmann::json j{{"flux", cfg.flux}, {"T", cfg.T}, {"initial", "diagonal-step-0.35-0.65"},
                     {"rows", std::move(rows)}};
    write_file(out / "stability.json", j.dump(2) + "\n");
    return 0;
}

int cmd_euler_demo(const RunConfig& cfg, const fs::path& out) {
    if (!(cfg.gamma > 0.0)) throw ConfigError("gamma", "gamma must be positive");
    if (!(cfg.kappa > 0.0)) throw ConfigError("kappa", "kappa must be positive");
    if (!(cfg.v_range.first > 0.0 && cfg.v_range.first < cfg.v_range.second))
        throw ConfigError("v-range", "v-range must satisfy 0 < lo < hi");
    auto law = PressureLaw::gamma_law(cfg.gamma, cfg.kappa,
                                      {cfg.v_range.first, cfg.v_range.second});
    const Interval u_range{-0.5, 0.5};

    std::ostringstream csv;
    csv << "m,spacing,err_p,order_p,err_p_deriv,order_p_deriv,f2_residual,bound_Lp_spacing2\n";
    AnalyticFlux truth(law.p, law.p_deriv,
                       {cfg.v_range.first * 0.9, cfg.v_range.second * 1.1},
                       law.lipschitz_p_deriv);
    double prev_err = 0.0, prev_derr = 0.0;
    std::optional<PressureRecovery> last;
    const int top = std::max(cfg.m, cfg.m_min);
    for (int m = cfg.m_min; m <= top; ++m) {
        auto rec = recover_pressure(law, u_range, m, cfg.T, cfg.anchors != "unknown",
                                    cfg.samples_per_fan);
        auto err = linf_errors(rec.p_m, truth, 500);
        const double spacing = rec.report.grid.eta();
        csv << m << ',' << fmt_full(spacing) << ',' << fmt_full(err.value) << ','
            << (m > cfg.m_min ? fmt_full(std::log2(prev_err / err.value)) : std::string())
            << ',' << fmt_full(err.deriv) << ','
            << (m > cfg.m_min ? fmt_full(std::log2(prev_derr / err.deriv)) : std::string())
            << ',' << fmt_full(rec.f2_max_residual) << ','
            << fmt_full(law.lipschitz_p_deriv * spacing * spacing) << '\n';
        prev_err = err.value;
        prev_derr = err.deriv;
        last.emplace(std::move(rec));
    }
    write_file(out / "pressure_convergence.csv", csv.str());
    nlohmann::json j{{"gamma", cfg.gamma},
                     {"kappa", cfg.kappa},
                     {"v_range", {cfg.v_range.first, cfg.v_range.second}},
                     {"m", top},
                     {"p_m", last->p_m.to_json()},
                     {"report", last->report.to_json()}};
    write_file(out / "recovered_law.json", j.dump(2) + "\n");
    return 0;
}

}  // namespace

DirectoryObservationSource::DirectoryObservationSource(std::string dir) : dir_(std::move(dir)) {
    if (!fs::is_directory(dir_)) throw ObservationGapError("profile directory not found: " + dir_);
    std::vector<bool> seen;
    for (const auto& e : fs::directory_iterator(dir_)) {
        const std::string name = e.path().filename().string();
        int h = -1;
        if (std::sscanf(name.c_str(), "step_%d.json", &h) == 1 && h >= 0 &&
            name == step_filename(h)) {
            if (static_cast<int>(seen.size()) <= h) seen.resize(h + 1, false);
            seen[h] = true;
        }
    }
    if (seen.empty())
        throw ObservationGapError("profile directory has no step files: missing h = 0");
    for (std::size_t h = 0; h < seen.size(); ++h)
        if (!seen[h])
            throw ObservationGapError("profile directory is missing the step file for h = " +
                                      std::to_string(h));
    steps_ = static_cast<int>(seen.size());
    const fs::path man = fs::path(dir_) / "manifest.json";
    if (fs::exists(man)) {
        std::ifstream is(man);
        try {
            manifest_ = nlohmann::json::parse(is);
        } catch (const nlohmann::json::exception& e) {
            throw SchemaError("manifest.json: " + std::string(e.what()));
        }
    }
}

ObservedProfile DirectoryObservationSource::profile_for_step(int h) const {
    if (h < 0 || h >= steps_)
        throw ObservationGapError("profile directory is missing the step file for h = " +
                                  std::to_string(h));
    std::ifstream is(fs::path(dir_) / step_filename(h));
    if (!is)
        throw ObservationGapError("profile directory is missing the step file for h = " +
                                  std::to_string(h));
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("step file h = " + std::to_string(h) + ": " + e.what());
    }
    return ObservedProfile::from_json(j);
}

std::unique_ptr<DirectoryObservationSource> load_profiles(const std::string& dir) {
    return std::make_unique<DirectoryObservationSource>(dir);
}

int run(const RunConfig& config) {
    const fs::path out(config.out_dir);
    auto emit_error = [&](const std::string& kind, const std::string& message,
                          const std::string& field) {
        nlohmann::json j{{"error", {{"kind", kind}, {"message", message}}}};
        if (!field.empty()) j["error"]["field"] = field;
        std::cout << j.dump(2) << std::endl;
        std::error_code ec;
        fs::create_directories(out, ec);
        if (!ec) {
            std::ofstream os(out / "error.json");
            if (os) os << j.dump(2) << '\n';
        }
    };

    try {
        std::error_code ec;
        fs::create_directories(out, ec);
        if (ec) throw ConfigError("out", "cannot create output directory " + out.string());

        if (config.subcommand == "solve-riemann") return cmd_solve_riemann(config, out);
        if (config.subcommand == "observe") return cmd_observe(config, out);
        if (config.subcommand == "reconstruct") return cmd_reconstruct(config, out);
        if (config.subcommand == "convergence") return cmd_convergence(config, out);
        if (config.subcommand == "stability") return cmd_stability(config, out);
        if (config.subcommand == "euler-demo") return cmd_euler_demo(config, out);
        throw ConfigError("subcommand", "unknown subcommand '" + config.subcommand + "'");
    } catch (const ConfigError& e) {
        emit_error("config", e.what(), e.field);
        return 2;
    } catch (const Error& e) {
        emit_error("numerical", e.what(), "");
        return 3;
    } catch (const std::exception& e) {
        emit_error("numerical", e.what(), "");
        return 3;
    }
}

}  // namespace fluxrec
