#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fluxrec/cli.hpp"

namespace {

// "a,b" -> pair
bool parse_pair(const std::string& s, std::pair<double, double>& out) {
    return std::sscanf(s.c_str(), "%lf,%lf", &out.first, &out.second) == 2;
}

bool parse_rect(const std::string& s, std::array<double, 4>& out) {
    return std::sscanf(s.c_str(), "%lf,%lf,%lf,%lf", &out[0], &out[1], &out[2], &out[3]) == 4;
}

int config_error(const char* field, const std::string& message) {
    nlohmann::json j{{"error", {{"kind", "config"}, {"message", message}}}};
    if (field) j["error"]["field"] = field;
    std::printf("%s\n", j.dump(2).c_str());
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Riemann forward solver and flux-pair identification from single-time "
                 "observations"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value configuration file (flags win)");

    fluxrec::RunConfig cfg;
    std::string rect_str, left_str, right_str, v_range_str;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--flux", cfg.flux, "catalog entry (linear | exp-pair | c11-kink | "
                                            "psystem-gamma)");
        sub->add_option("--rect", rect_str, "grid box u_star,u_sup,v_star,v_sup");
        sub->add_option("--T", cfg.T, "observation time");
        sub->add_option("--tol", cfg.tol, "intermediate-state residual tolerance");
        sub->add_option("--samples-per-fan", cfg.samples_per_fan, "fan sampling density");
        sub->add_option("--margin", cfg.margin, "profile margin beyond the outer waves");
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_option("--seed", cfg.seed, "seed for randomized sweeps");
    };

    auto* solve = app.add_subcommand("solve-riemann", "solve one Riemann problem exactly");
    add_common(solve);
    solve->add_option("--left", left_str, "left state u,v");
    solve->add_option("--right", right_str, "right state u,v");
    solve->add_option("--sweep", cfg.sweep, "solve N random small-jump problems instead");

    auto* obs = app.add_subcommand("observe", "materialize a solution at time T");
    add_common(obs);
    obs->add_option("--left", left_str, "left state u,v");
    obs->add_option("--right", right_str, "right state u,v");
    obs->add_option("--m", cfg.m, "dyadic level for --all-steps");
    obs->add_flag("--all-steps", cfg.all_steps,
                  "record the profile of every grid step into the output directory");

    auto* rec = app.add_subcommand("reconstruct", "recover the flux pair from observations");
    add_common(rec);
    rec->add_option("--m", cfg.m, "dyadic refinement level");
    rec->add_option("--anchors", cfg.anchors, "known | unknown | c1,c2");

    auto* conv = app.add_subcommand("convergence", "error table across dyadic levels");
    add_common(conv);
    conv->add_option("--m-min", cfg.m_min, "first level");
    conv->add_option("--m-max", cfg.m_max, "last level");

    auto* stab = app.add_subcommand("stability", "L1 distance of evolutions under true vs "
                                                 "reconstructed fluxes");
    add_common(stab);
    stab->add_option("--m-min", cfg.m_min, "first level");
    stab->add_option("--m-max", cfg.m_max, "last level");
    stab->add_option("--cells", cfg.cells, "initial Godunov mesh size");
    stab->add_option("--cfl", cfg.cfl, "CFL number in (0,1)");

    auto* euler = app.add_subcommand("euler-demo", "pressure-law identification through the "
                                                   "p-system template");
    add_common(euler);
    euler->add_option("--gamma", cfg.gamma, "adiabatic exponent");
    euler->add_option("--kappa", cfg.kappa, "pressure scale");
    euler->add_option("--v-range", v_range_str, "specific volume range lo,hi");
    euler->add_option("--m", cfg.m, "top dyadic level of the convergence sweep");
    euler->add_option("--m-min", cfg.m_min, "first level");
    euler->add_option("--anchors", cfg.anchors, "known | unknown");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return config_error(nullptr, e.what());
    }

    if (!rect_str.empty()) {
        std::array<double, 4> r{};
        if (!parse_rect(rect_str, r))
            return config_error("rect", "rect must be u_star,u_sup,v_star,v_sup");
        cfg.rect = r;
    }
    if (!left_str.empty()) {
        std::pair<double, double> p;
        if (!parse_pair(left_str, p)) return config_error("left", "left must be u,v");
        cfg.left = p;
    }
    if (!right_str.empty()) {
        std::pair<double, double> p;
        if (!parse_pair(right_str, p)) return config_error("right", "right must be u,v");
        cfg.right = p;
    }
    if (!v_range_str.empty() && !parse_pair(v_range_str, cfg.v_range))
        return config_error("v-range", "v-range must be lo,hi");

    for (auto* sub : {solve, obs, rec, conv, stab, euler})
        if (sub->parsed()) cfg.subcommand = sub->get_name();

    return fluxrec::run(cfg);
}
