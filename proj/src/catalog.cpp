#include "fluxrec/catalog.hpp"

#include <cmath>
#include <map>

#include "fluxrec/euler.hpp"

namespace fluxrec {

namespace {

CatalogEntry make_linear() {
    auto id = std::make_shared<AnalyticFlux>([](double x) { return x; },
                                             [](double) { return 1.0; }, Interval{-5.0, 5.0},
                                             0.0, [](double) { return 0.0; }, 0.0);
    CatalogEntry e;
    e.name = "linear";
    e.pair = FluxPair{id, id};
    e.solver_rect = Rect{{-2.0, 2.0}, {-2.0, 2.0}};
    e.default_box = GridSpec{-0.4, 0.4, -0.4, 0.4, 4};
    e.lipschitz_f1d = [](Interval) { return 0.0; };
    e.lipschitz_f2d = [](Interval) { return 0.0; };
    e.third_bound_f1 = [](Interval) { return std::optional<double>(0.0); };
    e.third_bound_f2 = e.third_bound_f1;
    return e;
}

CatalogEntry make_exp_pair() {
    auto ex = std::make_shared<AnalyticFlux>(
        [](double x) { return std::exp(x); }, [](double x) { return std::exp(x); },
        Interval{-2.0, 3.0}, std::exp(3.0), [](double x) { return std::exp(x); }, std::exp(3.0));
    CatalogEntry e;
    e.name = "exp-pair";
    e.pair = FluxPair{ex, ex};
    e.solver_rect = Rect{{-1.0, 2.0}, {-1.0, 2.0}};
    e.default_box = GridSpec{0.0, 1.0, 0.0, 1.0, 4};
    auto sup_exp = [](Interval iv) { return std::exp(iv.hi); };
    e.lipschitz_f1d = sup_exp;
    e.lipschitz_f2d = sup_exp;
    e.third_bound_f1 = [](Interval iv) { return std::optional<double>(std::exp(iv.hi)); };
    e.third_bound_f2 = e.third_bound_f1;
    return e;
}

CatalogEntry make_c11_kink() {
    // f(x) = x + x|x|/2: f' = 1 + |x| has Lipschitz constant exactly 1 and a
    // curvature kink at the origin, which the dyadic grids place on a node
    auto k = std::make_shared<AnalyticFlux>(
        [](double x) { return x + 0.5 * x * std::fabs(x); },
        [](double x) { return 1.0 + std::fabs(x); }, Interval{-2.5, 2.5}, 1.0);
    CatalogEntry e;
    e.name = "c11-kink";
    e.pair = FluxPair{k, k};
    e.solver_rect = Rect{{-1.6, 1.6}, {-1.6, 1.6}};
    e.default_box = GridSpec{-1.0, 1.0, -1.0, 1.0, 4};
    e.lipschitz_f1d = [](Interval) { return 1.0; };
    e.lipschitz_f2d = [](Interval) { return 1.0; };
    e.third_bound_f1 = [](Interval) { return std::optional<double>(); };
    e.third_bound_f2 = e.third_bound_f1;
    return e;
}

CatalogEntry make_psystem_gamma() {
    const double gamma = 1.4, kappa = 1.0;
    auto law = PressureLaw::gamma_law(gamma, kappa, {0.8, 2.0});
    auto tmpl = make_psystem(law, {-0.5, 0.5});
    CatalogEntry e;
    e.name = "psystem-gamma";
    e.pair = tmpl.flux_pair;
    e.solver_rect = tmpl.rect;
    e.default_box = GridSpec{-0.5, 0.5, 0.8, 2.0, 4};
    e.lipschitz_f1d = [=](Interval iv) {
        return gamma * (gamma + 1.0) * kappa * std::pow(iv.lo, -gamma - 2.0);
    };
    e.lipschitz_f2d = [](Interval) { return 0.0; };
    e.third_bound_f1 = [=](Interval iv) {
        return std::optional<double>(gamma * (gamma + 1.0) * (gamma + 2.0) * kappa *
                                     std::pow(iv.lo, -gamma - 3.0));
    };
    e.third_bound_f2 = [](Interval) { return std::optional<double>(0.0); };
    return e;
}

const std::map<std::string, CatalogEntry>& catalog() {
    static const std::map<std::string, CatalogEntry> entries = [] {
        std::map<std::string, CatalogEntry> m;
        for (auto&& e : {make_linear(), make_exp_pair(), make_c11_kink(), make_psystem_gamma()})
            m.emplace(e.name, e);
        return m;
    }();
    return entries;
}

}  // namespace

const CatalogEntry& catalog_entry(const std::string& name) {
    auto it = catalog().find(name);
    if (it == catalog().end()) {
        std::string names;
        for (const auto& [n, _] : catalog()) names += (names.empty() ? "" : ", ") + n;
        throw Error("unknown flux catalog entry '" + name + "' (available: " + names + ")");
    }
    return it->second;
}

std::vector<std::string> catalog_names() {
    std::vector<std::string> out;
    for (const auto& [n, _] : catalog()) out.push_back(n);
    return out;
}

}  // namespace fluxrec
