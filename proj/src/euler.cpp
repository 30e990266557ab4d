#include "fluxrec/euler.hpp"

#include <cmath>

namespace fluxrec {

PressureLaw PressureLaw::gamma_law(double gamma, double kappa, Interval v_domain) {
    if (!(gamma > 0.0) || !(kappa > 0.0))
        throw Error("gamma_law: gamma and kappa must be positive");
    PressureLaw law;
    law.p = [=](double v) { return kappa * std::pow(v, -gamma); };
    law.p_deriv = [=](double v) { return -gamma * kappa * std::pow(v, -gamma - 1.0); };
    law.v_domain = v_domain;
    law.lipschitz_p_deriv = gamma * (gamma + 1.0) * kappa * std::pow(v_domain.lo, -gamma - 2.0);
    law.gamma = gamma;
    law.kappa = kappa;
    law.validate();
    return law;
}

void PressureLaw::validate() const {
    if (!(v_domain.lo > 0.0)) throw Error("PressureLaw: specific volume must stay positive");
    if (!(v_domain.lo < v_domain.hi)) throw Error("PressureLaw: empty domain");
    for (int i = 0; i <= 200; ++i) {
        const double v = v_domain.lo + v_domain.length() * i / 200.0;
        if (!(p_deriv(v) < 0.0))
            throw HyperbolicityError("PressureLaw: p'(v) = " + fmt_full(p_deriv(v)) +
                                     " is not negative at v = " + fmt_full(v));
    }
}

PSystemTemplate make_psystem(const PressureLaw& law, Interval u_range) {
    law.validate();
    if (!(u_range.lo < u_range.hi)) throw Error("make_psystem: empty u range");

    // hyperbolicity rectangle strictly larger than the working box, staying
    // clear of v = 0
    Rect rect;
    const double mu = 0.1 * (1.0 + u_range.length());
    rect.u = {u_range.lo - mu, u_range.hi + mu};
    const double mv = std::min(0.1 * law.v_domain.length(), 0.5 * law.v_domain.lo);
    rect.v = {law.v_domain.lo - mv, law.v_domain.hi + mv};

    for (int i = 0; i <= 200; ++i) {
        const double v = rect.v.lo + rect.v.length() * i / 200.0;
        if (!(law.p_deriv(v) < 0.0))
            throw HyperbolicityError("make_psystem: p'(v) not negative at v = " + fmt_full(v) +
                                     " inside the solver rectangle");
    }

    auto p = law.p;
    auto pd = law.p_deriv;
    auto f1 = std::make_shared<AnalyticFlux>(p, pd, rect.v, law.lipschitz_p_deriv);
    auto f2 = std::make_shared<AnalyticFlux>([](double u) { return -u; },
                                             [](double) { return -1.0; }, rect.u, 0.0);
    return PSystemTemplate{FluxPair{f1, f2}, rect};
}

PressureRecovery recover_pressure(const PressureLaw& law, Interval u_range, int m, double T,
                                  bool known_anchors, int samples_per_fan) {
    PSystemTemplate tmpl = make_psystem(law, u_range);
    GridSpec grid{u_range.lo, u_range.hi, law.v_domain.lo, law.v_domain.hi, m};

    SolverConfig cfg;
    cfg.rect = tmpl.rect;
    std::optional<Anchors> anchors;
    if (known_anchors) anchors = Anchors{law.p(grid.v_star), -grid.u_star};

    auto report = reconstruct_all(tmpl.flux_pair, grid, T, anchors, cfg, samples_per_fan);

    // f2 is known to be -u: every recovered increment must equal -delta
    PressureRecovery out{report.f1m, std::move(report), 0.0};
    const double delta = grid.delta();
    for (const auto& step : out.report.steps) {
        const double residual = std::fabs(step.f2_increment - (-delta));
        out.f2_max_residual = std::max(out.f2_max_residual, residual);
    }
    if (out.f2_max_residual > 1e-6)
        throw ObservationInconsistencyError(
            "recover_pressure: recovered f2 deviates from -u by " +
            fmt_full(out.f2_max_residual));
    return out;
}

std::pair<double, double> euler_eigen(const PressureLaw& law, double rho, double u_vel) {
    if (!(rho > 0.0)) throw Error("euler_eigen: density must be positive");
    const double v = 1.0 / rho;
    // Eulerian p'(rho) = -p'(v) v^2 under v = 1/rho
    const double p_eul = -law.p_deriv(v) * v * v;
    if (!(p_eul > 0.0))
        throw HyperbolicityError("euler_eigen: p'(rho) = " + fmt_full(p_eul) +
                                 " is not positive at rho = " + fmt_full(rho));
    const double c = std::sqrt(p_eul);
    return {u_vel - c, u_vel + c};
}

}  // namespace fluxrec
