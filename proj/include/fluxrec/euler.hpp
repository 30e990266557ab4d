#ifndef FLUXREC_EULER_HPP
#define FLUXREC_EULER_HPP

#include "fluxrec/reconstruct.hpp"

namespace fluxrec {

/// Barotropic pressure law in Lagrangian variables: p as a strictly decreasing
/// function of the specific volume v = 1/rho. `lipschitz_p_deriv` is the
/// Lipschitz constant L_p of p' on `v_domain`.
struct PressureLaw {
    std::function<double(double)> p;
    std::function<double(double)> p_deriv;
    Interval v_domain{0.5, 2.0};
    double lipschitz_p_deriv = 0.0;
    std::optional<double> gamma;
    std::optional<double> kappa;

    /// p(v) = kappa v^{-gamma}.
    static PressureLaw gamma_law(double gamma, double kappa, Interval v_domain);

    /// Throws when v_domain touches zero or p' fails to be negative on it.
    void validate() const;
};

/// The p-system v_t - u_x = 0, u_t + p(v)_x = 0 expressed through the coupled
/// template: f1(v) = p(v), f2(u) = -u. Strict hyperbolicity holds wherever
/// p' < 0, with characteristic speeds -/+ sqrt(-p'(v)).
struct PSystemTemplate {
    FluxPair flux_pair;
    Rect rect;
};

PSystemTemplate make_psystem(const PressureLaw& law, Interval u_range);

struct PressureRecovery {
    QuadC1Interpolant p_m;
    ReconstructionReport report;
    double f2_max_residual = 0.0;  // worst |f2 increment + delta u| over all steps
};

/// Identify the pressure law from single-time observations of p-system
/// Riemann problems on the dyadic grid over (u_range x law.v_domain). f2 is
/// declared known (linear), so its recovered increments serve as a
/// consistency check; a deviation beyond 1e-6 aborts.
PressureRecovery recover_pressure(const PressureLaw& law, Interval u_range, int m, double T,
                                  bool known_anchors, int samples_per_fan = 512);

/// Eulerian acoustic speeds u -/+ sqrt(p'(rho)) with p'(rho) obtained from the
/// Lagrangian law through v = 1/rho.
std::pair<double, double> euler_eigen(const PressureLaw& law, double rho, double u_vel);

}  // namespace fluxrec

#endif  // FLUXREC_EULER_HPP
