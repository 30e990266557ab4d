#include "fluxrec/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

namespace fluxrec {

namespace {

double state_scale(const State& a, const State& b) {
    return 1.0 + std::max(std::max(std::fabs(a.u), std::fabs(a.v)),
                          std::max(std::fabs(b.u), std::fabs(b.v)));
}

std::string describe(const State& s) {
    return "(u=" + fmt_full(s.u) + ", v=" + fmt_full(s.v) + ")";
}

double lambda_family(const FluxPair& fp, const State& s, int family) {
    auto [l1, l2] = eigenvalues(fp, s);
    return family == 1 ? l1 : l2;
}

// Integral-curve slope of the wave family in terms of its curve parameter:
// family 1 is parameterized by u (dv/du = lambda_1 / f1'),
// family 2 by v (du/dv = f1' / lambda_2).
double curve_slope(const FluxPair& fp, const State& s, int family) {
    const double prod = fp.f1d(s.v) * fp.f2d(s.u);
    if (!(prod > 0.0))
        throw HyperbolicityError("integral curve: f1'(v) f2'(u) = " + fmt_full(prod) +
                                 " <= 0 at state " + describe(s));
    const double lam = std::sqrt(prod);
    if (family == 1) return -lam / fp.f1d(s.v);
    return fp.f1d(s.v) / lam;
}

State make_state(int family, double param, double other) {
    // family 1: param = u, other = v;  family 2: param = v, other = u
    return family == 1 ? State{param, other} : State{other, param};
}

// Fixed-step RK4 along the integral curve; returns the n+1 path states with
// the parameter endpoint hit exactly.
std::vector<State> integrate_curve(const FluxPair& fp, const State& from, int family,
                                   double strength, int n) {
    const double p0 = (family == 1) ? from.u : from.v;
    double y = (family == 1) ? from.v : from.u;
    std::vector<State> path;
    path.reserve(n + 1);
    path.push_back(from);
    for (int k = 0; k < n; ++k) {
        const double pa = p0 + strength * (static_cast<double>(k) / n);
        const double pb = p0 + strength * (static_cast<double>(k + 1) / n);
        const double h = pb - pa;
        const double pm = pa + 0.5 * h;
        const double k1 = curve_slope(fp, make_state(family, pa, y), family);
        const double k2 = curve_slope(fp, make_state(family, pm, y + 0.5 * h * k1), family);
        const double k3 = curve_slope(fp, make_state(family, pm, y + 0.5 * h * k2), family);
        const double k4 = curve_slope(fp, make_state(family, pb, y + h * k3), family);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        path.push_back(make_state(family, pb, y));
    }
    return path;
}

// Hugoniot locus point through `from` at fixed curve parameter. The locus
// equation with the speed eliminated is
//   (f1(v_r) - f1(v_l)) (v_r - v_l) = (f2(u_r) - f2(u_l)) (u_r - u_l);
// the unknown coordinate is solved by safeguarded Newton near `guess`.
ShockPoint hugoniot_point(const FluxPair& fp, const State& from, int family, double strength,
                          double guess_other) {
    const double scale = 1.0 + std::fabs(strength);
    auto residual = [&](double other) {
        const State to = make_state(family, (family == 1 ? from.u : from.v) + strength, other);
        const double df1 = fp.f1v(to.v) - fp.f1v(from.v);
        const double df2 = fp.f2v(to.u) - fp.f2v(from.u);
        return df1 * (to.v - from.v) - df2 * (to.u - from.u);
    };
    auto residual_deriv = [&](double other) {
        const State to = make_state(family, (family == 1 ? from.u : from.v) + strength, other);
        if (family == 1) {
            // unknown is v_r
            const double df1 = fp.f1v(to.v) - fp.f1v(from.v);
            return fp.f1d(to.v) * (to.v - from.v) + df1;
        }
        // unknown is u_r
        const double df2 = fp.f2v(to.u) - fp.f2v(from.u);
        return -(fp.f2d(to.u) * (to.u - from.u) + df2);
    };

    // The two locus branches through `from` are separated by about twice the
    // integral-curve offset; keep Newton inside a trust radius so it cannot
    // jump to the other family's branch.
    const double ratio = std::fabs(fp.f1d(from.v) / fp.f2d(from.u));
    const double branch_sep = 2.0 * (family == 1 ? std::sqrt(1.0 / ratio) : std::sqrt(ratio)) *
                              std::fabs(strength);
    const double radius = std::max(0.6 * branch_sep, 1e-9 * scale);

    double x = guess_other;
    double fx = residual(x);
    double lo = guess_other - radius, hi = guess_other + radius;
    std::optional<double> blo, bhi;  // bracket with sign change
    const double ftol = 1e-16 * scale * scale + 1e-300;
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
        if (std::fabs(fx) <= ftol) {
            converged = true;
            break;
        }
        const double dfx = residual_deriv(x);
        double step = (dfx != 0.0) ? -fx / dfx : radius;
        double xn = x + step;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        const double fn = residual(xn);
        if ((fn < 0.0) != (fx < 0.0)) {
            blo = std::min(x, xn);
            bhi = std::max(x, xn);
        }
        if (std::fabs(xn - x) <= 1e-17 * (1.0 + std::fabs(x))) {
            x = xn;
            fx = fn;
            converged = true;
            break;
        }
        x = xn;
        fx = fn;
    }
    if (!converged && blo && bhi) {
        // bisection fallback on the recorded bracket
        double flo = residual(*blo);
        double a = *blo, b = *bhi;
        for (int it = 0; it < 200 && b - a > 1e-17 * (1.0 + std::fabs(a)); ++it) {
            const double mid = 0.5 * (a + b);
            const double fm = residual(mid);
            if ((fm < 0.0) == (flo < 0.0)) {
                a = mid;
                flo = fm;
            } else {
                b = mid;
            }
        }
        x = 0.5 * (a + b);
        fx = residual(x);
        converged = true;
    }
    if (!converged && std::fabs(fx) > 1e-10 * scale * scale)
        throw NoLocusPointError("hugoniot_point: no locus point near state " + describe(from) +
                                ", family " + std::to_string(family) + ", strength " +
                                fmt_full(strength));

    const State to = make_state(family, (family == 1 ? from.u : from.v) + strength, x);
    const double du = to.u - from.u;
    const double dv = to.v - from.v;
    const double df1 = fp.f1v(to.v) - fp.f1v(from.v);
    const double df2 = fp.f2v(to.u) - fp.f2v(from.u);
    const double denom = du * du + dv * dv;
    const double speed = denom > 0.0 ? (df1 * du + df2 * dv) / denom
                                     : lambda_family(fp, from, family);
    return {to, speed};
}

// Roundoff scale of a shock speed computed from flux differences over a
// small jump: eps * |f| / |jump| dominates the achievable precision.
double speed_noise(const FluxPair& fp, const State& a, const State& b) {
    const double fmag =
        std::max(std::max(std::fabs(fp.f1v(a.v)), std::fabs(fp.f1v(b.v))),
                 std::max(std::fabs(fp.f2v(a.u)), std::fabs(fp.f2v(b.u))));
    const double jump = std::max(std::hypot(b.u - a.u, b.v - a.v), 1e-300);
    return 64.0 * 2.22e-16 * (1.0 + fmag) / jump;
}

struct CurveEval {
    State to;
    bool zero = false;
    bool rarefaction = false;
    bool admissible = true;  // Lax (shock) or monotone lambda (rarefaction)
    double speed = 0.0;      // shock only
    double lambda_from = 0.0;
    double lambda_to = 0.0;
    std::vector<State> path;  // rarefaction integration samples
};

// Combined admissible wave curve through `from`: the integral curve where the
// characteristic speed increases with the parameter, the Hugoniot locus
// otherwise. Continuous in `strength`, which the intermediate-state root
// finder relies on.
CurveEval eval_wave_curve(const FluxPair& fp, const State& from, int family, double strength,
                          const SolverConfig& cfg, int steps, bool keep_path) {
    CurveEval out;
    const double scale = 1.0 + std::max(std::fabs(from.u), std::fabs(from.v));
    out.lambda_from = lambda_family(fp, from, family);
    const double lam_tol = 1e-12 * (1.0 + std::fabs(out.lambda_from));

    if (std::fabs(strength) <= cfg.zero_strength_tol * scale) {
        out.to = from;
        out.zero = true;
        out.rarefaction = true;
        out.lambda_to = out.lambda_from;
        return out;
    }

    auto path = integrate_curve(fp, from, family, strength, steps);
    double lam_prev = out.lambda_from;
    double min_step = 0.0;
    for (std::size_t k = 1; k < path.size(); ++k) {
        const double lam = lambda_family(fp, path[k], family);
        min_step = std::min(min_step, lam - lam_prev);
        lam_prev = lam;
    }
    const double total = lam_prev - out.lambda_from;

    if (total > lam_tol && min_step >= -lam_tol) {
        out.rarefaction = true;
        out.to = path.back();
        out.lambda_to = lam_prev;
        if (keep_path) out.path = std::move(path);
        return out;
    }

    auto shock = hugoniot_point(fp, from, family, strength,
                                family == 1 ? path.back().v : path.back().u);
    out.to = shock.to;
    out.speed = shock.speed;
    out.lambda_to = lambda_family(fp, out.to, family);
    const double slack = lam_tol + speed_noise(fp, from, out.to);
    out.admissible =
        (out.lambda_from >= out.speed - slack) && (out.speed >= out.lambda_to - slack);
    return out;
}

int result_steps(const SolverConfig& cfg) {
    return cfg.richardson_check ? 2 * cfg.ode_steps : cfg.ode_steps;
}

// Richardson consistency between the nominal-step and half-step integrations.
void richardson_check_or_throw(const FluxPair& fp, const State& from, int family,
                               double strength, const SolverConfig& cfg, const State& fine_to) {
    auto coarse = integrate_curve(fp, from, family, strength, cfg.ode_steps);
    const double scale = 1.0 + std::max(std::fabs(fine_to.u), std::fabs(fine_to.v));
    const double err = std::max(std::fabs(coarse.back().u - fine_to.u),
                                std::fabs(coarse.back().v - fine_to.v));
    if (err > 1e-8 * scale)
        throw SolverConvergenceError(
            "rarefaction integration failed the step-halving check: disagreement " +
            fmt_full(err) + " from state " + describe(from));
}

std::vector<FanSample> build_fan(const FluxPair& fp, const std::vector<State>& path, int family,
                                 bool reversed) {
    std::vector<FanSample> fan;
    fan.reserve(path.size());
    if (reversed) {
        for (auto it = path.rbegin(); it != path.rend(); ++it)
            fan.push_back({lambda_family(fp, *it, family), *it});
    } else {
        for (const auto& s : path) fan.push_back({lambda_family(fp, s, family), s});
    }
    // Drop samples that fail to advance xi (possible only at roundoff level).
    std::vector<FanSample> clean;
    clean.reserve(fan.size());
    for (const auto& s : fan) {
        if (clean.empty() || s.xi > clean.back().xi) clean.push_back(s);
    }
    if (!clean.empty()) clean.back().state = reversed ? path.front() : path.back();
    return clean;
}

void check_path_in_rect(const std::vector<State>& path, const Rect& rect) {
    const double slack = 1e-12;
    for (const auto& s : path) {
        if (!rect.contains(s, slack * (1.0 + std::fabs(s.u) + std::fabs(s.v))))
            throw DomainExitError("wave curve left the hyperbolicity rectangle at state " +
                                  describe(s));
    }
}

void verify_shock_invariants(const FluxPair& fp, const Wave& w) {
    const double du = w.right.u - w.left.u;
    const double dv = w.right.v - w.left.v;
    const double r1 = fp.f1v(w.right.v) - fp.f1v(w.left.v) - w.shock_speed * du;
    const double r2 = fp.f2v(w.right.u) - fp.f2v(w.left.u) - w.shock_speed * dv;
    const double scale = 1e-10 * (1.0 + std::fabs(w.shock_speed) + std::fabs(du) + std::fabs(dv));
    if (std::fabs(r1) > scale || std::fabs(r2) > scale)
        throw InternalConsistencyError("emitted shock violates the jump conditions: residuals " +
                                       fmt_full(r1) + ", " + fmt_full(r2));
}

// Assemble a Wave from a strict curve evaluation; throws if inadmissible.
std::optional<Wave> assemble_wave(const FluxPair& fp, const State& from, int family,
                                  double strength, const SolverConfig& cfg) {
    CurveEval ev = eval_wave_curve(fp, from, family, strength, cfg, result_steps(cfg), true);
    if (ev.zero) return std::nullopt;
    Wave w;
    w.family = family;
    w.left = from;
    if (ev.rarefaction) {
        if (cfg.richardson_check)
            richardson_check_or_throw(fp, from, family, strength, cfg, ev.to);
        check_path_in_rect(ev.path, cfg.rect);
        w.kind = WaveKind::Rarefaction;
        w.right = ev.to;
        w.fan = build_fan(fp, ev.path, family, false);
        w.xi_span = {w.fan.front().xi, w.fan.back().xi};
    } else {
        if (!ev.admissible)
            throw KindChangeError(
                "wave curve is neither a monotone rarefaction nor a Lax-admissible shock "
                "(composite wave) from state " +
                describe(from) + ", family " + std::to_string(family) + ", strength " +
                fmt_full(strength));
        if (!cfg.rect.contains(ev.to, 1e-12 * (1.0 + std::fabs(ev.to.u) + std::fabs(ev.to.v))))
            throw DomainExitError("shock endpoint outside the hyperbolicity rectangle: " +
                                  describe(ev.to));
        w.kind = WaveKind::Shock;
        w.right = ev.to;
        w.shock_speed = ev.speed;
        verify_shock_invariants(fp, w);
    }
    return w;
}

}  // namespace

std::pair<double, double> eigenvalues(const FluxPair& fp, const State& s) {
    const double prod = fp.f1d(s.v) * fp.f2d(s.u);
    if (!(prod > 0.0))
        throw HyperbolicityError("eigenvalues: f1'(v) f2'(u) = " + fmt_full(prod) +
                                 " is not positive at state " + describe(s));
    const double lam = std::sqrt(prod);
    return {-lam, lam};
}

ShockPoint shock_branch(const FluxPair& fp, const State& from, int family, double strength,
                        const SolverConfig& cfg) {
    if (family != 1 && family != 2) throw Error("shock_branch: family must be 1 or 2");
    const double scale = 1.0 + std::max(std::fabs(from.u), std::fabs(from.v));
    if (std::fabs(strength) <= cfg.zero_strength_tol * scale)
        return {from, lambda_family(fp, from, family)};

    auto guess_path = integrate_curve(fp, from, family, strength, std::max(16, cfg.ode_steps / 16));
    auto pt = hugoniot_point(fp, from, family, strength,
                             family == 1 ? guess_path.back().v : guess_path.back().u);

    const double lam_l = lambda_family(fp, from, family);
    const double lam_r = lambda_family(fp, pt.to, family);
    const double lam_tol =
        1e-12 * (1.0 + std::fabs(lam_l)) + speed_noise(fp, from, pt.to);
    if (!(lam_l >= pt.speed - lam_tol && pt.speed >= lam_r - lam_tol))
        throw InadmissibleBranchError(
            "shock_branch: Lax condition fails (lambda_l=" + fmt_full(lam_l) + ", s=" +
            fmt_full(pt.speed) + ", lambda_r=" + fmt_full(lam_r) + ")");
    if (!cfg.rect.contains(pt.to, 1e-12 * scale))
        throw DomainExitError("shock_branch: locus point outside rectangle " + describe(pt.to));

    Wave w;
    w.kind = WaveKind::Shock;
    w.family = family;
    w.left = from;
    w.right = pt.to;
    w.shock_speed = pt.speed;
    verify_shock_invariants(fp, w);
    return pt;
}

RarefactionPoint rarefaction_branch(const FluxPair& fp, const State& from, int family,
                                    double strength, const SolverConfig& cfg) {
    if (family != 1 && family != 2) throw Error("rarefaction_branch: family must be 1 or 2");
    const double scale = 1.0 + std::max(std::fabs(from.u), std::fabs(from.v));
    if (std::fabs(strength) <= cfg.zero_strength_tol * scale) return {from, {}};

    auto path = integrate_curve(fp, from, family, strength, result_steps(cfg));
    if (cfg.richardson_check)
        richardson_check_or_throw(fp, from, family, strength, cfg, path.back());
    check_path_in_rect(path, cfg.rect);

    const double lam0 = lambda_family(fp, from, family);
    const double lam_tol = 1e-12 * (1.0 + std::fabs(lam0));
    double lam_prev = lam0;
    double min_step = 0.0, max_step = 0.0;
    for (std::size_t k = 1; k < path.size(); ++k) {
        const double lam = lambda_family(fp, path[k], family);
        min_step = std::min(min_step, lam - lam_prev);
        max_step = std::max(max_step, lam - lam_prev);
        lam_prev = lam;
    }
    const double total = lam_prev - lam0;

    if (std::fabs(total) <= lam_tol && max_step <= lam_tol && min_step >= -lam_tol) {
        // contact-degenerate: constant characteristic speed along the path
        return {path.back(), {}};
    }
    if (total > lam_tol && min_step >= -lam_tol)
        return {path.back(), build_fan(fp, path, family, false)};
    if (total < -lam_tol && max_step <= lam_tol)
        return {path.back(), build_fan(fp, path, family, true)};
    throw InadmissibleBranchError(
        "rarefaction_branch: characteristic speed is not monotone along the requested branch "
        "from state " +
        describe(from));
}

RiemannSolution solve_riemann(const FluxPair& fp, const State& left, const State& right,
                              const SolverConfig& cfg) {
    if (!cfg.rect.contains(left, 0.0) || !cfg.rect.contains(right, 0.0))
        throw DomainExitError("solve_riemann: datum outside the hyperbolicity rectangle");

    RiemannSolution sol;
    sol.left = left;
    sol.right = right;
    sol.flux_pair = fp;

    const double scale = state_scale(left, right);
    if (std::fabs(left.u - right.u) <= cfg.zero_strength_tol * scale &&
        std::fabs(left.v - right.v) <= cfg.zero_strength_tol * scale) {
        sol.middle = left;
        return sol;
    }

    // Initial guess: linear characteristic decomposition at the average state.
    double sigma1 = 0.0;
    try {
        const State avg{0.5 * (left.u + right.u), 0.5 * (left.v + right.v)};
        auto [l1, l2] = eigenvalues(fp, avg);
        const double a = fp.f1d(avg.v);
        const double det = a * (l2 - l1);
        const double alpha = (l2 * (right.u - left.u) - a * (right.v - left.v)) / det;
        sigma1 = alpha * a;  // u-component of alpha * r1
    } catch (const Error&) {
        sigma1 = 0.0;
    }

    const int probe_steps = std::max(8, cfg.ode_steps / 16);
    auto map_residual = [&](double s1, int steps) -> std::optional<double> {
        try {
            CurveEval c1 = eval_wave_curve(fp, left, 1, s1, cfg, steps, false);
            const double s2 = right.v - c1.to.v;
            CurveEval c2 = eval_wave_curve(fp, c1.to, 2, s2, cfg, steps, false);
            return c2.to.u - right.u;
        } catch (const Error&) {
            return std::nullopt;
        }
    };

    const double sigma_cap = 2.0 * (cfg.rect.u.length() + cfg.rect.v.length());
    const double coarse_target = std::max(1e-7 * scale, cfg.tol * scale);
    const double fine_target = cfg.tol * scale;

    auto eval_or_backoff = [&](double& s1, int steps) -> std::optional<double> {
        for (int k = 0; k < 40; ++k) {
            auto f = map_residual(s1, steps);
            if (f) return f;
            s1 *= 0.5;  // retreat toward the zero-strength point, which always evaluates
            if (std::fabs(s1) < 1e-300) return map_residual(0.0, steps);
        }
        return std::nullopt;
    };

    double x = std::clamp(sigma1, -sigma_cap, sigma_cap);
    auto fx_opt = eval_or_backoff(x, probe_steps);
    if (!fx_opt) throw NoSolutionError("solve_riemann: wave curves cannot be evaluated");
    double fx = *fx_opt;

    std::optional<double> bneg, bpos;  // bracket sigma values with f<0 / f>0
    auto note = [&](double s, double f) {
        if (f < 0.0)
            bneg = s;
        else
            bpos = s;
    };
    note(x, fx);

    bool coarse_done = std::fabs(fx) <= coarse_target;
    for (int it = 0; it < cfg.max_iterations && !coarse_done; ++it) {
        const double h = 1e-6 * (1.0 + std::fabs(x));
        auto fph = map_residual(x + h, probe_steps);
        double step;
        if (fph && *fph != fx) {
            step = -fx * h / (*fph - fx);
        } else if (bneg && bpos) {
            step = 0.5 * (*bneg + *bpos) - x;
        } else {
            step = (fx > 0.0 ? -1.0 : 1.0) * 0.1 * (1.0 + std::fabs(x));
        }
        bool improved = false;
        for (int damp = 0; damp < 30; ++damp) {
            double xn = std::clamp(x + step, -sigma_cap, sigma_cap);
            auto fn = map_residual(xn, probe_steps);
            if (fn) {
                note(xn, *fn);
                if (std::fabs(*fn) < std::fabs(fx) || std::fabs(step) < 1e-16 * (1.0 + std::fabs(x))) {
                    x = xn;
                    fx = *fn;
                    improved = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!improved) {
            if (bneg && bpos) {
                // bisection fallback along the parameter
                double a = *bneg, b = *bpos;
                for (int bi = 0; bi < 200; ++bi) {
                    const double mid = 0.5 * (a + b);
                    auto fm = map_residual(mid, probe_steps);
                    if (!fm) break;
                    if (*fm < 0.0)
                        a = mid;
                    else
                        b = mid;
                    if (std::fabs(*fm) <= coarse_target || std::fabs(b - a) < 1e-15) {
                        x = mid;
                        fx = *fm;
                        break;
                    }
                }
            }
            if (std::fabs(fx) > coarse_target)
                throw SolverConvergenceError(
                    "solve_riemann: root finder stagnated at residual " + fmt_full(fx) +
                    " for datum " + describe(left) + " -> " + describe(right));
        }
        coarse_done = std::fabs(fx) <= coarse_target;
    }
    if (!coarse_done)
        throw SolverConvergenceError("solve_riemann: no convergence within iteration budget for " +
                                     describe(left) + " -> " + describe(right));

    // Polish with full-accuracy curve evaluations (secant).
    {
        const int steps = result_steps(cfg);
        auto f0 = map_residual(x, steps);
        if (!f0) throw SolverConvergenceError("solve_riemann: polish evaluation failed");
        double x0 = x, v0 = *f0;
        if (std::fabs(v0) > 0.25 * fine_target) {
            double x1 = x0 + std::max(1e-9, 1e-7 * std::fabs(x0));
            auto f1 = map_residual(x1, steps);
            for (int it = 0; it < 30 && f1; ++it) {
                if (*f1 == v0) break;
                const double xn = x1 - *f1 * (x1 - x0) / (*f1 - v0);
                x0 = x1;
                v0 = *f1;
                x1 = xn;
                f1 = map_residual(x1, steps);
                if (f1 && std::fabs(*f1) <= 0.25 * fine_target) break;
            }
            if (f1 && std::fabs(*f1) < std::fabs(v0)) {
                x0 = x1;
                v0 = *f1;
            }
        }
        if (std::fabs(v0) > fine_target)
            throw SolverConvergenceError("solve_riemann: residual " + fmt_full(v0) +
                                         " exceeds tolerance " + fmt_full(fine_target));
        x = x0;
    }

    // Data lying exactly on the 2-wave curve leave a spurious 1-wave of
    // root-finder-noise strength; prefer the one-wave solution when it
    // already meets the tolerance.
    if (x != 0.0 && std::fabs(x) <= 1e-6 * scale) {
        auto f0 = map_residual(0.0, result_steps(cfg));
        if (f0 && std::fabs(*f0) <= fine_target) x = 0.0;
    }

    // Assemble the waves with admissibility enforced.
    auto w1 = assemble_wave(fp, left, 1, x, cfg);
    const State middle = w1 ? w1->right : left;
    const double sigma2 = right.v - middle.v;
    auto w2 = assemble_wave(fp, middle, 2, sigma2, cfg);
    sol.middle = middle;
    if (!cfg.rect.contains(middle, 1e-12 * scale))
        throw NoSolutionError("solve_riemann: intermediate state " + describe(middle) +
                              " outside the hyperbolicity rectangle");
    if (w2) {
        // The far field right of the last wave is the datum itself.
        if (w2->kind == WaveKind::Shock) {
            w2->right = right;
            verify_shock_invariants(fp, *w2);
        } else if (!w2->fan.empty()) {
            w2->right = right;
            w2->fan.back().state = right;
            w2->fan.back().xi = lambda_family(fp, right, 2);
            if (w2->fan.size() >= 2 && w2->fan.back().xi <= w2->fan[w2->fan.size() - 2].xi)
                w2->fan.erase(w2->fan.end() - 2);
            w2->xi_span = {w2->fan.front().xi, w2->fan.back().xi};
        }
    }
    if (w1) sol.waves.push_back(std::move(*w1));
    if (w2) sol.waves.push_back(std::move(*w2));
    if (sol.waves.size() == 2 &&
        !(sol.waves[0].max_speed() < sol.waves[1].min_speed()))
        throw InternalConsistencyError("solve_riemann: wave speed ranges overlap");
    return sol;
}

RegionTag classify_region(const FluxPair& fp, const State& left, const State& right,
                          const SolverConfig& cfg) {
    const RiemannSolution sol = solve_riemann(fp, left, right, cfg);
    // absent (zero-strength) waves count as rarefactions; left == right gives III
    bool shock1 = false, shock2 = false;
    for (const auto& w : sol.waves) {
        if (w.family == 1) shock1 = (w.kind == WaveKind::Shock);
        if (w.family == 2) shock2 = (w.kind == WaveKind::Shock);
    }
    if (shock1 && shock2) return RegionTag::I;
    if (shock1) return RegionTag::II;
    if (shock2) return RegionTag::IV;
    return RegionTag::III;
}

// The stored sample parameter (u for family 1, v for family 2) is the
// integration variable; the other component is interpolated with a cubic
// Hermite so the recovered state stays on the integral curve to
// O(sample spacing^4).
State fan_state_at_xi(const FluxPair& fp, const Wave& w, double xi) {
    const auto& fan = w.fan;
    if (xi <= fan.front().xi) return w.left;
    if (xi >= fan.back().xi) return w.right;
    std::size_t lo = 0, hi = fan.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (fan[mid].xi <= xi)
            lo = mid;
        else
            hi = mid;
    }
    const State a = fan[lo].state;
    const State b = fan[hi].state;
    const int family = w.family;
    const double pa = (family == 1) ? a.u : a.v;
    const double pb = (family == 1) ? b.u : b.v;
    const double ya = (family == 1) ? a.v : a.u;
    const double yb = (family == 1) ? b.v : b.u;
    const double da = curve_slope(fp, a, family);
    const double db = curve_slope(fp, b, family);
    const double h = pb - pa;

    auto y_of = [&](double p) {
        const double t = (p - pa) / h;
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * ya + (t3 - 2 * t2 + t) * h * da +
               (-2 * t3 + 3 * t2) * yb + (t3 - t2) * h * db;
    };
    auto state_of = [&](double p) { return make_state(family, p, y_of(p)); };

    double plo = pa, phi = pb;
    const bool increasing = fan[hi].xi > fan[lo].xi;
    for (int it = 0; it < 200 && std::fabs(phi - plo) > 1e-16 * (1.0 + std::fabs(plo)); ++it) {
        const double pm = 0.5 * (plo + phi);
        const double lm = lambda_family(fp, state_of(pm), family);
        if ((lm < xi) == increasing)
            plo = pm;
        else
            phi = pm;
    }
    return state_of(0.5 * (plo + phi));
}

State sample_at_time(const RiemannSolution& sol, double T, double x) {
    if (!(T > 0.0)) throw Error("sample_at_time: T must be positive");
    const double xi = x / T;
    for (const auto& w : sol.waves) {
        if (xi < w.min_speed()) return w.left;
        if (w.kind == WaveKind::Rarefaction && xi <= w.max_speed())
            return fan_state_at_xi(sol.flux_pair, w, xi);
    }
    return sol.right;
}

nlohmann::json to_json(const State& s) { return nlohmann::json{{"u", s.u}, {"v", s.v}}; }

nlohmann::json to_json(const Wave& w) {
    nlohmann::json j{{"kind", w.kind == WaveKind::Shock ? "shock" : "rarefaction"},
                     {"family", w.family},
                     {"left", to_json(w.left)},
                     {"right", to_json(w.right)}};
    if (w.kind == WaveKind::Shock) {
        j["speed"] = w.shock_speed;
    } else {
        j["xi_span"] = {w.xi_span.lo, w.xi_span.hi};
        nlohmann::json fan = nlohmann::json::array();
        for (const auto& s : w.fan) fan.push_back({s.xi, s.state.u, s.state.v});
        j["fan"] = std::move(fan);
    }
    return j;
}

nlohmann::json to_json(const RiemannSolution& sol) {
    nlohmann::json waves = nlohmann::json::array();
    for (const auto& w : sol.waves) waves.push_back(to_json(w));
    return nlohmann::json{{"left", to_json(sol.left)},
                          {"middle", to_json(sol.middle)},
                          {"right", to_json(sol.right)},
                          {"waves", std::move(waves)}};
}

}  // namespace fluxrec
