#ifndef FLUXREC_FLUX_HPP
#define FLUXREC_FLUX_HPP

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "fluxrec/common.hpp"
#include "json.hpp"

namespace fluxrec {

/// One flux component: an evaluable real function with first derivative.
class ScalarFlux {
public:
    virtual ~ScalarFlux() = default;
    virtual double value(double x) const = 0;
    virtual double deriv(double x) const = 0;
    virtual Interval domain() const = 0;
};

/// Ground-truth flux component given in closed form.
///
/// `lipschitz_of_deriv` is the Lipschitz constant L of the first derivative on
/// `domain`; `third_deriv_bound`, when present, is sup |f'''| on `domain`.
class AnalyticFlux final : public ScalarFlux {
public:
    using Fn = std::function<double(double)>;

    AnalyticFlux(Fn value_fn, Fn deriv_fn, Interval dom, double lipschitz_of_deriv,
                 std::optional<Fn> second_deriv = std::nullopt,
                 std::optional<double> third_deriv_bound = std::nullopt)
        : value_(std::move(value_fn)),
          deriv_(std::move(deriv_fn)),
          second_deriv_(std::move(second_deriv)),
          domain_(dom),
          lipschitz_of_deriv_(lipschitz_of_deriv),
          third_deriv_bound_(third_deriv_bound) {
        if (!(domain_.lo < domain_.hi)) throw InvalidGridError("AnalyticFlux: empty domain");
        if (lipschitz_of_deriv_ < 0.0) throw Error("AnalyticFlux: negative Lipschitz constant");
    }

    double value(double x) const override { return value_(x); }
    double deriv(double x) const override { return deriv_(x); }
    Interval domain() const override { return domain_; }

    double lipschitz_of_deriv() const { return lipschitz_of_deriv_; }
    const std::optional<Fn>& second_deriv() const { return second_deriv_; }
    std::optional<double> third_deriv_bound() const { return third_deriv_bound_; }

private:
    Fn value_;
    Fn deriv_;
    std::optional<Fn> second_deriv_;
    Interval domain_;
    double lipschitz_of_deriv_;
    std::optional<double> third_deriv_bound_;
};

/// Uniform node grid with sampled flux values. `anchor` is the reference value
/// stored at node 0 (c1 or c2 in a reconstruction).
class FluxGrid {
public:
    FluxGrid(std::vector<double> nodes, std::vector<double> values);

    /// Uniform grid over `iv` with values.size() nodes.
    static FluxGrid over(Interval iv, std::vector<double> values);

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& values() const { return values_; }
    double spacing() const { return spacing_; }
    double anchor() const { return values_.front(); }
    int interval_count() const { return static_cast<int>(nodes_.size()) - 1; }
    Interval span() const { return {nodes_.front(), nodes_.back()}; }

private:
    std::vector<double> nodes_;
    std::vector<double> values_;
    double spacing_;
};

/// Piecewise quadratic C^1 interpolant with nodal derivatives d_h from the
/// recurrence d_0 = (f(x_1)-f(x_0))/h, d_{h+1} = (2/h)(f(x_{h+1})-f(x_h)) - d_h.
/// On [x_h, x_{h+1}] the piece is
///   ((d_{h+1}-d_h)/(2h)) (x-x_h)^2 + d_h (x-x_h) + values[h].
class QuadC1Interpolant final : public ScalarFlux {
public:
    explicit QuadC1Interpolant(FluxGrid grid);

    /// Construct from per-interval value increments and an anchor. The nodal
    /// derivatives are computed from the increments alone, so two interpolants
    /// built from the same increments share bitwise-identical derivatives
    /// regardless of anchor.
    static QuadC1Interpolant from_increments(Interval span, std::span<const double> increments,
                                             double anchor);

    double value(double x) const override;
    double deriv(double x) const override;
    Interval domain() const override { return grid_.span(); }

    const FluxGrid& grid() const { return grid_; }
    const std::vector<double>& nodal_derivs() const { return nodal_derivs_; }

    /// Average slopes A_h = (values[h+1]-values[h])/h, h = 0..N-1. Read-only,
    /// exposed for the deviation-bound property tests.
    std::vector<double> average_slopes() const;
    /// Deviations Delta_h = d_h - A_h, h = 0..N-1.
    std::vector<double> deviations() const;

    nlohmann::json to_json() const;
    static QuadC1Interpolant from_json(const nlohmann::json& j);

private:
    QuadC1Interpolant(FluxGrid grid, std::vector<double> derivs);
    int locate(double x) const;

    FluxGrid grid_;
    std::vector<double> nodal_derivs_;
};

/// Build the interpolant for a sampled grid via the derivative recurrence.
QuadC1Interpolant build_interpolant(const FluxGrid& grid);

struct LinfErrors {
    double value = 0.0;
    double deriv = 0.0;
};

/// Sup-norm errors |f - f_m| and |f' - f_m'| over `samples_per_interval`
/// uniform points per interval plus every node.
LinfErrors linf_errors(const QuadC1Interpolant& interp, const ScalarFlux& truth,
                       int samples_per_interval);

/// The flux pair (f1, f2) of the coupled system
///   u_t + f1(v)_x = 0,   v_t + f2(u)_x = 0.
struct FluxPair {
    std::shared_ptr<const ScalarFlux> f1;
    std::shared_ptr<const ScalarFlux> f2;

    double f1v(double v) const { return f1->value(v); }
    double f1d(double v) const { return f1->deriv(v); }
    double f2v(double u) const { return f2->value(u); }
    double f2d(double u) const { return f2->deriv(u); }
};

}  // namespace fluxrec

#endif  // FLUXREC_FLUX_HPP
