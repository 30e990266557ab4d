#include "fluxrec/flux.hpp"

#include <algorithm>
#include <cmath>

namespace fluxrec {

namespace {
constexpr double kUniformRelTol = 1e-12;
}

FluxGrid::FluxGrid(std::vector<double> nodes, std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
    if (nodes_.size() < 2) throw InvalidGridError("FluxGrid: need at least 2 nodes");
    if (nodes_.size() != values_.size())
        throw InvalidGridError("FluxGrid: nodes/values size mismatch");
    spacing_ = nodes_[1] - nodes_[0];
    if (!(spacing_ > 0.0)) throw InvalidGridError("FluxGrid: nodes not strictly increasing");
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
        const double step = nodes_[i + 1] - nodes_[i];
        if (!(step > 0.0)) throw InvalidGridError("FluxGrid: nodes not strictly increasing");
        if (std::fabs(step - spacing_) > kUniformRelTol * std::max(1.0, std::fabs(spacing_)))
            throw InvalidGridError("FluxGrid: non-uniform spacing");
    }
}

FluxGrid FluxGrid::over(Interval iv, std::vector<double> values) {
    if (values.size() < 2) throw InvalidGridError("FluxGrid::over: need at least 2 values");
    const int n = static_cast<int>(values.size()) - 1;
    std::vector<double> nodes(values.size());
    for (int i = 0; i <= n; ++i)
        nodes[i] = iv.lo + (iv.hi - iv.lo) * (static_cast<double>(i) / n);
    nodes.back() = iv.hi;
    return FluxGrid(std::move(nodes), std::move(values));
}

QuadC1Interpolant::QuadC1Interpolant(FluxGrid grid, std::vector<double> derivs)
    : grid_(std::move(grid)), nodal_derivs_(std::move(derivs)) {}

QuadC1Interpolant::QuadC1Interpolant(FluxGrid grid) : grid_(std::move(grid)) {
    const auto& vals = grid_.values();
    const double h = grid_.spacing();
    nodal_derivs_.resize(vals.size());
    nodal_derivs_[0] = (vals[1] - vals[0]) / h;
    for (std::size_t k = 0; k + 1 < vals.size(); ++k)
        nodal_derivs_[k + 1] = 2.0 * (vals[k + 1] - vals[k]) / h - nodal_derivs_[k];
}

QuadC1Interpolant QuadC1Interpolant::from_increments(Interval span,
                                                     std::span<const double> increments,
                                                     double anchor) {
    if (increments.empty()) throw InvalidGridError("from_increments: no increments");
    const int n = static_cast<int>(increments.size());
    const double h = span.length() / n;
    if (!(h > 0.0)) throw InvalidGridError("from_increments: empty span");

    // Derivatives from increments only: anchor cannot perturb their bits.
    std::vector<double> derivs(n + 1);
    derivs[0] = increments[0] / h;
    for (int k = 0; k < n; ++k) derivs[k + 1] = 2.0 * increments[k] / h - derivs[k];

    std::vector<double> values(n + 1);
    double cum = 0.0;
    values[0] = anchor;
    for (int k = 0; k < n; ++k) {
        cum += increments[k];
        values[k + 1] = anchor + cum;
    }
    return QuadC1Interpolant(FluxGrid::over(span, std::move(values)), std::move(derivs));
}

int QuadC1Interpolant::locate(double x) const {
    const Interval dom = grid_.span();
    if (!dom.contains(x))
        throw OutOfDomainError("QuadC1Interpolant: x = " + fmt_full(x) + " outside [" +
                               fmt_full(dom.lo) + ", " + fmt_full(dom.hi) + "]");
    const int n = grid_.interval_count();
    int k = static_cast<int>(std::floor((x - dom.lo) / grid_.spacing()));
    return std::clamp(k, 0, n - 1);
}

double QuadC1Interpolant::value(double x) const {
    const int k = locate(x);
    const double t = x - grid_.nodes()[k];
    const double h = grid_.spacing();
    const double a = (nodal_derivs_[k + 1] - nodal_derivs_[k]) / (2.0 * h);
    return (a * t + nodal_derivs_[k]) * t + grid_.values()[k];
}

double QuadC1Interpolant::deriv(double x) const {
    const int k = locate(x);
    const double t = x - grid_.nodes()[k];
    const double h = grid_.spacing();
    return (nodal_derivs_[k + 1] - nodal_derivs_[k]) / h * t + nodal_derivs_[k];
}

std::vector<double> QuadC1Interpolant::average_slopes() const {
    const auto& vals = grid_.values();
    const double h = grid_.spacing();
    std::vector<double> out(grid_.interval_count());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = (vals[k + 1] - vals[k]) / h;
    return out;
}

std::vector<double> QuadC1Interpolant::deviations() const {
    auto slopes = average_slopes();
    for (std::size_t k = 0; k < slopes.size(); ++k) slopes[k] = nodal_derivs_[k] - slopes[k];
    return slopes;
}

nlohmann::json QuadC1Interpolant::to_json() const {
    return nlohmann::json{{"nodes", grid_.nodes()},
                          {"values", grid_.values()},
                          {"derivs", nodal_derivs_}};
}

QuadC1Interpolant QuadC1Interpolant::from_json(const nlohmann::json& j) {
    if (!j.contains("nodes") || !j.contains("values") || !j.contains("derivs"))
        throw SchemaError("interpolant JSON: missing nodes/values/derivs");
    auto nodes = j.at("nodes").get<std::vector<double>>();
    auto values = j.at("values").get<std::vector<double>>();
    auto derivs = j.at("derivs").get<std::vector<double>>();
    if (derivs.size() != nodes.size())
        throw SchemaError("interpolant JSON: derivs size mismatch");
    return QuadC1Interpolant(FluxGrid(std::move(nodes), std::move(values)), std::move(derivs));
}

QuadC1Interpolant build_interpolant(const FluxGrid& grid) { return QuadC1Interpolant(grid); }

LinfErrors linf_errors(const QuadC1Interpolant& interp, const ScalarFlux& truth,
                       int samples_per_interval) {
    if (samples_per_interval < 1) throw Error("linf_errors: samples must be positive");
    const Interval idom = interp.domain();
    if (!truth.domain().contains(idom, 1e-12 * std::max(1.0, std::fabs(idom.hi))))
        throw DomainMismatchError("linf_errors: interpolant domain exceeds truth domain");

    LinfErrors err;
    auto probe = [&](double x) {
        err.value = std::max(err.value, std::fabs(interp.value(x) - truth.value(x)));
        err.deriv = std::max(err.deriv, std::fabs(interp.deriv(x) - truth.deriv(x)));
    };
    const auto& nodes = interp.grid().nodes();
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        probe(nodes[k]);
        for (int i = 1; i < samples_per_interval; ++i) {
            const double t = static_cast<double>(i) / samples_per_interval;
            probe(nodes[k] + t * (nodes[k + 1] - nodes[k]));
        }
    }
    probe(nodes.back());
    return err;
}

}  // namespace fluxrec
