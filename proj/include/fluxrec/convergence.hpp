#ifndef FLUXREC_CONVERGENCE_HPP
#define FLUXREC_CONVERGENCE_HPP

#include "fluxrec/reconstruct.hpp"

namespace fluxrec {

struct ConvergenceRow {
    int m = 0;
    double delta = 0.0;
    double eta = 0.0;
    double err_f1 = 0.0;
    double err_f1_deriv = 0.0;
    double err_f2 = 0.0;
    double err_f2_deriv = 0.0;
    // log2 ratios against the previous row; absent on the first row and when
    // an error sits at roundoff level
    std::optional<double> order_f1, order_f1_deriv, order_f2, order_f2_deriv;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    std::string csv() const;  // includes log2(eta) / log2(err) plot columns
};

struct ConvergenceParams {
    double T = 1.0;
    int samples_per_fan = 512;
    int err_samples_per_interval = 1000;
    bool known_anchors = true;
};

/// Reconstruction error table over a list of dyadic levels. Rows are
/// independent and run concurrently; the output order is fixed by m_list.
ConvergenceTable run_convergence(const FluxPair& truth, const GridSpec& box,
                                 const std::vector<int>& m_list, const SolverConfig& cfg,
                                 const ConvergenceParams& params);

/// Piecewise constant initial data: values[i] on (breakpoints[i-1], breakpoints[i]).
struct PiecewiseConstantFn {
    std::vector<double> breakpoints;  // strictly increasing
    std::vector<State> values;        // breakpoints.size() + 1 entries

    State at(double x) const;
    void validate() const;
};

struct FvParams {
    Interval domain{-1.0, 1.0};
    int cells = 400;
    double cfl = 0.45;
};

struct FvSolution {
    Interval domain;
    double dx = 0.0;
    std::vector<State> cell_avg;
};

/// First-order Godunov scheme: the numerical flux at every interface is the
/// exact flux of the interface Riemann solution sampled at x/t = 0. Interface
/// solves run with a reduced-accuracy curve integration; the scheme's own
/// first-order error dominates. Copy (outflow) boundaries.
FvSolution evolve_fv(const FluxPair& fp, const PiecewiseConstantFn& initial, double T,
                     const FvParams& params, const SolverConfig& cfg);

/// L1 distance between two solutions on the same mesh.
double l1_distance(const FvSolution& a, const FvSolution& b);

struct StabilityResult {
    int m = 0;
    double L1_distance = 0.0;
    double bound_rhs = 0.0;    // L1 eta + L2 delta
    double empirical_C = 0.0;  // L1_distance / (T bound_rhs)
    int cells_used = 0;
    double mesh_change = 0.0;  // relative distance change at the accepted mesh
};

/// Evolve the same initial data under the true and the reconstructed flux
/// pair on one mesh, refining the mesh until the measured L1 distance changes
/// by less than 5%; L1_const/L2_const are the Lipschitz constants of f1'/f2'
/// on the grid box.
StabilityResult stability_experiment(const FluxPair& truth, double L1_const, double L2_const,
                                     const GridSpec& grid, double T,
                                     const PiecewiseConstantFn& initial, const SolverConfig& cfg,
                                     const FvParams& base_mesh, int max_cells = 25600);

}  // namespace fluxrec

#endif  // FLUXREC_CONVERGENCE_HPP
