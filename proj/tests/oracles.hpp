#ifndef FLUXREC_TEST_ORACLES_HPP
#define FLUXREC_TEST_ORACLES_HPP

#include <functional>

// Brute-force reference computations for the forward solver, kept independent
// of the library's solution path: Heun integration instead of RK4, grid scans
// with bisection refinement instead of Newton.
namespace oracles {

struct OracleFlux {
    std::function<double(double)> f1, f1d, f2, f2d;
};

struct OracleShock {
    double u_r, v_r, s;
    double residual;  // max RH residual at the reported point
};

// 2-D grid scan of (v_r, s) minimizing the max Rankine-Hugoniot residual for a
// fixed right-state u_r, refined by shrinking scans around the best cell.
OracleShock shock_scan(const OracleFlux& fp, double ul, double vl, double ur_target,
                       double vr_lo, double vr_hi, double s_lo, double s_hi);

struct OracleMiddle {
    double u, v;
    double residual;  // |u prediction mismatch| of the best candidate
};

// Nested 1-D scans over the two wave-curve parameters: the outer scan runs
// over the 1-wave u-parameter, the inner march predicts states along each
// wave curve (integral curve or Hugoniot locus chosen by the characteristic
// speed trend along the oracle's own path).
OracleMiddle middle_state(const OracleFlux& fp, double ul, double vl, double ur, double vr,
                          double window);

}  // namespace oracles

#endif
