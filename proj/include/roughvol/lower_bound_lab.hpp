#pragma once

#include <vector>

#include "roughvol/moment_engine.hpp"

namespace roughvol {

// The three signed constants behind the cubic-moment lower bound, computable
// either by direct integration of their defining improper integrals or through
// Euler Beta closed forms. b2 only exists as a convergent integral for
// H < 1/6; above that the integral entry is NaN and in_lower_regime is false.
struct BConstants {
    double b1 = 0.0;
    double b2 = 0.0;
    double b3 = 0.0;
    bool in_lower_regime = true;
};

struct C2C3 {
    double c2 = 0.0;
    double c3 = 0.0;
};

// integrand of the first constant, exposed for direct pointwise checks
double b1_integrand(double H, double v);

BConstants b_constants_integral(double H, double tol);
BConstants b_constants_beta(double H);
C2C3 c2_c3(double H);

struct LowerBoundPoint {
    long n = 0;
    double error = 0.0;
    double error_estimate = 0.0;
    double rescaled = 0.0; // n^{3H+1/2} * error
};

struct LowerBoundCurve {
    double H = 0.0;
    std::vector<LowerBoundPoint> points;
    double c2 = 0.0;
    double c3 = 0.0;
    double min_rescaled_tail = 0.0; // min over the last three points
    double median_rescaled = 0.0;
};

// rescaled third-moment error for the extremal model f(x) = x, rho = 1, T = 1;
// rejects H outside the sub-1/6 regime
LowerBoundCurve empirical_lower_bound(double H, std::vector<long> n_list, double tol);

struct ConstantsRow {
    double H = 0.0;
    double b1 = 0.0, b2 = 0.0, b3 = 0.0;
    double c2 = 0.0, c3 = 0.0;
};

std::vector<ConstantsRow> constants_sweep(double h_start, double h_end, int count);

} // namespace roughvol
