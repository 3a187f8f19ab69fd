#pragma once

#include <vector>

#include "roughvol/moment_engine.hpp"

namespace roughvol {

struct SweepPoint {
    long n = 0;
    double error = 0.0;
    double error_estimate = 0.0;
    bool used_in_fit = false;
};

// slope is reported as the positive decay exponent: error ~ C n^{-slope}
struct WeakErrorCurve {
    explicit WeakErrorCurve(ModelSpec m) : model(std::move(m)) {}

    ModelSpec model;
    int N = 0;
    std::vector<SweepPoint> points;
    double slope = 0.0;
    double slope_stderr = 0.0;
    bool degenerate_fit = false;
    // residual sums of squares of log|error| against a free power law and
    // against the fixed n^{-1} log n model (intercept only); reported side by
    // side for the boundary Hurst value, never asserted
    double power_rss = 0.0;
    double logmodel_rss = 0.0;
};

struct PredictedRate {
    double rate = 0.0;
    bool log_correction = false;
};

// sorts n_list, computes weak errors (continuous moment evaluated once), and
// fits log|error| vs log n excluding the two smallest n and any point whose
// |error| is within 10x its quadrature error estimate
WeakErrorCurve sweep(const ModelSpec& model, int N, std::vector<long> n_list, double tol);

PredictedRate predicted_rate(double H, double rho);

} // namespace roughvol
