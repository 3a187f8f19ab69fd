#include "roughvol/weak_error_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace roughvol {

WeakErrorCurve sweep(const ModelSpec& model, int N, std::vector<long> n_list, double tol) {
    if (n_list.size() < 3) throw std::invalid_argument("sweep needs at least 3 grid sizes");
    std::sort(n_list.begin(), n_list.end());
    if (std::adjacent_find(n_list.begin(), n_list.end()) != n_list.end())
        throw std::invalid_argument("sweep: duplicate n values");

    WeakErrorCurve curve(model);
    curve.N = N;

    continuous_moment(model, N, tol); // warm the cache once for the whole sweep
    for (long n : n_list) {
        WeakErrorReport r = weak_error(model, N, n, tol);
        SweepPoint p;
        p.n = n;
        p.error = r.value;
        p.error_estimate = r.error_estimate;
        curve.points.push_back(p);
    }

    // fit window: drop the two smallest n (pre-asymptotic) and anything at the
    // quadrature tolerance floor
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        SweepPoint& p = curve.points[i];
        if (i < 2) continue;
        if (!(std::fabs(p.error) > 10.0 * p.error_estimate)) continue;
        p.used_in_fit = true;
        xs.push_back(std::log(static_cast<double>(p.n)));
        ys.push_back(std::log(std::fabs(p.error)));
    }

    if (xs.size() < 2) {
        curve.degenerate_fit = true;
        curve.slope = std::numeric_limits<double>::quiet_NaN();
        curve.slope_stderr = std::numeric_limits<double>::quiet_NaN();
        return curve;
    }

    const std::size_t k = xs.size();
    double xbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        xbar += xs[i];
        ybar += ys[i];
    }
    xbar /= static_cast<double>(k);
    ybar /= static_cast<double>(k);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sxx += (xs[i] - xbar) * (xs[i] - xbar);
        sxy += (xs[i] - xbar) * (ys[i] - ybar);
    }
    const double b = sxy / sxx; // log|e| ~ a + b log n, b < 0 for decaying error
    curve.slope = -b;

    double rss = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        double r = ys[i] - (ybar + b * (xs[i] - xbar));
        rss += r * r;
    }
    curve.power_rss = rss;
    curve.slope_stderr = k > 2 ? std::sqrt(rss / (static_cast<double>(k) - 2.0) / sxx) : 0.0;

    // fixed-shape alternative: |e| = C n^{-1} log n, only the intercept free
    double zbar = 0.0;
    std::vector<double> zs(k);
    for (std::size_t i = 0; i < k; ++i) {
        zs[i] = -xs[i] + std::log(xs[i]); // log(n^{-1} log n)
        zbar += zs[i];
    }
    zbar /= static_cast<double>(k);
    double lrss = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        double r = (ys[i] - ybar) - (zs[i] - zbar);
        lrss += r * r;
    }
    curve.logmodel_rss = lrss;
    return curve;
}

PredictedRate predicted_rate(double H, double rho) {
    PredictedRate out;
    if (rho == 0.0) {
        out.rate = 1.0;
        out.log_correction = false;
        return out;
    }
    out.rate = std::min(3.0 * H + 0.5, 1.0);
    out.log_correction = std::fabs(H - 1.0 / 6.0) < 1e-12;
    return out;
}

} // namespace roughvol
