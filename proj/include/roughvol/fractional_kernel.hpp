#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace roughvol {

// Hurst index in the rough regime (0, 1/2].
struct Hurst {
    double value;
    explicit Hurst(double v) : value(v) {
        if (!(v > 0.0 && v <= 0.5)) throw std::invalid_argument("Hurst index must lie in (0, 1/2]");
    }
};

// Uniform grid with step 1/n on [0, T].
struct GridSpec {
    long n;
    double T;
    GridSpec(long n_, double T_) : n(n_), T(T_) {
        if (n < 1) throw std::invalid_argument("grid needs n >= 1");
        if (!(T > 0.0)) throw std::invalid_argument("grid needs T > 0");
    }
    long steps() const; // floor(n*T) with snapping of near-integer products
    bool integer_horizon() const;
};

// floor(n*t) as an integer index, snapping products that sit within a relative
// 1e-9 of an integer. The projection eta is discontinuous, so naive floor of a
// rounded product would misclassify points intended to be grid points.
inline long eta_index(double t, long n) {
    if (t < 0.0) throw std::invalid_argument("eta expects t >= 0");
    double nt = static_cast<double>(n) * t;
    double r = std::nearbyint(nt);
    if (std::fabs(nt - r) <= 1e-9 * std::max(1.0, std::fabs(nt))) return static_cast<long>(r);
    return static_cast<long>(std::floor(nt));
}

inline double eta(double t, long n) {
    return static_cast<double>(eta_index(t, n)) / static_cast<double>(n);
}

inline long GridSpec::steps() const { return eta_index(T, n); }
inline bool GridSpec::integer_horizon() const {
    return static_cast<double>(steps()) / static_cast<double>(n) == T;
}

// Liouville kernel (t-s)^{H-1/2} on {t > s}, zero elsewhere.
template <typename Scalar>
Scalar liouville_K(Scalar t, Scalar s, Scalar H) {
    if (!(t > s)) return Scalar(0);
    return std::pow(t - s, H - Scalar(0.5));
}

template <typename Scalar>
Scalar discrete_K(Scalar t, Scalar s, Scalar H, long n) {
    return liouville_K(Scalar(eta(static_cast<double>(t), n)), s, H);
}

// closed-form primitive: integral over s in [a,b] of K(t_upper, s) ds
template <typename Scalar>
Scalar integrated_K(Scalar t_upper, Scalar a, Scalar b, Scalar H) {
    if (!(a <= b) || a < Scalar(0)) throw std::invalid_argument("integrated_K expects 0 <= a <= b");
    Scalar p = H + Scalar(0.5);
    auto pos_pow = [p](Scalar x) { return x > Scalar(0) ? std::pow(x, p) : Scalar(0); };
    return (pos_pow(t_upper - a) - pos_pow(t_upper - b)) / p;
}

// covariance of the Liouville fBm: adaptive quadrature after the substitution
// u -> s - v^{1/(H+1/2)} (bounded integrand), closed form on the diagonal
double covariance_C(double t, double s, double H, double tol = 1e-10);

// same quantity through the scaling identity C(t,s) = s^{2H} * C(t/s, 1) and
// series/fixed-rule evaluation of the unit integral; cheap enough for inner loops
double covariance_fast(double t, double s, double H);

// Covariance of (hatW_{i/n})_{i=1..M} with itself, M = floor(n*T): assembled from
// exact per-panel rules and prefix sums, O(M^2) total work.
Eigen::MatrixXd grid_hatW_covariance(const GridSpec& grid, double H);

// Joint covariance of (hatW_{i/n})_{i=1..M} and the Brownian increments
// (W_{j/n}-W_{(j-1)/n})_{j=1..M}, plus a final partial increment over [M/n, T]
// when the horizon is not a grid point. Layout: hatW block first.
Eigen::MatrixXd joint_grid_covariance(const GridSpec& grid, double H);

struct CholeskyResult {
    Eigen::MatrixXd L;
    double jitter = 0.0;
};

// LLT with escalating diagonal jitter 1e-12 .. 1e-8 (relative to trace/dim);
// throws when even the largest jitter cannot repair the factorization.
CholeskyResult chol_with_jitter(const Eigen::MatrixXd& A);

} // namespace roughvol
