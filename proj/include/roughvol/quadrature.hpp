#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <map>
#include <mutex>
#include <queue>
#include <stdexcept>
#include <vector>

namespace roughvol {

struct QuadRule {
    Eigen::VectorXd nodes;   // on [-1, 1] for Legendre/Jacobi, on R for Hermite
    Eigen::VectorXd weights;
};

// Gauss rules via Golub-Welsch: nodes are eigenvalues of the (symmetrized)
// three-term-recurrence matrix, weights are mu0 * (first eigenvector entry)^2.
QuadRule compute_gauss_legendre(int n);
QuadRule compute_gauss_jacobi(int n, double alpha, double beta);
QuadRule compute_gauss_hermite(int n); // weight exp(-x^2)

const QuadRule& gauss_legendre(int n);
const QuadRule& gauss_jacobi_right(int n, double alpha); // weight (1-x)^alpha
const QuadRule& gauss_hermite(int n);

// integral over [a,b] of a smooth integrand, fixed n-node Gauss-Legendre
template <class F>
double gl_integrate(const F& f, double a, double b, int n) {
    const QuadRule& r = gauss_legendre(n);
    double c = 0.5 * (a + b), h = 0.5 * (b - a), sum = 0.0;
    for (int i = 0; i < r.nodes.size(); ++i) sum += r.weights[i] * f(c + h * r.nodes[i]);
    return h * sum;
}

// integral over [a,b] of h(t) * (b-t)^alpha with h smooth; the algebraic factor at
// the right endpoint is absorbed into a Gauss-Jacobi rule.
template <class F>
double gj_right_integrate(const F& h, double a, double b, double alpha, int n) {
    const QuadRule& r = gauss_jacobi_right(n, alpha);
    double half = 0.5 * (b - a);
    double scale = std::pow(half, alpha) * half;
    double sum = 0.0;
    for (int i = 0; i < r.nodes.size(); ++i) {
        double t = b - half * (1.0 - r.nodes[i]);
        sum += r.weights[i] * h(t);
    }
    return scale * sum;
}

// integral over [a,b] of h(t) * (t-a)^alpha with h smooth (mirror of the above)
template <class F>
double gj_left_integrate(const F& h, double a, double b, double alpha, int n) {
    return gj_right_integrate([&](double t) { return h(a + b - t); }, a, b, alpha, n);
}

struct AdaptiveResult {
    double value = 0.0;
    double error = 0.0;
    long evals = 0;
    bool converged = true;
};

// One integration axis. If alpha != 0 the integrand carries a factor (b-t)^alpha
// and `smooth` must return f(t) * (b-t)^{-alpha}; panels adjacent to b then use
// Gauss-Jacobi so the singular weight is integrated exactly.
struct Level1D {
    std::function<double(double)> f;
    double a = 0.0, b = 1.0;
    double alpha = 0.0;
    std::function<double(double)> smooth;
};

// Globally adaptive bisection with a worst-panel-first queue (16-node panels).
// Deterministic: ties in the queue are broken by interval position.
AdaptiveResult integrate_adaptive(const Level1D& level, double tol, long max_panels = 4000);

} // namespace roughvol
