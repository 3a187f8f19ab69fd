#pragma once

#include <string>
#include <vector>

#include "roughvol/fractional_kernel.hpp"
#include "roughvol/vol_fn.hpp"

namespace roughvol {

// Model X_t = int_0^t f(hatW_s) dB_s with B = rho W + sqrt(1-rho^2) W_perp and
// hatW the Liouville fBm driven by W. X_0 = 0 by convention.
struct ModelSpec {
    Hurst H;
    double rho;
    double T;
    VolFn f;

    ModelSpec(Hurst H_, double rho_, double T_, VolFn f_)
        : H(H_), rho(rho_), T(T_), f(std::move(f_)) {
        if (!(std::fabs(rho) <= 1.0)) throw std::invalid_argument("|rho| must be <= 1");
        if (!(T > 0.0)) throw std::invalid_argument("T must be positive");
    }
};

enum class MomentMethod { quadrature, wick_oracle, monte_carlo };

struct WordContribution {
    std::string word;
    double value = 0.0;
    double error = 0.0;
};

struct MomentReport {
    int N = 0;
    double value = 0.0;
    double error_estimate = 0.0;
    MomentMethod method = MomentMethod::quadrature;
    std::vector<WordContribution> terms; // per-word contributions, summing to value
};

// E[X_T^N]: sum over nontrivial words of weighted length N of iterated simplex
// integrals; each level uses adaptive panels with Gauss-Jacobi weighting on the
// panel touching t_{j-1} when the kernel edge alpha(j) = j-1 is singular there.
MomentReport continuous_moment(const ModelSpec& model, int N, double tol);

// E[(X_T^n)^N] through the discretized representation: kernel edges become
// K(eta(t), s) and the Gaussian law is frozen at eta(t). Every axis is split at
// the grid points, where the integrand factorizes per axis in closed form and
// only runs of tied cells need (low-dimensional) ordered quadrature.
MomentReport discrete_moment_quadrature(const ModelSpec& model, int N, long n, double tol);

// Exact discrete moment: multinomial expansion of the scheme's terminal value
// and Isserlis/analytic Gaussian expectations over the joint grid law.
// Budget-guarded: N <= 4 and floor(n*T) <= 64.
MomentReport discrete_moment_wick(const ModelSpec& model, int N, long n);

inline bool wick_budget_ok(const ModelSpec& model, int N, long n) {
    return (model.f.family == VolFn::Family::linear ||
            model.f.family == VolFn::Family::exponential) &&
           N <= 4 && GridSpec(n, model.T).steps() <= 64;
}

struct WeakErrorReport {
    double value = 0.0;          // E[X_T^N] - E[(X_T^n)^N]
    double error_estimate = 0.0; // numerical, not statistical
    MomentReport continuous;
    MomentReport discrete;
    std::vector<WordContribution> word_differences; // matched per-word rows when available
};

// weak error with the exact oracle used whenever the budget allows, the
// discretized-representation quadrature otherwise
WeakErrorReport weak_error(const ModelSpec& model, int N, long n, double tol);

} // namespace roughvol
