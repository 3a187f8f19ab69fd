#pragma once

#include <Eigen/Dense>
#include <functional>
#include <unordered_map>
#include <vector>

#include "roughvol/vol_fn.hpp"

namespace roughvol {

// Multivariate Gaussian law. The mean is zero in the moment representation but
// nonzero means arise internally (exponential-family shift trick), so it is kept.
struct GaussianLaw {
    Eigen::MatrixXd sigma;
    Eigen::VectorXd mean;

    explicit GaussianLaw(Eigen::MatrixXd s)
        : sigma(std::move(s)), mean(Eigen::VectorXd::Zero(sigma.rows())) {}
    GaussianLaw(Eigen::MatrixXd s, Eigen::VectorXd m) : sigma(std::move(s)), mean(std::move(m)) {}
    int dim() const { return static_cast<int>(sigma.rows()); }
};

enum class ExpectMethod { analytic, wick, hermite };

// Memoized Isserlis/Wick recursion on exponent vectors under a fixed law; the
// cache pays off when many monomial moments share one covariance (moment
// oracles, repeated psi evaluations).
class MomentTable {
public:
    MomentTable(Eigen::MatrixXd sigma, Eigen::VectorXd mean);
    explicit MomentTable(Eigen::MatrixXd sigma);

    // E[prod_j x_j^{p_j}] via Stein's recursion
    // E[x_v g] = mu_v E[g] + sum_u Sigma_vu E[dg/dx_u]
    double moment(const std::vector<int>& exponents);

private:
    struct Hash {
        std::size_t operator()(const std::vector<int>& v) const;
    };
    Eigen::MatrixXd sigma_;
    Eigen::VectorXd mean_;
    bool zero_mean_;
    std::unordered_map<std::vector<int>, double, Hash> memo_;
};

// E[prod_j x_j^{p_j}] for x ~ N(mean, sigma): Isserlis/Wick pairing extended to a
// nonzero mean, evaluated by a memoized recursion on the exponent vector.
double gaussian_moment(const std::vector<int>& exponents, const Eigen::MatrixXd& sigma,
                       const Eigen::VectorXd& mean);

inline double gaussian_moment(const std::vector<int>& exponents, const Eigen::MatrixXd& sigma) {
    return gaussian_moment(exponents, sigma, Eigen::VectorXd::Zero(sigma.rows()));
}

// E[e^{a.x} * prod_j x_j^{p_j}] via the change-of-measure shift
// E[e^{a.x} g(x)] = e^{a.mu + a.Sigma.a/2} E[g(z)], z ~ N(mu + Sigma a, Sigma).
double gaussian_exp_moment(const Eigen::VectorXd& a, const std::vector<int>& exponents,
                           const Eigen::MatrixXd& sigma, const Eigen::VectorXd& mean);

// E[psi(x)] for x ~ law, where psi is an elementary product of f-derivatives.
//   analytic: closed forms (linear -> Wick monomials, exponential -> log-normal)
//   wick:     linear family only; identical pairing enumeration as analytic
//   hermite:  tensorized Gauss-Hermite after eigen-whitening, nodes 20->80 doubling
double expect_psi(const ElementaryPsi& psi, const GaussianLaw& law, const VolFn& f,
                  ExpectMethod method, double tol = 1e-10);

// residual of the Gaussian derivative identity
//   d/dt E[g(W(t))] = 1/2 sum_{k,l} d/dt Sigma_kl(t) E[d_k d_l g]
// for a monomial g given by `exponents`; both sides via central differences in t.
double check_derivative_identity(const std::vector<int>& exponents,
                                 const std::function<Eigen::MatrixXd(double)>& sigma_path,
                                 double t);

} // namespace roughvol
