#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "roughvol/fractional_kernel.hpp"
#include "roughvol/moment_engine.hpp"

namespace roughvol {

// One sampled path of the driving noise on the grid {i/n}. hatW holds the
// Liouville process at every grid point 0..M (hatW[0] = 0, hatW[i] = hat W_{i/n},
// M = floor(nT)); the extra top entry makes hat W_T available on integer
// horizons. dW / dWperp hold one entry per scheme increment, including the
// clipped final increment [M/n, T] when nT is not an integer.
struct GridPath {
    std::vector<double> hatW;
    std::vector<double> dW;
    std::vector<double> dWperp;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long paths = 0;
    std::uint64_t seed = 0;
};

// Exact joint Gaussian sampler: one Cholesky factor of the joint covariance of
// (hat W on the grid, Brownian increments), then L z per path with z addressed
// by a counter generator on (seed, pair index, component). Paths come in
// antithetic pairs: path 2k uses z_k, path 2k+1 uses -z_k.
class PathSampler {
public:
    PathSampler(const ModelSpec& model, long n, std::uint64_t seed);

    long increments() const { return increments_; }
    long grid_points() const { return grid_.steps(); }
    const GridSpec& grid() const { return grid_; }
    double applied_jitter() const { return jitter_; }

    void sample(std::uint64_t path_index, GridPath& out) const;

    // deterministic order regardless of thread count
    void for_each_path(long paths,
                       const std::function<void(std::uint64_t, const GridPath&)>& fn) const;

private:
    ModelSpec model_;
    GridSpec grid_;
    long increments_;
    Eigen::MatrixXd chol_;
    double jitter_;
    std::uint64_t seed_;
};

std::vector<GridPath> sample_grid_paths(const ModelSpec& model, long n, long paths,
                                        std::uint64_t seed);

// left-point scheme terminal value: sum_i f(hat W_{i/n}) (rho dW_i + sqrt(1-rho^2) dWperp_i)
double scheme_terminal(const GridPath& path, const ModelSpec& model, long n);

McEstimate estimate_moment(const ModelSpec& model, int N, long n, long paths,
                           std::uint64_t seed, bool antithetic = true);

// Kolmogorov-Smirnov statistic of hat W_T / sqrt(T^{2H}/(2H)) against N(0,1),
// with the finite-sample correction applied before the tail evaluation.
// Returns the p-value. Requires an integer horizon (hat W_T on the grid).
double normality_check(const ModelSpec& model, long n, long paths, std::uint64_t seed);

} // namespace roughvol
