#include "roughvol/mc_simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "roughvol/parallel.hpp"
#include "roughvol/rng.hpp"
#include "roughvol/special_functions.hpp"

namespace roughvol {

PathSampler::PathSampler(const ModelSpec& model, long n, std::uint64_t seed)
    : model_(model), grid_(n, model.T), seed_(seed) {
    const long M = grid_.steps();
    increments_ = M + (grid_.integer_horizon() ? 0 : 1);
    Eigen::MatrixXd joint = joint_grid_covariance(grid_, model_.H.value);
    CholeskyResult c = chol_with_jitter(joint);
    chol_ = std::move(c.L);
    jitter_ = c.jitter;
}

void PathSampler::sample(std::uint64_t path_index, GridPath& out) const {
    const long M = grid_.steps();
    const long P = increments_;
    const long D = M + P;
    const std::uint64_t pair = path_index / 2;
    const double sign = (path_index % 2 == 0) ? 1.0 : -1.0;

    Eigen::VectorXd z(D);
    for (long c = 0; c < D; ++c)
        z[c] = sign * rng::counter_normal(seed_, pair, static_cast<std::uint64_t>(c));
    Eigen::VectorXd x = chol_.triangularView<Eigen::Lower>() * z;

    out.hatW.assign(static_cast<std::size_t>(M) + 1, 0.0);
    for (long i = 1; i <= M; ++i) out.hatW[static_cast<std::size_t>(i)] = x[i - 1];
    out.dW.resize(static_cast<std::size_t>(P));
    out.dWperp.resize(static_cast<std::size_t>(P));
    const double n = static_cast<double>(grid_.n);
    for (long j = 0; j < P; ++j) {
        out.dW[static_cast<std::size_t>(j)] = x[M + j];
        double var = (j == M) ? (grid_.T - static_cast<double>(M) / n) : 1.0 / n;
        out.dWperp[static_cast<std::size_t>(j)] =
            std::sqrt(var) *
            sign * rng::counter_normal(seed_, pair, static_cast<std::uint64_t>(D + j));
    }
}

void PathSampler::for_each_path(
    long paths, const std::function<void(std::uint64_t, const GridPath&)>& fn) const {
    GridPath p;
    for (long i = 0; i < paths; ++i) {
        sample(static_cast<std::uint64_t>(i), p);
        fn(static_cast<std::uint64_t>(i), p);
    }
}

std::vector<GridPath> sample_grid_paths(const ModelSpec& model, long n, long paths,
                                        std::uint64_t seed) {
    PathSampler sampler(model, n, seed);
    std::vector<GridPath> out(static_cast<std::size_t>(paths));
    for (long i = 0; i < paths; ++i) sampler.sample(static_cast<std::uint64_t>(i), out[i]);
    return out;
}

double scheme_terminal(const GridPath& path, const ModelSpec& model, long n) {
    GridSpec grid(n, model.T);
    const long P = grid.steps() + (grid.integer_horizon() ? 0 : 1);
    if (path.dW.size() != static_cast<std::size_t>(P) ||
        path.dWperp.size() != static_cast<std::size_t>(P) ||
        path.hatW.size() < static_cast<std::size_t>(P))
        throw std::invalid_argument("scheme_terminal: path dimensions do not match (n, T)");
    const double rho = model.rho;
    const double s = std::sqrt(std::max(0.0, 1.0 - rho * rho));
    double x = 0.0;
    for (long i = 0; i < P; ++i) {
        double vol = model.f(path.hatW[static_cast<std::size_t>(i)]);
        x += vol * (rho * path.dW[static_cast<std::size_t>(i)] +
                    s * path.dWperp[static_cast<std::size_t>(i)]);
    }
    return x;
}

namespace {

// chunked reduction with a fixed chunk grid so the summation order does not
// depend on the number of workers
struct ChunkStats {
    double sum = 0.0;
    double sumsq = 0.0;
};

} // namespace

McEstimate estimate_moment(const ModelSpec& model, int N, long n, long paths,
                           std::uint64_t seed, bool antithetic) {
    if (paths < 2) throw std::invalid_argument("estimate_moment needs paths >= 2");
    long used = paths;
    if (antithetic && used % 2 != 0) ++used; // keep full pairs

    PathSampler sampler(model, n, seed);
    const long groups = antithetic ? used / 2 : used;
    const long chunk = 4096;
    const long nchunks = (groups + chunk - 1) / chunk;
    std::vector<ChunkStats> stats(static_cast<std::size_t>(nchunks));

    parallel_for(nchunks, [&](long clo, long chi) {
        GridPath p;
        for (long c = clo; c < chi; ++c) {
            ChunkStats cs;
            const long glo = c * chunk;
            const long ghi = std::min(groups, glo + chunk);
            for (long g = glo; g < ghi; ++g) {
                double v;
                if (antithetic) {
                    sampler.sample(static_cast<std::uint64_t>(2 * g), p);
                    double x0 = std::pow(scheme_terminal(p, model, n), N);
                    sampler.sample(static_cast<std::uint64_t>(2 * g + 1), p);
                    double x1 = std::pow(scheme_terminal(p, model, n), N);
                    v = 0.5 * (x0 + x1);
                } else {
                    sampler.sample(static_cast<std::uint64_t>(g), p);
                    v = std::pow(scheme_terminal(p, model, n), N);
                }
                cs.sum += v;
                cs.sumsq += v * v;
            }
            stats[static_cast<std::size_t>(c)] = cs;
        }
    });

    double sum = 0.0, sumsq = 0.0;
    for (const ChunkStats& cs : stats) {
        sum += cs.sum;
        sumsq += cs.sumsq;
    }
    const double g = static_cast<double>(groups);
    const double mean = sum / g;
    double var = std::max(0.0, (sumsq - g * mean * mean) / (g - 1.0));

    McEstimate est;
    est.mean = mean;
    est.std_error = std::sqrt(var / g);
    est.paths = used;
    est.seed = seed;
    return est;
}

double normality_check(const ModelSpec& model, long n, long paths, std::uint64_t seed) {
    GridSpec grid(n, model.T);
    if (!grid.integer_horizon())
        throw std::invalid_argument("normality_check requires an integer horizon nT");
    PathSampler sampler(model, n, seed);
    const double scale =
        std::sqrt(std::pow(model.T, 2.0 * model.H.value) / (2.0 * model.H.value));

    std::vector<double> u(static_cast<std::size_t>(paths));
    GridPath p;
    for (long i = 0; i < paths; ++i) {
        sampler.sample(static_cast<std::uint64_t>(i), p);
        u[static_cast<std::size_t>(i)] = normal_cdf(p.hatW.back() / scale);
    }
    std::sort(u.begin(), u.end());

    const double m = static_cast<double>(paths);
    double d = 0.0;
    for (long i = 0; i < paths; ++i) {
        double ui = u[static_cast<std::size_t>(i)];
        d = std::max(d, (i + 1) / m - ui);
        d = std::max(d, ui - i / m);
    }
    // Stephens' finite-sample correction before the asymptotic tail
    const double lambda = d * (std::sqrt(m) + 0.12 + 0.11 / std::sqrt(m));
    return kolmogorov_tail(lambda);
}

} // namespace roughvol
