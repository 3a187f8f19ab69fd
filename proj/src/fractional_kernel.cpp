#include "roughvol/fractional_kernel.hpp"

#include <Eigen/Cholesky>
#include <map>
#include <mutex>

#include "roughvol/parallel.hpp"
#include "roughvol/quadrature.hpp"
#include "roughvol/special_functions.hpp"

namespace roughvol {

double covariance_C(double t, double s, double H, double tol) {
    if (t < 0.0 || s < 0.0) throw std::invalid_argument("covariance_C expects t, s >= 0");
    if (t < s) std::swap(t, s); // one shared code path keeps the function exactly symmetric
    if (s == 0.0) return 0.0;
    if (t == s) return std::pow(t, 2.0 * H) / (2.0 * H);

    const double a = H - 0.5;
    const double p = 1.0 / (a + 1.0);
    const double gap = t - s;
    const double upper = std::pow(s, a + 1.0);
    Level1D level;
    level.a = 0.0;
    level.b = upper;
    level.f = [=](double v) { return p * std::pow(gap + std::pow(v, p), a); };
    AdaptiveResult r = integrate_adaptive(level, tol);
    if (!r.converged)
        throw std::runtime_error("covariance_C: quadrature tolerance unreachable");
    return r.value;
}

namespace {

std::mutex unit_cache_mutex;

// integral over w in [0,2] of w^a (1+w)^a dw, cached per Hurst index
double unit_head_integral(double H) {
    static std::map<long long, double> cache;
    long long key;
    static_assert(sizeof(key) == sizeof(H));
    std::memcpy(&key, &H, sizeof(key));
    std::lock_guard<std::mutex> lock(unit_cache_mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    double a = H - 0.5;
    double v = gj_left_integrate([a](double w) { return std::pow(1.0 + w, a); }, 0.0, 2.0, a, 48);
    cache.emplace(key, v);
    return v;
}

// G(q) = integral over v in [0,1] of v^a (q+v)^a dv for q >= 0
double unit_covariance_integral(double q, double H) {
    const double a = H - 0.5;
    if (q == 0.0) return 1.0 / (2.0 * H);
    if (q < 0.5) {
        // head [0, 2q] by scaling, tail [2q, 1] by a geometric binomial series
        double head = std::pow(q, 2.0 * a + 1.0) * unit_head_integral(H);
        double tail = 0.0;
        double q2 = 2.0 * q;
        double pow_2q = std::pow(q2, 2.0 * H); // (2q)^{2a+1}
        double qk = 1.0, twok = 1.0;
        for (int k = 0; k < 200; ++k) {
            double c = binomial_real(a, k);
            if (k > 0 && c == 0.0) break; // a = 0: every later coefficient vanishes too
            double expo = 2.0 * a + 1.0 - k; // 2H - k, nonzero for k >= 1 once c != 0
            double term = c * (qk - pow_2q * twok) / expo;
            tail += term;
            if (k > 2 && std::fabs(term) < 1e-17 * std::fabs(tail)) break;
            qk *= q;
            twok *= 0.5;
        }
        return head + tail;
    }
    if (q <= 4.0) {
        return gj_left_integrate([&](double v) { return std::pow(q + v, a); }, 0.0, 1.0, a, 48);
    }
    // large gap: expand (q+v)^a around v/q = 0
    double sum = 0.0, qk = 1.0;
    for (int k = 0; k < 120; ++k) {
        double term = binomial_real(a, k) * qk / (a + k + 1.0);
        sum += term;
        if (k > 2 && std::fabs(term) < 1e-17 * std::fabs(sum)) break;
        qk /= q;
    }
    return std::pow(q, a) * sum;
}

} // namespace

double covariance_fast(double t, double s, double H) {
    if (t < 0.0 || s < 0.0) throw std::invalid_argument("covariance_fast expects t, s >= 0");
    if (t < s) std::swap(t, s);
    if (s == 0.0) return 0.0;
    if (t == s) return std::pow(t, 2.0 * H) / (2.0 * H);
    double q = (t - s) / s;
    return std::pow(s, 2.0 * H) * unit_covariance_integral(q, H);
}

namespace {

// R(q1, q2) = integral over v in [0,1] of (q1-v)^a (q2-v)^a dv for integers q1 >= q2 >= 1
double unit_panel_integral(long q1, long q2, double a) {
    if (q2 == 1) {
        if (q1 == 1) return 1.0 / (2.0 * a + 1.0);
        double c1 = static_cast<double>(q1);
        return gj_right_integrate([=](double v) { return std::pow(c1 - v, a); }, 0.0, 1.0, a, 32);
    }
    double c1 = static_cast<double>(q1), c2 = static_cast<double>(q2);
    return gl_integrate([=](double v) { return std::pow(c1 - v, a) * std::pow(c2 - v, a); }, 0.0,
                        1.0, 32);
}

} // namespace

Eigen::MatrixXd grid_hatW_covariance(const GridSpec& grid, double H) {
    const long M = grid.steps();
    const double a = H - 0.5;
    Eigen::MatrixXd cov(M, M);
    // C(i/n, j/n) = n^{-2H} sum_{m=0}^{j-1} R(g+1+m, 1+m) with g = i - j; the sum
    // telescopes along each diagonal, so one prefix-sum pass per gap suffices.
    const double scale = std::pow(static_cast<double>(grid.n), -2.0 * H);
    parallel_for(static_cast<std::size_t>(M), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t gs = lo; gs < hi; ++gs) {
            long g = static_cast<long>(gs);
            double prefix = 0.0;
            for (long m = 0; m + g < M; ++m) {
                prefix += unit_panel_integral(g + 1 + m, 1 + m, a);
                long j = m + 1, i = g + j; // 1-based grid indices
                cov(i - 1, j - 1) = scale * prefix;
                cov(j - 1, i - 1) = cov(i - 1, j - 1);
            }
        }
    });
    return cov;
}

Eigen::MatrixXd joint_grid_covariance(const GridSpec& grid, double H) {
    const long M = grid.steps();
    const bool partial = !grid.integer_horizon();
    const long increments = partial ? M + 1 : M;
    const long dim = M + increments;
    const double n = static_cast<double>(grid.n);

    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim, dim);
    cov.topLeftCorner(M, M) = grid_hatW_covariance(grid, H);
    for (long i = 1; i <= M; ++i) {
        for (long j = 1; j <= M; ++j) {
            double c = integrated_K(i / n, (j - 1) / n, j / n, H);
            cov(i - 1, M + j - 1) = c;
            cov(M + j - 1, i - 1) = c;
        }
        // the partial increment spans [M/n, T], after every sampled hatW time
        if (partial) {
            double c = integrated_K(i / n, M / n, grid.T, H);
            cov(i - 1, M + M) = c;
            cov(M + M, i - 1) = c;
        }
    }
    for (long j = 0; j < M; ++j) cov(M + j, M + j) = 1.0 / n;
    if (partial) cov(dim - 1, dim - 1) = grid.T - M / n;
    return cov;
}

CholeskyResult chol_with_jitter(const Eigen::MatrixXd& A) {
    const double scale = A.trace() / static_cast<double>(A.rows());
    double jitter = 0.0;
    for (int attempt = 0; attempt <= 5; ++attempt) {
        Eigen::MatrixXd work = A;
        if (jitter > 0.0)
            work.diagonal().array() += jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(work);
        if (llt.info() == Eigen::Success) return {llt.matrixL(), jitter};
        jitter = jitter == 0.0 ? 1e-12 * scale : 10.0 * jitter;
    }
    throw std::runtime_error("chol_with_jitter: matrix not positive definite within jitter budget");
}

} // namespace roughvol
