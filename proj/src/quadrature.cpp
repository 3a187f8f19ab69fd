#include "roughvol/quadrature.hpp"

#include <Eigen/Eigenvalues>

namespace roughvol {

namespace {

// monic three-term recurrence coefficients for Jacobi weight (1-x)^alpha (1+x)^beta
void jacobi_recurrence(int n, double alpha, double beta, Eigen::VectorXd& a, Eigen::VectorXd& b,
                       double& mu0) {
    a.resize(n);
    b.resize(n); // b[0] unused in the matrix
    double ab = alpha + beta;
    mu0 = std::pow(2.0, ab + 1.0) *
          std::exp(std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));
    a[0] = (beta - alpha) / (ab + 2.0);
    b[0] = mu0;
    for (int k = 1; k < n; ++k) {
        double s = 2.0 * k + ab;
        a[k] = (beta * beta - alpha * alpha) / (s * (s + 2.0));
        b[k] = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) /
               (s * s * (s + 1.0) * (s - 1.0));
    }
}

QuadRule golub_welsch(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double mu0) {
    int n = static_cast<int>(a.size());
    Eigen::VectorXd diag = a;
    Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
    for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(b[k]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    QuadRule rule;
    rule.nodes = es.eigenvalues();
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double v0 = es.eigenvectors()(0, i);
        rule.weights[i] = mu0 * v0 * v0;
    }
    return rule;
}

} // namespace

QuadRule compute_gauss_legendre(int n) { return compute_gauss_jacobi(n, 0.0, 0.0); }

QuadRule compute_gauss_jacobi(int n, double alpha, double beta) {
    if (n < 1) throw std::invalid_argument("gauss rule needs n >= 1");
    if (alpha <= -1.0 || beta <= -1.0)
        throw std::invalid_argument("jacobi exponents must exceed -1");
    Eigen::VectorXd a, b;
    double mu0;
    jacobi_recurrence(n, alpha, beta, a, b, mu0);
    return golub_welsch(a, b, mu0);
}

QuadRule compute_gauss_hermite(int n) {
    if (n < 1) throw std::invalid_argument("gauss rule needs n >= 1");
    Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd b(n);
    b[0] = std::sqrt(M_PI);
    for (int k = 1; k < n; ++k) b[k] = 0.5 * k;
    return golub_welsch(a, b, std::sqrt(M_PI));
}

namespace {

std::mutex cache_mutex;

std::uint64_t double_key(double x) {
    std::uint64_t k;
    std::memcpy(&k, &x, sizeof(k));
    return k;
}

} // namespace

const QuadRule& gauss_legendre(int n) {
    static std::map<int, QuadRule> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
    return it->second;
}

const QuadRule& gauss_jacobi_right(int n, double alpha) {
    static std::map<std::pair<int, std::uint64_t>, QuadRule> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto key = std::make_pair(n, double_key(alpha));
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, compute_gauss_jacobi(n, alpha, 0.0)).first;
    return it->second;
}

const QuadRule& gauss_hermite(int n) {
    static std::map<int, QuadRule> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_hermite(n)).first;
    return it->second;
}

namespace {

constexpr int kPanelNodes = 16;

struct Panel {
    double lo, hi;
    double value;
    double error;
};

struct PanelWorse {
    bool operator()(const Panel& x, const Panel& y) const {
        if (x.error != y.error) return x.error < y.error;
        return x.lo > y.lo; // deterministic tie-break
    }
};

} // namespace

AdaptiveResult integrate_adaptive(const Level1D& level, double tol, long max_panels) {
    AdaptiveResult res;
    if (!(level.b > level.a)) return res;
    const bool weighted = level.alpha != 0.0;

    auto eval_panel = [&](double lo, double hi) -> double {
        res.evals += kPanelNodes;
        if (weighted && hi == level.b)
            return gj_right_integrate(level.smooth, lo, hi, level.alpha, kPanelNodes);
        return gl_integrate(level.f, lo, hi, kPanelNodes);
    };

    auto make_panel = [&](double lo, double hi) -> Panel {
        double whole = eval_panel(lo, hi);
        double mid = 0.5 * (lo + hi);
        double halves = eval_panel(lo, mid) + eval_panel(mid, hi);
        // both estimates are high order; their difference bounds the coarse one
        return Panel{lo, hi, halves, std::fabs(whole - halves)};
    };

    std::priority_queue<Panel, std::vector<Panel>, PanelWorse> queue;
    queue.push(make_panel(level.a, level.b));
    double total_err = queue.top().error;
    long panels = 1;

    while (total_err > tol && panels < max_panels) {
        Panel worst = queue.top();
        if (worst.error <= 0.0) break;
        queue.pop();
        total_err -= worst.error;
        double mid = 0.5 * (worst.lo + worst.hi);
        if (mid <= worst.lo || mid >= worst.hi) { // width exhausted
            queue.push(Panel{worst.lo, worst.hi, worst.value, 0.0});
            continue;
        }
        Panel left = make_panel(worst.lo, mid);
        Panel right = make_panel(mid, worst.hi);
        total_err += left.error + right.error;
        queue.push(left);
        queue.push(right);
        ++panels;
    }

    // fixed-order reduction: drain into a vector sorted by position
    std::vector<Panel> all;
    all.reserve(queue.size());
    while (!queue.empty()) {
        all.push_back(queue.top());
        queue.pop();
    }
    std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.lo < y.lo; });
    double value = 0.0, err = 0.0;
    for (const Panel& p : all) {
        value += p.value;
        err += p.error;
    }
    res.value = value;
    res.error = err;
    res.converged = err <= tol;
    return res;
}

} // namespace roughvol
