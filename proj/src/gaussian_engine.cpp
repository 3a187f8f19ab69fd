#include "roughvol/gaussian_engine.hpp"

#include <Eigen/Eigenvalues>
#include <mutex>
#include <unordered_map>

#include "roughvol/quadrature.hpp"

namespace roughvol {

namespace {

// derivatives of 1+tanh(x) as polynomials in u = tanh(x):
// d/dx p(u) = p'(u) (1 - u^2)
const std::vector<double>& tanh_poly(int order) {
    static std::vector<std::vector<double>> table = {{1.0, 1.0}};
    static std::mutex m;
    std::lock_guard<std::mutex> lock(m);
    while (static_cast<int>(table.size()) <= order) {
        const std::vector<double>& p = table.back();
        std::vector<double> dp(p.size() >= 2 ? p.size() - 1 : 1, 0.0);
        for (std::size_t k = 1; k < p.size(); ++k) dp[k - 1] = k * p[k];
        std::vector<double> q(dp.size() + 2, 0.0);
        for (std::size_t k = 0; k < dp.size(); ++k) {
            q[k] += dp[k];
            q[k + 2] -= dp[k];
        }
        table.push_back(std::move(q));
    }
    return table[order];
}

} // namespace

double VolFn::deriv(int d, double x) const {
    if (d < 0) throw std::invalid_argument("derivative order must be >= 0");
    if (d > max_derivative_order())
        throw std::invalid_argument("derivative order exceeds the family's supported order");
    switch (family) {
        case Family::linear:
            if (d == 0) return c1 * x;
            if (d == 1) return c1;
            return 0.0;
        case Family::exponential:
            return c2 * std::pow(c3, d) * std::exp(c3 * x);
        case Family::shifted_tanh: {
            const std::vector<double>& p = tanh_poly(d);
            double u = std::tanh(x), acc = 0.0;
            for (std::size_t k = p.size(); k-- > 0;) acc = acc * u + p[k];
            return acc;
        }
    }
    return 0.0;
}

std::string VolFn::describe() const {
    char buf[64];
    switch (family) {
        case Family::linear:
            std::snprintf(buf, sizeof(buf), "linear:%g", c1);
            break;
        case Family::exponential:
            std::snprintf(buf, sizeof(buf), "exp:%g,%g", c2, c3);
            break;
        case Family::shifted_tanh:
            std::snprintf(buf, sizeof(buf), "tanh");
            break;
    }
    return buf;
}

std::size_t MomentTable::Hash::operator()(const std::vector<int>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (int x : v) {
        h ^= static_cast<std::size_t>(x) + 0x9E3779B97F4A7C15ull;
        h *= 1099511628211ull;
    }
    return h;
}

MomentTable::MomentTable(Eigen::MatrixXd sigma, Eigen::VectorXd mean)
    : sigma_(std::move(sigma)), mean_(std::move(mean)), zero_mean_(mean_.isZero(0.0)) {}

MomentTable::MomentTable(Eigen::MatrixXd sigma)
    : sigma_(std::move(sigma)), mean_(Eigen::VectorXd::Zero(sigma_.rows())), zero_mean_(true) {}

double MomentTable::moment(const std::vector<int>& p) {
    int degree = 0;
    for (int e : p) degree += e;
    if (degree == 0) return 1.0;
    if (zero_mean_ && degree % 2 == 1) return 0.0;
    auto it = memo_.find(p);
    if (it != memo_.end()) return it->second;

    int v = 0;
    while (p[v] == 0) ++v;
    std::vector<int> rest = p;
    rest[v] -= 1;
    double acc = mean_[v] == 0.0 ? 0.0 : mean_[v] * moment(rest);
    for (int u = 0; u < static_cast<int>(rest.size()); ++u) {
        if (rest[u] == 0 || sigma_(v, u) == 0.0) continue;
        std::vector<int> next = rest;
        next[u] -= 1;
        acc += sigma_(v, u) * rest[u] * moment(next);
    }
    memo_.emplace(p, acc);
    return acc;
}

double gaussian_moment(const std::vector<int>& exponents, const Eigen::MatrixXd& sigma,
                       const Eigen::VectorXd& mean) {
    if (static_cast<int>(exponents.size()) != sigma.rows())
        throw std::invalid_argument("gaussian_moment: exponent/covariance size mismatch");
    MomentTable ev(sigma, mean);
    return ev.moment(exponents);
}

double gaussian_exp_moment(const Eigen::VectorXd& a, const std::vector<int>& exponents,
                           const Eigen::MatrixXd& sigma, const Eigen::VectorXd& mean) {
    double log_prefactor = a.dot(mean) + 0.5 * a.dot(sigma * a);
    Eigen::VectorXd shifted = mean + sigma * a;
    return std::exp(log_prefactor) * gaussian_moment(exponents, sigma, shifted);
}

namespace {

double expect_psi_linear(const ElementaryPsi& psi, const GaussianLaw& law, const VolFn& f) {
    double coeff = 1.0;
    std::vector<int> p(psi.factors.size(), 0);
    for (std::size_t j = 0; j < psi.factors.size(); ++j) {
        for (int d : psi.factors[j]) {
            if (d >= 2) return 0.0;
            coeff *= f.c1;
            if (d == 0) p[j] += 1;
        }
    }
    return coeff * gaussian_moment(p, law.sigma, law.mean);
}

double expect_psi_exponential(const ElementaryPsi& psi, const GaussianLaw& law, const VolFn& f) {
    double coeff = 1.0;
    Eigen::VectorXd a = Eigen::VectorXd::Zero(law.dim());
    for (std::size_t j = 0; j < psi.factors.size(); ++j) {
        for (int d : psi.factors[j]) {
            coeff *= f.c2 * std::pow(f.c3, d);
            a[static_cast<int>(j)] += f.c3;
        }
    }
    return coeff * std::exp(a.dot(law.mean) + 0.5 * a.dot(law.sigma * a));
}

double expect_psi_hermite(const ElementaryPsi& psi, const GaussianLaw& law, const VolFn& f,
                          double tol) {
    const int m = law.dim();
    if (m > 8) throw std::invalid_argument("expect_psi: hermite path limited to dimension 8");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(law.sigma);
    if (es.info() != Eigen::Success) throw std::runtime_error("expect_psi: eigen decomposition failed");
    double lam_max = std::max(1.0, es.eigenvalues().maxCoeff());
    std::vector<int> active;
    for (int i = 0; i < m; ++i)
        if (es.eigenvalues()[i] > 1e-12 * lam_max) active.push_back(i);
    const int r = static_cast<int>(active.size());
    Eigen::MatrixXd L(m, r);
    for (int k = 0; k < r; ++k)
        L.col(k) = es.eigenvectors().col(active[k]) * std::sqrt(es.eigenvalues()[active[k]]);

    auto g = [&](const Eigen::VectorXd& x) {
        double acc = 1.0;
        for (std::size_t j = 0; j < psi.factors.size(); ++j)
            for (int d : psi.factors[j]) acc *= f.deriv(d, x[static_cast<int>(j)]);
        return acc;
    };

    auto tensor_quad = [&](int nn) {
        const QuadRule& rule = gauss_hermite(nn);
        const double norm = std::pow(M_PI, -0.5 * r);
        std::vector<int> idx(r, 0);
        double sum = 0.0;
        Eigen::VectorXd y(r), x(m);
        while (true) {
            double w = 1.0;
            for (int k = 0; k < r; ++k) {
                w *= rule.weights[idx[k]];
                y[k] = std::sqrt(2.0) * rule.nodes[idx[k]];
            }
            x = law.mean + L * y;
            sum += w * g(x);
            int k = 0;
            for (; k < r; ++k) {
                if (++idx[k] < nn) break;
                idx[k] = 0;
            }
            if (k == r) break;
        }
        return norm * sum;
    };

    if (r == 0) return g(law.mean);
    double prev = tensor_quad(20);
    for (int nn = 40; nn <= 80; nn *= 2) {
        double cur = tensor_quad(nn);
        if (std::fabs(cur - prev) <= tol * std::max(1.0, std::fabs(cur))) return cur;
        prev = cur;
    }
    return prev;
}

} // namespace

double expect_psi(const ElementaryPsi& psi, const GaussianLaw& law, const VolFn& f,
                  ExpectMethod method, double tol) {
    if (psi.variables() != law.dim())
        throw std::invalid_argument("expect_psi: psi/law dimension mismatch");
    switch (method) {
        case ExpectMethod::analytic:
            if (f.family == VolFn::Family::linear) return expect_psi_linear(psi, law, f);
            if (f.family == VolFn::Family::exponential) return expect_psi_exponential(psi, law, f);
            throw std::invalid_argument("expect_psi: no analytic path for this family");
        case ExpectMethod::wick:
            if (f.family != VolFn::Family::linear)
                throw std::invalid_argument("expect_psi: wick requires the linear family");
            return expect_psi_linear(psi, law, f);
        case ExpectMethod::hermite:
            return expect_psi_hermite(psi, law, f, tol);
    }
    throw std::logic_error("expect_psi: unknown method");
}

double check_derivative_identity(const std::vector<int>& exponents,
                                 const std::function<Eigen::MatrixXd(double)>& sigma_path,
                                 double t) {
    const int m = static_cast<int>(exponents.size());
    const double h = 1e-5 * std::max(1.0, std::fabs(t));
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(m);

    double phi_plus = gaussian_moment(exponents, sigma_path(t + h), zero);
    double phi_minus = gaussian_moment(exponents, sigma_path(t - h), zero);
    double lhs = (phi_plus - phi_minus) / (2.0 * h);

    Eigen::MatrixXd sigma = sigma_path(t);
    Eigen::MatrixXd dsigma = (sigma_path(t + h) - sigma_path(t - h)) / (2.0 * h);
    double rhs = 0.0;
    for (int k = 0; k < m; ++k) {
        for (int l = 0; l < m; ++l) {
            if (dsigma(k, l) == 0.0) continue;
            std::vector<int> p = exponents;
            double coeff;
            if (k == l) {
                if (p[k] < 2) continue;
                coeff = static_cast<double>(p[k]) * (p[k] - 1);
                p[k] -= 2;
            } else {
                if (p[k] < 1 || p[l] < 1) continue;
                coeff = static_cast<double>(p[k]) * p[l];
                p[k] -= 1;
                p[l] -= 1;
            }
            rhs += 0.5 * dsigma(k, l) * coeff * gaussian_moment(p, sigma, zero);
        }
    }
    return std::fabs(lhs - rhs);
}

} // namespace roughvol
