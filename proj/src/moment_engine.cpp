#include "roughvol/moment_engine.hpp"

#include <functional>
#include <map>
#include <mutex>

#include "roughvol/gaussian_engine.hpp"
#include "roughvol/io.hpp"
#include "roughvol/quadrature.hpp"
#include "roughvol/word_calculus.hpp"

namespace roughvol {

namespace {

double pow_pos(double x, double e) { return x > 0.0 ? std::pow(x, e) : 0.0; }

ExpectMethod method_for(const VolFn& f) {
    return f.family == VolFn::Family::shifted_tanh ? ExpectMethod::hermite
                                                   : ExpectMethod::analytic;
}

// ---------------------------------------------------------------------------
// continuous path: nested adaptive quadrature over T > t_1 > ... > t_m > 0
// ---------------------------------------------------------------------------

class ContinuousTermIntegrator {
public:
    ContinuousTermIntegrator(const IntegrandTerm& term, const ModelSpec& model, double tol)
        : term_(term),
          model_(model),
          m_(term.m),
          a_(model.H.value - 0.5),
          tol_(tol),
          times_(m_),
          sigma_(Eigen::MatrixXd::Zero(m_, m_)) {}

    double run() {
        err_ = 0.0;
        double v = integrate_axis(0);
        // inner levels were integrated to fixed absolute tolerances; account for
        // them over the (bounded) volume of the outer region
        double vol = 1.0;
        for (int l = 1; l < m_; ++l) {
            vol *= model_.T / l;
            err_ += axis_tol(l) * vol;
        }
        return v;
    }
    double error() const { return err_; }
    bool converged() const { return converged_; }

private:
    double axis_tol(int axis) const {
        return tol_ * std::pow(0.25, m_ - 1 - axis) / std::max(1.0, std::pow(model_.T, axis));
    }

    double eval_expectation() {
        GaussianLaw law(sigma_);
        return expect_psi(term_.psi, law, model_.f, method_for(model_.f), 1e-10);
    }

    double inner_value(int axis, double x) {
        times_[axis] = x;
        const double H = model_.H.value;
        for (int k = 0; k < axis; ++k) {
            double c = covariance_fast(times_[k], x, H);
            sigma_(k, axis) = c;
            sigma_(axis, k) = c;
        }
        sigma_(axis, axis) = std::pow(x, 2.0 * H) / (2.0 * H);
        if (axis == m_ - 1) return eval_expectation();
        return integrate_axis(axis + 1);
    }

    // integrates the variable t_{axis+1} over (0, t_axis); the kernel factor
    // attached to this axis is (t_q - x)^a with q = alpha(axis), singular at the
    // upper endpoint exactly when the edge points at the previous axis
    double integrate_axis(int axis) {
        const double upper = axis == 0 ? model_.T : times_[axis - 1];
        const int q = term_.alpha[static_cast<std::size_t>(axis)]; // 1-based target
        const bool edge = q > 0;
        const bool singular = edge && q == axis && a_ != 0.0;

        Level1D level;
        level.a = 0.0;
        level.b = upper;
        if (singular) {
            level.alpha = a_;
            level.smooth = [this, axis](double x) { return inner_value(axis, x); };
            level.f = [this, axis, upper](double x) {
                return pow_pos(upper - x, a_) * inner_value(axis, x);
            };
        } else if (edge) {
            level.f = [this, axis, q](double x) {
                return pow_pos(times_[q - 1] - x, a_) * inner_value(axis, x);
            };
        } else {
            level.f = [this, axis](double x) { return inner_value(axis, x); };
        }
        AdaptiveResult res = integrate_adaptive(level, axis_tol(axis), 2500);
        if (axis == 0) {
            err_ += res.error;
            converged_ = converged_ && res.converged;
        }
        return res.value;
    }

    const IntegrandTerm& term_;
    const ModelSpec& model_;
    int m_;
    double a_;
    double tol_;
    std::vector<double> times_;
    Eigen::MatrixXd sigma_;
    double err_ = 0.0;
    bool converged_ = true;
};

std::vector<Word> nontrivial_words(int N) {
    std::vector<Word> out;
    for (Word& w : enumerate_words(N))
        if (!is_trivial(w)) out.push_back(std::move(w));
    return out;
}

std::string moment_cache_key(const ModelSpec& model, int N, double tol) {
    std::string k = format_double(model.H.value, 17);
    k += "|" + format_double(model.rho, 17);
    k += "|" + format_double(model.T, 17);
    k += "|" + model.f.describe();
    k += "|" + std::to_string(N);
    k += "|" + format_double(tol, 17);
    return k;
}

} // namespace

MomentReport continuous_moment(const ModelSpec& model, int N, double tol) {
    if (N < 1) throw std::invalid_argument("continuous_moment needs N >= 1");
    if (N > 6) throw std::invalid_argument("continuous_moment: quadrature path limited to N <= 6");

    static std::map<std::string, MomentReport> cache;
    static std::mutex cache_mutex;
    const std::string key = moment_cache_key(model, N, tol);
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }

    MomentReport report;
    report.N = N;
    report.method = MomentMethod::quadrature;

    std::vector<Word> words = nontrivial_words(N);
    const double tol_word = tol / std::max<std::size_t>(1, words.size());
    for (const Word& w : words) {
        std::vector<IntegrandTerm> terms = expand_word(w, model.f, model.rho, false);
        WordContribution row;
        row.word = w.letters;
        double coeff_sum = 0.0;
        for (const IntegrandTerm& t : terms) coeff_sum += std::fabs(t.coefficient);
        for (const IntegrandTerm& t : terms) {
            if (t.coefficient == 0.0) continue;
            double tol_term = tol_word * std::fabs(t.coefficient) / coeff_sum;
            ContinuousTermIntegrator integrator(t, model, tol_term / std::fabs(t.coefficient));
            double v = integrator.run();
            row.value += t.coefficient * v;
            row.error += std::fabs(t.coefficient) * integrator.error();
        }
        report.value += row.value;
        report.error_estimate += row.error;
        report.terms.push_back(std::move(row));
    }

    std::lock_guard<std::mutex> lock(cache_mutex);
    cache.emplace(key, report);
    return report;
}

// ---------------------------------------------------------------------------
// discrete path: exact per-cell factorization of the discretized representation
// ---------------------------------------------------------------------------

namespace {

// ordered integral over lo < t_r < ... < t_1 < cap of prod_i (A_i - t_i)^a,
// A_i = 0 meaning a constant factor; singular0 marks A_0 == cap exactly
double ordered_run_integral(const std::vector<double>& A, const std::vector<bool>& singular,
                            double a, double lo, double cap0, double tol, double& err_accum) {
    std::function<double(std::size_t, double)> rec = [&](std::size_t idx, double cap) -> double {
        if (idx == A.size()) return 1.0;
        if (!(cap > lo)) return 0.0;
        Level1D level;
        level.a = lo;
        level.b = cap;
        const double Ai = A[idx];
        const bool weighted = idx == 0 && singular[idx] && a != 0.0;
        if (weighted) {
            level.alpha = a;
            level.smooth = [&, idx](double x) { return rec(idx + 1, x); };
            level.f = [&, idx, cap](double x) { return pow_pos(cap - x, a) * rec(idx + 1, x); };
        } else if (Ai > 0.0) {
            level.f = [&, idx, Ai](double x) { return pow_pos(Ai - x, a) * rec(idx + 1, x); };
        } else {
            level.f = [&, idx](double x) { return rec(idx + 1, x); };
        }
        AdaptiveResult res = integrate_adaptive(level, tol * std::pow(0.25, idx), 200);
        if (idx == 0) err_accum += res.error + tol;
        return res.value;
    };
    return rec(0, cap0);
}

struct DiscreteTermResult {
    double value = 0.0;
    double error = 0.0;
};

DiscreteTermResult integrate_discrete_term(const IntegrandTerm& term, const ModelSpec& model,
                                           const GridSpec& grid, const Eigen::MatrixXd& gridcov,
                                           double tol) {
    const int m = term.m;
    const long M = grid.steps();
    const bool partial = !grid.integer_horizon();
    const long C = M + (partial ? 1 : 0);
    const double n = static_cast<double>(grid.n);
    const double a = model.H.value - 0.5;
    const ExpectMethod method = method_for(model.f);

    double cells_est = 1.0;
    for (int i = 0; i < m; ++i) cells_est *= static_cast<double>(C + i) / (i + 1);
    if (cells_est > 1e7)
        throw std::runtime_error("discrete_moment_quadrature: cell budget exceeded");
    const double tol_cell = tol / std::max(1.0, cells_est);

    DiscreteTermResult out;
    std::vector<long> c(m);
    Eigen::MatrixXd sigma(m, m);

    auto cell_bounds = [&](long cell, double& lo, double& hi) {
        lo = cell / n;
        hi = std::min((cell + 1) / n, grid.T);
    };

    std::function<void(int, long)> visit = [&](int pos, long maxc) {
        if (pos == m) {
            for (int j = 0; j < m; ++j) {
                for (int k = 0; k <= j; ++k) {
                    double v = (c[j] == 0 || c[k] == 0)
                                   ? 0.0
                                   : gridcov(c[j] - 1, c[k] - 1);
                    sigma(j, k) = v;
                    sigma(k, j) = v;
                }
            }
            GaussianLaw law(sigma);
            double phi = expect_psi(term.psi, law, model.f, method, 1e-10);
            if (phi == 0.0) return;

            double cell_factor = 1.0, cell_err = 0.0;
            int j = 0;
            while (j < m && cell_factor != 0.0) {
                int run_end = j;
                while (run_end + 1 < m && c[run_end + 1] == c[j]) ++run_end;
                double lo, hi;
                cell_bounds(c[j], lo, hi);
                if (run_end == j) {
                    int q = term.alpha[static_cast<std::size_t>(j)];
                    cell_factor *= q == 0
                                       ? (hi - lo)
                                       : integrated_K(c[q - 1] / n, lo, hi, model.H.value);
                } else {
                    int r = run_end - j + 1;
                    bool all_const = true;
                    std::vector<double> A(static_cast<std::size_t>(r), 0.0);
                    std::vector<bool> sing(static_cast<std::size_t>(r), false);
                    for (int i = 0; i < r; ++i) {
                        int q = term.alpha[static_cast<std::size_t>(j + i)];
                        if (q == 0) continue;
                        all_const = false;
                        A[static_cast<std::size_t>(i)] = c[q - 1] / n;
                        // exact endpoint singularity only when the edge points at
                        // the next finer cell and the cell is not horizon-clipped
                        sing[static_cast<std::size_t>(i)] =
                            (c[q - 1] == c[j] + 1) && (hi == (c[j] + 1) / n);
                    }
                    if (all_const) {
                        double w = hi - lo, volume = 1.0;
                        for (int i = 1; i <= r; ++i) volume *= w / i;
                        cell_factor *= volume;
                    } else {
                        double run_err = 0.0;
                        double v = ordered_run_integral(A, sing, a, lo, hi,
                                                        tol_cell / std::max(1.0, std::fabs(phi)),
                                                        run_err);
                        cell_factor *= v;
                        cell_err += run_err;
                    }
                }
                j = run_end + 1;
            }
            out.value += phi * cell_factor;
            out.error += std::fabs(phi) * cell_err;
            return;
        }
        for (long v = maxc; v >= 0; --v) {
            int q = term.alpha[static_cast<std::size_t>(pos)];
            if (q > 0 && c[q - 1] == v) continue; // frozen kernel vanishes on tied cells
            c[pos] = v;
            visit(pos + 1, v);
        }
    };
    visit(0, C - 1);
    return out;
}

} // namespace

MomentReport discrete_moment_quadrature(const ModelSpec& model, int N, long n, double tol) {
    if (N < 1) throw std::invalid_argument("discrete_moment_quadrature needs N >= 1");
    if (N > 6) throw std::invalid_argument("discrete_moment_quadrature: limited to N <= 6");
    GridSpec grid(n, model.T);
    Eigen::MatrixXd gridcov = grid_hatW_covariance(grid, model.H.value);

    MomentReport report;
    report.N = N;
    report.method = MomentMethod::quadrature;

    std::vector<Word> words = nontrivial_words(N);
    const double tol_word = tol / std::max<std::size_t>(1, words.size());
    for (const Word& w : words) {
        std::vector<IntegrandTerm> terms = expand_word(w, model.f, model.rho, true);
        WordContribution row;
        row.word = w.letters;
        for (const IntegrandTerm& t : terms) {
            if (t.coefficient == 0.0) continue;
            DiscreteTermResult r = integrate_discrete_term(
                t, model, grid, gridcov, tol_word / std::max<std::size_t>(1, terms.size()));
            row.value += t.coefficient * r.value;
            row.error += std::fabs(t.coefficient) * r.error;
        }
        report.value += row.value;
        report.error_estimate += row.error;
        report.terms.push_back(std::move(row));
    }
    return report;
}

// ---------------------------------------------------------------------------
// exact oracle via multinomial expansion over the joint grid Gaussian vector
// ---------------------------------------------------------------------------

namespace {

double double_factorial_odd(int k) { // (k-1)!! for even k
    double v = 1.0;
    for (int i = k - 1; i > 1; i -= 2) v *= i;
    return v;
}

// enumerate multisets {j_1 <= ... <= j_N} over slots 1..P
void visit_multisets(int N, int P, std::vector<int>& pick,
                     const std::function<void(const std::vector<int>&)>& fn) {
    if (static_cast<int>(pick.size()) == N) {
        fn(pick);
        return;
    }
    int start = pick.empty() ? 1 : pick.back();
    for (int j = start; j <= P; ++j) {
        pick.push_back(j);
        visit_multisets(N, P, pick, fn);
        pick.pop_back();
    }
}

} // namespace

MomentReport discrete_moment_wick(const ModelSpec& model, int N, long n) {
    if (!wick_budget_ok(model, N, n))
        throw std::invalid_argument(
            "discrete_moment_wick: supports linear/exponential families with N <= 4 and "
            "floor(n*T) <= 64");
    GridSpec grid(n, model.T);
    const long M = grid.steps();
    const bool partial = !grid.integer_horizon();
    const int P = static_cast<int>(M + (partial ? 1 : 0));
    const int D = static_cast<int>(M) + P;

    Eigen::MatrixXd joint = joint_grid_covariance(grid, model.H.value);
    MomentTable table(joint);
    const double rho = model.rho;
    const double s = std::sqrt(std::max(0.0, 1.0 - rho * rho));
    const VolFn& f = model.f;
    const bool linear = f.family == VolFn::Family::linear;
    const double f_at_zero = f.deriv(0, 0.0);

    auto perp_var = [&](int j) { // 1-based increment slot
        return (partial && j == P) ? (grid.T - static_cast<double>(M) / n)
                                   : 1.0 / static_cast<double>(n);
    };

    double nfact = 1.0;
    for (int i = 2; i <= N; ++i) nfact *= i;

    double total = 0.0;
    std::vector<int> pick;
    visit_multisets(N, P, pick, [&](const std::vector<int>& js) {
        // slot multiplicities
        std::vector<std::pair<int, int>> slots; // (j, k_j)
        for (int v : js) {
            if (!slots.empty() && slots.back().first == v)
                slots.back().second += 1;
            else
                slots.emplace_back(v, 1);
        }
        double coeff = nfact;
        for (auto& [j, k] : slots)
            for (int i = 2; i <= k; ++i) coeff /= i;

        // volatility factors at left points (j-1)/n; slot 1 sits at time zero
        std::vector<int> hat_exp(static_cast<std::size_t>(D), 0);
        Eigen::VectorXd avec = Eigen::VectorXd::Zero(D);
        double const_factor = 1.0;
        bool dead = false;
        for (auto& [j, k] : slots) {
            if (j == 1) {
                if (f_at_zero == 0.0) {
                    dead = true;
                    break;
                }
                const_factor *= std::pow(f_at_zero, k);
            } else if (linear) {
                const_factor *= std::pow(f.c1, k);
                hat_exp[static_cast<std::size_t>(j - 2)] += k;
            } else {
                const_factor *= std::pow(f.c2, k);
                avec[j - 2] += f.c3 * static_cast<double>(k);
            }
        }
        if (dead) return;

        // binomial split of each increment into the correlated and orthogonal parts
        std::function<void(std::size_t, double, std::vector<int>&)> split =
            [&](std::size_t si, double weight, std::vector<int>& exps) {
                if (weight == 0.0) return;
                if (si == slots.size()) {
                    double g = linear ? table.moment(exps)
                                      : gaussian_exp_moment(avec, exps, joint,
                                                            Eigen::VectorXd::Zero(D));
                    total += coeff * const_factor * weight * g;
                    return;
                }
                auto [j, k] = slots[si];
                double v = perp_var(j);
                for (int b = 0; b <= k; ++b) {
                    int perp = k - b;
                    if (perp % 2 != 0) continue;
                    double w = weight;
                    double binom = 1.0;
                    for (int i = 0; i < b; ++i) binom = binom * (k - i) / (i + 1);
                    w *= binom * std::pow(rho, b) * std::pow(s, perp) *
                         double_factorial_odd(perp) * std::pow(v, perp / 2);
                    if (w == 0.0) continue;
                    exps[static_cast<std::size_t>(M + j - 1)] = b;
                    split(si + 1, w, exps);
                    exps[static_cast<std::size_t>(M + j - 1)] = 0;
                }
            };
        std::vector<int> exps = hat_exp;
        split(0, 1.0, exps);
    });

    MomentReport report;
    report.N = N;
    report.method = MomentMethod::wick_oracle;
    report.value = total;
    report.error_estimate = 0.0;
    report.terms.push_back({"total", total, 0.0});
    return report;
}

WeakErrorReport weak_error(const ModelSpec& model, int N, long n, double tol) {
    WeakErrorReport out;
    out.continuous = continuous_moment(model, N, tol);
    if (wick_budget_ok(model, N, n)) {
        out.discrete = discrete_moment_wick(model, N, n);
    } else {
        out.discrete = discrete_moment_quadrature(model, N, n, tol);
    }
    out.value = out.continuous.value - out.discrete.value;
    out.error_estimate = out.continuous.error_estimate + out.discrete.error_estimate;
    if (out.discrete.method == MomentMethod::quadrature) {
        for (const WordContribution& c : out.continuous.terms) {
            for (const WordContribution& d : out.discrete.terms) {
                if (c.word == d.word) {
                    out.word_differences.push_back(
                        {c.word, c.value - d.value, c.error + d.error});
                    break;
                }
            }
        }
    }
    return out;
}

} // namespace roughvol
