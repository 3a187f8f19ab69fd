#include "roughvol/lower_bound_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "roughvol/quadrature.hpp"
#include "roughvol/special_functions.hpp"

namespace roughvol {

namespace {

constexpr double kRegimeEdge = 1.0 / 6.0;

void check_h_open_half(double H) {
    if (!(H > 0.0) || !(H < 0.5))
        throw std::invalid_argument("lower-bound constants need H in (0, 1/2)");
}

double smooth_piece(const std::function<double(double)>& f, double lo, double hi, double tol) {
    Level1D level;
    level.f = f;
    level.a = lo;
    level.b = hi;
    AdaptiveResult r = integrate_adaptive(level, tol, 2000);
    return r.value;
}

struct TailSum {
    double value = 0.0;
    bool converged = false;
};

// sum of c_k * V^{e0 - k} / (k + d) style tails; term(k) supplied by caller
TailSum sum_tail(const std::function<double(int)>& term, int k0, double tol) {
    TailSum out;
    for (int k = k0; k < 600; ++k) {
        double t = term(k);
        out.value += t;
        if (k >= k0 + 4 && std::fabs(t) < tol * 1e-3) {
            out.converged = true;
            break;
        }
    }
    return out;
}

} // namespace

double b1_integrand(double H, double v) {
    const double a = H - 0.5;
    const double left = std::pow(v, a);
    const double right = v > 1.0 ? std::pow(v - 1.0, a) : 0.0;
    return -left * (left - right);
}

BConstants b_constants_integral(double H, double tol) {
    check_h_open_half(H);
    const double a = H - 0.5;
    const double p = 1.0 / (H + 0.5);

    BConstants out;
    out.in_lower_regime = H < kRegimeEdge;

    for (double V = 8.0;; V *= 2.0) {
        // B1: exact head on (0,1), desingularized middle, binomial tail
        double head1 = -1.0 / (2.0 * H);
        double mid_pow = -(std::pow(V, 2.0 * H) - 1.0) / (2.0 * H);
        double mid_sing =
            p *
            smooth_piece([&](double u) { return std::pow(1.0 + std::pow(u, p), a); }, 0.0,
                         std::pow(V - 1.0, H + 0.5), tol / 10.0);
        TailSum t1 = sum_tail(
            [&](int k) {
                return binomial_real(a, k) * (k % 2 == 0 ? 1.0 : -1.0) *
                       std::pow(V, 2.0 * H - k) / (k - 2.0 * H);
            },
            1, tol);

        // B3: same pattern for the bounded-tail factor (1+v)^{H-3/2}
        double head3 =
            p *
            smooth_piece([&](double u) { return std::pow(1.0 + std::pow(u, p), a - 1.0); },
                         0.0, 1.0, tol / 10.0);
        double mid3 = smooth_piece(
            [&](double v) { return std::pow(v, a) * std::pow(1.0 + v, a - 1.0); }, 1.0, V,
            tol / 10.0);
        TailSum t3 = sum_tail(
            [&](int k) {
                return binomial_real(a - 1.0, k) * std::pow(V, 2.0 * H - 1.0 - k) /
                       (k + 1.0 - 2.0 * H);
            },
            0, tol);

        bool ok = t1.converged && t3.converged;

        // B2 integral only converges below the 1/6 edge
        double b2 = std::numeric_limits<double>::quiet_NaN();
        if (out.in_lower_regime) {
            auto g = [&](double v) {
                return std::pow(v, 2.0 * H) - std::pow(v + 1.0, 2.0 * H);
            };
            double head2 = p *
                           smooth_piece([&](double u) { return g(std::pow(u, p)); }, 0.0,
                                        1.0, tol / 10.0);
            double mid2 = smooth_piece([&](double v) { return std::pow(v, a) * g(v); }, 1.0,
                                       V, tol / 10.0);
            TailSum t2 = sum_tail(
                [&](int k) {
                    return -binomial_real(2.0 * H, k) * std::pow(V, 3.0 * H + 0.5 - k) /
                           (k - 3.0 * H - 0.5);
                },
                1, tol);
            ok = ok && t2.converged;
            b2 = head2 + mid2 + t2.value;
        }

        if (!ok && V < 1e6) continue;

        out.b1 = head1 + mid_pow + mid_sing + t1.value;
        out.b2 = b2;
        out.b3 = (H - 0.5) * (head3 + mid3 + t3.value);
        return out;
    }
}

BConstants b_constants_beta(double H) {
    check_h_open_half(H);
    if (std::fabs(H - kRegimeEdge) < 1e-9)
        throw std::invalid_argument("b_constants_beta: Beta pole at the 1/6 edge");
    BConstants out;
    out.in_lower_regime = H < kRegimeEdge;
    out.b1 = std::pow(2.0, -1.0 - 2.0 * H) * beta_signed(H + 0.5, -H);
    out.b2 = -beta_signed(-3.0 * H - 0.5, 0.5 + H);
    out.b3 = (H - 0.5) * beta_signed(1.0 - 2.0 * H, H + 0.5);
    return out;
}

C2C3 c2_c3(double H) {
    if (!(H > 0.0) || !(H < kRegimeEdge))
        throw std::invalid_argument("c2_c3 needs H in (0, 1/6)");
    BConstants b = b_constants_beta(H);
    C2C3 out;
    out.c2 = b.b1 * b.b2 / (3.0 * H + 1.5);
    out.c3 = -b.b3 * 0.5 *
             (std::pow(2.0, 3.0 * H - 0.5) / (0.5 - 3.0 * H) + 2.0 / (1.0 - 2.0 * H));
    return out;
}

LowerBoundCurve empirical_lower_bound(double H, std::vector<long> n_list, double tol) {
    if (!(H > 0.0) || !(H < kRegimeEdge))
        throw std::invalid_argument("empirical_lower_bound needs H in (0, 1/6)");
    if (n_list.size() < 3)
        throw std::invalid_argument("empirical_lower_bound needs at least 3 grid sizes");
    std::sort(n_list.begin(), n_list.end());

    ModelSpec model{Hurst(H), 1.0, 1.0, VolFn::linear(1.0)};
    LowerBoundCurve curve;
    curve.H = H;
    C2C3 c = c2_c3(H);
    curve.c2 = c.c2;
    curve.c3 = c.c3;

    const double rate = 3.0 * H + 0.5;
    for (long n : n_list) {
        WeakErrorReport r = weak_error(model, 3, n, tol);
        LowerBoundPoint p;
        p.n = n;
        p.error = r.value;
        p.error_estimate = r.error_estimate;
        p.rescaled = std::pow(static_cast<double>(n), rate) * r.value;
        curve.points.push_back(p);
    }

    std::vector<double> rescaled;
    for (const LowerBoundPoint& p : curve.points) rescaled.push_back(p.rescaled);
    double tail_min = rescaled.back();
    for (std::size_t i = rescaled.size() - std::min<std::size_t>(3, rescaled.size());
         i < rescaled.size(); ++i)
        tail_min = std::min(tail_min, rescaled[i]);
    curve.min_rescaled_tail = tail_min;

    std::sort(rescaled.begin(), rescaled.end());
    const std::size_t m = rescaled.size();
    curve.median_rescaled =
        m % 2 == 1 ? rescaled[m / 2] : 0.5 * (rescaled[m / 2 - 1] + rescaled[m / 2]);
    return curve;
}

std::vector<ConstantsRow> constants_sweep(double h_start, double h_end, int count) {
    if (count < 1 || !(h_start > 0.0) || !(h_end < kRegimeEdge) || !(h_start <= h_end))
        throw std::invalid_argument("constants_sweep needs 0 < start <= end < 1/6");
    std::vector<ConstantsRow> rows;
    for (int i = 0; i < count; ++i) {
        double H = count == 1
                       ? h_start
                       : h_start + (h_end - h_start) * static_cast<double>(i) / (count - 1);
        BConstants b = b_constants_beta(H);
        C2C3 c = c2_c3(H);
        rows.push_back({H, b.b1, b.b2, b.b3, c.c2, c.c3});
    }
    return rows;
}

} // namespace roughvol
