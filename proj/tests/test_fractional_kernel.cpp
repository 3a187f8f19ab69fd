#include <cmath>
#include <vector>

#include "doctest.h"
#include "roughvol/fractional_kernel.hpp"

using namespace roughvol;

namespace {

// independent oracle: graded-midpoint Riemann sum of the defining integral
// C(t,s) = int_0^s (s-u)^{H-1/2} (t-u)^{H-1/2} du, cubic grading toward u = s
double cov_oracle(double t, double s, double H) {
    if (t < s) std::swap(t, s);
    if (s == 0.0) return 0.0;
    const double a = H - 0.5;
    const long K = 400000;
    // track the distance d = s - u directly so the graded points never
    // collapse onto the singular endpoint in floating point
    double sum = 0.0;
    for (long k = 0; k < K; ++k) {
        double r0 = static_cast<double>(k) / K;
        double r1 = static_cast<double>(k + 1) / K;
        double d0 = s * std::pow(1.0 - r0, 3.0);
        double d1 = s * std::pow(1.0 - r1, 3.0);
        double dm = 0.5 * (d0 + d1);
        sum += std::pow(dm, a) * std::pow((t - s) + dm, a) * (d0 - d1);
    }
    return sum;
}

} // namespace

TEST_CASE("hurst and grid validation") {
    CHECK_THROWS(Hurst(0.0));
    CHECK_THROWS(Hurst(-0.1));
    CHECK_THROWS(Hurst(0.51));
    CHECK(Hurst(0.5).value == 0.5);
    CHECK_THROWS(GridSpec(0, 1.0));
    CHECK_THROWS(GridSpec(4, 0.0));

    GridSpec g(4, 1.0);
    CHECK(g.steps() == 4);
    CHECK(g.integer_horizon());
    GridSpec gp(4, 1.1);
    CHECK(gp.steps() == 4);
    CHECK(!gp.integer_horizon());
}

TEST_CASE("eta projection snaps to the grid from below") {
    CHECK(eta_index(0.29, 10) == 2);
    CHECK(eta_index(0.3, 10) == 3);
    CHECK(eta_index(0.3 - 1e-16, 10) == 3); // snap within relative 1e-9
    CHECK(eta_index(0.0, 10) == 0);
    CHECK(eta(0.47, 10) == doctest::Approx(0.4).epsilon(1e-15));
    // 0.1 * 3 is not exactly 0.3 in binary; the snap keeps eta idempotent
    CHECK(eta(eta(0.35, 10), 10) == eta(0.35, 10));
}

TEST_CASE("pointwise kernels") {
    const double H = 0.2, a = H - 0.5;
    CHECK(liouville_K(2.0, 1.0, H) == doctest::Approx(1.0));
    CHECK(liouville_K(1.5, 1.0, H) == doctest::Approx(std::pow(0.5, a)));
    CHECK(liouville_K(1.0, 1.0, H) == 0.0); // vanishes outside {t > s}
    CHECK(liouville_K(0.5, 1.0, H) == 0.0);
    // discretized kernel freezes the first argument at eta(t)
    CHECK(discrete_K(0.47, 0.1, H, 10) == doctest::Approx(std::pow(0.3, a)));
    CHECK(discrete_K(0.47, 0.45, H, 10) == 0.0); // eta(t) = 0.4 < s
}

TEST_CASE("integrated kernel closed form") {
    const double H = 0.35, e = H + 0.5;
    // int_a^b (t-s)_+^{H-1/2} ds = ((t-a)_+^{H+1/2} - (t-b)_+^{H+1/2})/(H+1/2)
    CHECK(integrated_K(1.0, 0.0, 1.0, H) == doctest::Approx(1.0 / e).epsilon(1e-14));
    CHECK(integrated_K(1.0, 0.25, 0.5, H) ==
          doctest::Approx((std::pow(0.75, e) - std::pow(0.5, e)) / e).epsilon(1e-14));
    // upper limit beyond t clips at t
    CHECK(integrated_K(0.5, 0.25, 1.0, H) ==
          doctest::Approx(std::pow(0.25, e) / e).epsilon(1e-14));
    // t at or below the window start contributes nothing (partial increments
    // of the driving motion are independent of every grid value)
    CHECK(integrated_K(0.5, 0.5, 1.0, H) == 0.0);
    CHECK(integrated_K(0.25, 0.5, 1.0, H) == 0.0);
    CHECK_THROWS(integrated_K(1.0, 0.5, 0.25, H));
}

TEST_CASE("covariance against frozen high-precision values") {
    // 17-digit values from an independent multiprecision evaluation of the
    // defining integral
    struct Row {
        double t, s, H, value;
    };
    const Row rows[] = {
        {1.0, 0.5, 0.1, 1.2940075969915693},
        {2.0, 1.0, 0.3, 1.1673409633100588},
        {1.7, 1.3, 0.45, 1.3537829527069221},
        {3.0, 0.2, 0.25, 0.30596857665397247},
        {1.3, 1.0, 0.2, 1.6423456270878043},
        {10.0, 1.0, 0.1, 0.68105726273773201}, // far tail branch
        {1.2, 0.8, 0.05, 1.9837109687298394},  // H near the rough edge
    };
    for (const Row& r : rows) {
        CAPTURE(r.t);
        CAPTURE(r.H);
        CHECK(covariance_C(r.t, r.s, r.H) == doctest::Approx(r.value).epsilon(5e-9));
        CHECK(covariance_fast(r.t, r.s, r.H) == doctest::Approx(r.value).epsilon(5e-9));
    }
}

TEST_CASE("covariance properties") {
    const double hs[] = {0.05, 0.1, 0.25, 0.4, 0.5};
    for (double H : hs) {
        CAPTURE(H);
        // variance closed form
        for (double t : {0.3, 1.0, 2.7})
            CHECK(covariance_C(t, t, H) ==
                  doctest::Approx(std::pow(t, 2.0 * H) / (2.0 * H)).epsilon(1e-12));
        // symmetry
        CHECK(covariance_C(1.7, 0.6, H) == covariance_C(0.6, 1.7, H));
        // zero time
        CHECK(covariance_C(1.0, 0.0, H) == 0.0);
        // the two evaluation paths agree across every gap regime
        for (double q : {0.01, 0.3, 0.7, 2.0, 3.9, 4.1, 50.0}) {
            double s = 0.8, t = s * (1.0 + q);
            CHECK(covariance_fast(t, s, H) ==
                  doctest::Approx(covariance_C(t, s, H)).epsilon(2e-10));
        }
    }
    // H = 1/2 degenerates to the Brownian covariance
    CHECK(covariance_C(1.3, 0.4, 0.5) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(covariance_fast(2.0, 1.9, 0.5) == doctest::Approx(1.9).epsilon(1e-12));
}

TEST_CASE("covariance against the graded Riemann oracle") {
    for (double H : {0.1, 0.3}) {
        for (double s : {0.4, 1.0}) {
            for (double gap : {0.1, 1.0}) {
                double t = s + gap;
                CAPTURE(H);
                CAPTURE(s);
                CAPTURE(t);
                CHECK(covariance_C(t, s, H) ==
                      doctest::Approx(cov_oracle(t, s, H)).epsilon(5e-6));
            }
        }
    }
}

TEST_CASE("grid covariance matches the scalar evaluator") {
    for (double H : {0.1, 0.35}) {
        for (long n : {5L, 8L}) {
            GridSpec grid(n, 1.0);
            Eigen::MatrixXd cov = grid_hatW_covariance(grid, H);
            REQUIRE(cov.rows() == n);
            for (long i = 1; i <= n; ++i) {
                for (long j = 1; j <= i; ++j) {
                    double want = covariance_C(static_cast<double>(i) / n,
                                               static_cast<double>(j) / n, H);
                    CAPTURE(i);
                    CAPTURE(j);
                    CHECK(cov(i - 1, j - 1) == doctest::Approx(want).epsilon(1e-9));
                    CHECK(cov(i - 1, j - 1) == cov(j - 1, i - 1));
                }
            }
        }
    }
}

TEST_CASE("joint grid covariance blocks") {
    const double H = 0.2;
    GridSpec grid(4, 1.1); // partial final increment [1.0, 1.1]
    const long M = grid.steps();
    REQUIRE(M == 4);
    Eigen::MatrixXd joint = joint_grid_covariance(grid, H);
    const long P = M + 1;
    REQUIRE(joint.rows() == M + P);

    // top-left block: the process covariance
    Eigen::MatrixXd hw = grid_hatW_covariance(grid, H);
    CHECK((joint.topLeftCorner(M, M) - hw).cwiseAbs().maxCoeff() < 1e-14);

    // increment block: independent Brownian increments
    for (long i = 0; i < P; ++i) {
        for (long j = 0; j < P; ++j) {
            double want = 0.0;
            if (i == j) want = (i == M) ? (1.1 - 1.0) : 0.25;
            CHECK(joint(M + i, M + j) == doctest::Approx(want).epsilon(1e-12));
        }
    }

    // cross block: int over the increment window of the kernel
    for (long i = 1; i <= M; ++i) {
        for (long j = 1; j <= M; ++j) {
            double want = integrated_K(i / 4.0, (j - 1) / 4.0, j / 4.0, H);
            CHECK(joint(i - 1, M + j - 1) == doctest::Approx(want).epsilon(1e-12));
        }
        // the clipped final increment lives beyond every grid time
        CHECK(joint(i - 1, M + P - 1) == 0.0);
    }

    // the matrix factorizes with at most a vanishing jitter
    CholeskyResult c = chol_with_jitter(joint);
    CHECK(c.jitter <= 1e-8 * joint.trace() / joint.rows());
    Eigen::MatrixXd re = c.L * c.L.transpose();
    CHECK((re - joint).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("cholesky jitter repair") {
    // exactly singular PSD matrix: factorizes, possibly with tiny jitter
    Eigen::MatrixXd s(2, 2);
    s << 1.0, 1.0, 1.0, 1.0;
    CholeskyResult c = chol_with_jitter(s);
    CHECK((c.L * c.L.transpose() - s).cwiseAbs().maxCoeff() < 1e-7);

    // indefinite input must be rejected, not silently repaired
    Eigen::MatrixXd bad(2, 2);
    bad << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS(chol_with_jitter(bad));
}
