#include <cmath>
#include <vector>

#include "doctest.h"
#include "roughvol/gaussian_engine.hpp"
#include "roughvol/vol_fn.hpp"

using namespace roughvol;

TEST_CASE("moment table reproduces double factorials") {
    Eigen::MatrixXd s(1, 1);
    s << 2.0;
    MomentTable table(s);
    CHECK(table.moment({0}) == doctest::Approx(1.0));
    CHECK(table.moment({1}) == doctest::Approx(0.0));
    CHECK(table.moment({2}) == doctest::Approx(2.0));
    CHECK(table.moment({4}) == doctest::Approx(3.0 * 4.0));        // 3 sigma^4
    CHECK(table.moment({6}) == doctest::Approx(15.0 * 8.0));       // 15 sigma^6
    CHECK(table.moment({8}) == doctest::Approx(105.0 * 16.0));     // 105 sigma^8
    CHECK(table.moment({7}) == doctest::Approx(0.0));
}

TEST_CASE("moment table with nonzero mean matches binomial expansion") {
    Eigen::MatrixXd s(1, 1);
    s << 1.5;
    Eigen::VectorXd m(1);
    m << 0.7;
    MomentTable table(s, m);
    // E[(m+z)^k], z ~ N(0,1.5): expand and use central moments
    CHECK(table.moment({1}) == doctest::Approx(0.7));
    CHECK(table.moment({2}) == doctest::Approx(0.7 * 0.7 + 1.5));
    double m3 = std::pow(0.7, 3) + 3.0 * 0.7 * 1.5;
    CHECK(table.moment({3}) == doctest::Approx(m3).epsilon(1e-13));
    double m4 = std::pow(0.7, 4) + 6.0 * 0.7 * 0.7 * 1.5 + 3.0 * 1.5 * 1.5;
    CHECK(table.moment({4}) == doctest::Approx(m4).epsilon(1e-13));
}

TEST_CASE("bivariate moments through the recursion") {
    Eigen::MatrixXd s(2, 2);
    s << 1.3, 0.4, 0.4, 0.9;
    MomentTable table(s);
    // Isserlis: E[x^2 y^2] = s11 s22 + 2 c^2
    CHECK(table.moment({2, 2}) ==
          doctest::Approx(1.3 * 0.9 + 2.0 * 0.4 * 0.4).epsilon(1e-13));
    // E[x^3 y] = 3 s11 c
    CHECK(table.moment({3, 1}) == doctest::Approx(3.0 * 1.3 * 0.4).epsilon(1e-13));
    CHECK(table.moment({1, 1}) == doctest::Approx(0.4));
    CHECK(table.moment({3, 2}) == doctest::Approx(0.0));
    CHECK(gaussian_moment({2, 2}, s) == table.moment({2, 2}));
}

TEST_CASE("exponential-weighted moments") {
    // frozen multiprecision value: E[e^{0.7 x} x^2], x ~ N(-0.3, 1.3)
    Eigen::MatrixXd s(1, 1);
    s << 1.3;
    Eigen::VectorXd m(1), a(1);
    m << -0.3;
    a << 0.7;
    CHECK(gaussian_exp_moment(a, {2}, s, m) ==
          doctest::Approx(1.8637308675669604).epsilon(1e-14));

    // a = 0 reduces to the plain moment table
    Eigen::VectorXd a0 = Eigen::VectorXd::Zero(1);
    MomentTable table(s, m);
    CHECK(gaussian_exp_moment(a0, {3}, s, m) ==
          doctest::Approx(table.moment({3})).epsilon(1e-13));

    // bivariate shift identity: E[e^{a.x} x1 x2] with zero mean equals
    // (Sa)_1 (Sa)_2 + S_12 after the Girsanov-style recentering
    Eigen::MatrixXd s2(2, 2);
    s2 << 1.0, 0.3, 0.3, 0.8;
    Eigen::VectorXd a2(2), m2 = Eigen::VectorXd::Zero(2);
    a2 << 0.5, -0.2;
    Eigen::VectorXd shift = s2 * a2;
    double mgf = std::exp(0.5 * a2.dot(shift));
    double want = mgf * (shift(0) * shift(1) + s2(0, 1));
    CHECK(gaussian_exp_moment(a2, {1, 1}, s2, m2) == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("expect_psi dispatches per family") {
    Eigen::MatrixXd s(2, 2);
    s << 1.1, 0.5, 0.5, 0.9;
    GaussianLaw law(s);
    CHECK(law.dim() == 2);

    // linear family: f(x) = c1 x, f' = c1, higher derivatives vanish, so each
    // psi factor collapses to a monomial times a power of c1
    VolFn lin = VolFn::linear(2.0);
    MomentTable table(s);

    // (f f')(x0) * f(x1) = (c1 x0 c1)(c1 x1) = c1^3 x0 x1
    ElementaryPsi psi{{{0, 1}, {0}}};
    CHECK(expect_psi(psi, law, lin, ExpectMethod::analytic) ==
          doctest::Approx(8.0 * table.moment({1, 1})).epsilon(1e-12));

    // f(x0)^2 * f(x1)^2 = c1^4 x0^2 x1^2
    ElementaryPsi psi2{{{0, 0}, {0, 0}}};
    CHECK(expect_psi(psi2, law, lin, ExpectMethod::analytic) ==
          doctest::Approx(16.0 * table.moment({2, 2})).epsilon(1e-12));

    // a second derivative anywhere kills the linear family
    ElementaryPsi psi3{{{2}, {0}}};
    CHECK(expect_psi(psi3, law, lin, ExpectMethod::analytic) == 0.0);
}

TEST_CASE("analytic and hermite evaluations agree for the exponential family") {
    Eigen::MatrixXd s(2, 2);
    s << 0.8, 0.2, 0.2, 0.6;
    GaussianLaw law(s);
    VolFn f = VolFn::exponential(1.3, 0.4);
    const ElementaryPsi psis[] = {
        ElementaryPsi{{{0}, {0}}},
        ElementaryPsi{{{0, 2}, {1}}},
        ElementaryPsi{{{1, 1}, {0}}},
    };
    for (const ElementaryPsi& psi : psis) {
        double an = expect_psi(psi, law, f, ExpectMethod::analytic);
        double he = expect_psi(psi, law, f, ExpectMethod::hermite, 1e-12);
        CHECK(an == doctest::Approx(he).epsilon(1e-8));
    }
}

TEST_CASE("hermite quadrature handles the bounded family") {
    ElementaryPsi unit{{{0}}};
    // 1 + tanh(0) = 1 and derivatives decay: with psi = {{1}} we integrate
    // sech^2 which has the frozen value below under N(0, 0.49)
    Eigen::MatrixXd s(1, 1);
    s << 0.49;
    GaussianLaw law(s);
    VolFn f = VolFn::shifted_tanh();
    CHECK(expect_psi(ElementaryPsi{{{1}}}, law, f, ExpectMethod::hermite, 1e-12) ==
          doctest::Approx(0.72959384377751484).epsilon(1e-10));
    CHECK(expect_psi(ElementaryPsi{{{0, 0}}}, law, f, ExpectMethod::hermite, 1e-12) ==
          doctest::Approx(1.2704061562224852).epsilon(1e-10));
    // wick on a non-polynomial family must refuse rather than approximate
    CHECK_THROWS(expect_psi(unit, law, f, ExpectMethod::wick));
}

TEST_CASE("hermite tolerates a singular covariance") {
    Eigen::MatrixXd s(2, 2);
    s << 1.0, 1.0, 1.0, 1.0; // rank one: x0 == x1 a.s.
    GaussianLaw law(s);
    VolFn f = VolFn::exponential(1.0, 0.25);
    ElementaryPsi psi{{{0}, {1}}};
    double an = expect_psi(psi, law, f, ExpectMethod::analytic);
    double he = expect_psi(psi, law, f, ExpectMethod::hermite, 1e-12);
    CHECK(an == doctest::Approx(he).epsilon(1e-8));
}

TEST_CASE("derivative identity holds along matrix paths") {
    // d/dt E[prod x_i^{k_i}] = 1/2 sum_{i,j} sigma'_{ij}(t) E[d^2/dx_i dx_j prod ...]
    // checked by the engine itself against a finite difference
    auto sigma_path = [](double t) {
        Eigen::MatrixXd s(2, 2);
        s << 1.0 + t * t, 0.3 * std::sin(t), 0.3 * std::sin(t), 0.8 + 0.1 * std::cos(t);
        return s;
    };
    CHECK(check_derivative_identity({2, 2}, sigma_path, 0.4) < 1e-6);
    CHECK(check_derivative_identity({3, 1}, sigma_path, 0.4) < 1e-6);
    CHECK(check_derivative_identity({4, 0}, sigma_path, 0.4) < 1e-6);

    // non-monotone scalar variance (Brownian bridge)
    auto bridge = [](double t) {
        Eigen::MatrixXd s(1, 1);
        s << t * (1.0 - t);
        return s;
    };
    CHECK(check_derivative_identity({4}, bridge, 0.3) < 1e-6);
    CHECK(check_derivative_identity({4}, bridge, 0.7) < 1e-6); // decreasing branch
}

TEST_CASE("vol function families expose consistent derivatives") {
    VolFn lin = VolFn::linear(3.0);
    CHECK(lin(0.7) == doctest::Approx(2.1));
    CHECK(lin.deriv(1, -2.0) == doctest::Approx(3.0));
    CHECK(lin.deriv(2, 5.0) == 0.0);

    VolFn ex = VolFn::exponential(2.0, 0.5);
    CHECK(ex(0.0) == doctest::Approx(2.0));
    for (int d = 0; d <= 4; ++d)
        CHECK(ex.deriv(d, 1.1) ==
              doctest::Approx(2.0 * std::pow(0.5, d) * std::exp(0.55)).epsilon(1e-13));

    VolFn th = VolFn::shifted_tanh();
    CHECK(th(0.0) == doctest::Approx(1.0));
    CHECK(th.deriv(1, 0.0) == doctest::Approx(1.0)); // sech^2(0)
    // central finite difference cross-check of the stored derivative chain
    const double h = 1e-5, x = 0.3;
    double fd = (th.deriv(1, x + h) - th.deriv(1, x - h)) / (2.0 * h);
    CHECK(th.deriv(2, x) == doctest::Approx(fd).epsilon(1e-8));
}
