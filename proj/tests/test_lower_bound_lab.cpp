#include <cmath>
#include <vector>

#include "doctest.h"
#include "roughvol/lower_bound_lab.hpp"

using namespace roughvol;

TEST_CASE("beta closed forms against frozen multiprecision values") {
    struct Row {
        double H, b1, b2, b3, c2, c3;
    };
    const Row rows[] = {
        {0.02, -23.682146173039531, -0.23937924458591537, -0.94728584692158125,
         3.633983500689378, 1.7802528883228692},
        {0.05, -8.7749852054547887, -0.59240406577927029, -0.87749852054547887,
         3.1505072199177953, 1.9585289063729402},
        {0.10, -3.9081090230781952, -1.4680627007757263, -0.78162180461563903,
         3.1874161596367559, 2.6781305115012429},
        {0.15, -2.3532821460524535, -6.5593048706512686, -0.70598464381573605,
         7.9158436115992452, 7.8279116424122046},
    };
    for (const Row& r : rows) {
        CAPTURE(r.H);
        BConstants b = b_constants_beta(r.H);
        CHECK(b.in_lower_regime);
        CHECK(b.b1 == doctest::Approx(r.b1).epsilon(1e-10));
        CHECK(b.b2 == doctest::Approx(r.b2).epsilon(1e-10));
        CHECK(b.b3 == doctest::Approx(r.b3).epsilon(1e-10));
        C2C3 c = c2_c3(r.H);
        CHECK(c.c2 == doctest::Approx(r.c2).epsilon(1e-10));
        CHECK(c.c3 == doctest::Approx(r.c3).epsilon(1e-10));
    }
}

TEST_CASE("direct integration reproduces the beta closed forms") {
    for (double H : {0.02, 0.05, 0.10, 0.15}) {
        CAPTURE(H);
        BConstants num = b_constants_integral(H, 1e-10);
        BConstants ref = b_constants_beta(H);
        CHECK(num.in_lower_regime);
        CHECK(num.b1 == doctest::Approx(ref.b1).epsilon(1e-8));
        CHECK(num.b2 == doctest::Approx(ref.b2).epsilon(1e-8));
        CHECK(num.b3 == doctest::Approx(ref.b3).epsilon(1e-8));
    }
}

TEST_CASE("second constant only exists below one sixth") {
    BConstants above = b_constants_integral(0.25, 1e-9);
    CHECK_FALSE(above.in_lower_regime);
    CHECK(std::isnan(above.b2));
    // the other two integrals still converge there
    CHECK(above.b3 == doctest::Approx(-0.5990701173677961).epsilon(1e-9));
    CHECK(std::isfinite(above.b1));

    BConstants above_beta = b_constants_beta(0.25);
    CHECK_FALSE(above_beta.in_lower_regime);
    CHECK(above_beta.b3 == doctest::Approx(-0.5990701173677961).epsilon(1e-10));

    // c2/c3 are only defined in the lower regime
    CHECK_THROWS(c2_c3(0.25));
    CHECK_THROWS(c2_c3(1.0 / 6.0));
}

TEST_CASE("first integrand vanishes identically at the Brownian edge") {
    for (double v : {1.5, 2.0, 10.0}) CHECK(b1_integrand(0.5, v) == 0.0);
    // the sign convention folds the leading minus into the integrand, so the
    // head v < 1 contributes -v^{2a} and the tail v > 1 is positive for a < 0
    CHECK(b1_integrand(0.1, 2.0) > 0.0);
    CHECK(b1_integrand(0.1, 0.5) ==
          doctest::Approx(-std::pow(0.5, 2.0 * (0.1 - 0.5))).epsilon(1e-13));
}

TEST_CASE("constants sweep spans the lower regime") {
    auto rows = constants_sweep(0.01, 0.125, 50);
    REQUIRE(rows.size() == 50);
    CHECK(rows.front().H == doctest::Approx(0.01));
    CHECK(rows.back().H == doctest::Approx(0.125));
    for (size_t i = 0; i < rows.size(); ++i) {
        const ConstantsRow& r = rows[i];
        CAPTURE(r.H);
        // all three constants stay negative and the bound stays ordered
        CHECK(r.b1 < 0.0);
        CHECK(r.b2 < 0.0);
        CHECK(r.b3 < 0.0);
        CHECK(r.c2 > 0.0);
        CHECK(r.c3 > 0.0);
        CHECK(r.c2 - r.c3 > 0.0);
        if (i > 0) CHECK(r.H > rows[i - 1].H);
    }
    CHECK_THROWS(constants_sweep(0.12, 0.01, 5)); // reversed range
    CHECK_THROWS(constants_sweep(0.01, 0.2, 5));  // exits the regime
    CHECK_THROWS(constants_sweep(0.01, 0.12, 0)); // empty request
    CHECK(constants_sweep(0.07, 0.12, 1).size() == 1); // single point is fine
    CHECK(constants_sweep(0.07, 0.12, 1)[0].H == doctest::Approx(0.07));
}

TEST_CASE("empirical rescaled errors stay positive and bounded") {
    CHECK_THROWS(empirical_lower_bound(0.4, {16, 32, 64}, 1e-7));
    LowerBoundCurve c = empirical_lower_bound(0.1, {16, 32, 64}, 1e-7);
    CHECK(c.H == 0.1);
    REQUIRE(c.points.size() == 3);
    const double p = 3.0 * 0.1 + 0.5;
    for (const LowerBoundPoint& pt : c.points) {
        CAPTURE(pt.n);
        CHECK(pt.error > 0.0);
        CHECK(pt.rescaled ==
              doctest::Approx(std::pow(static_cast<double>(pt.n), p) * pt.error)
                  .epsilon(1e-12));
        CHECK(pt.rescaled > 0.0);
    }
    CHECK(c.min_rescaled_tail > 0.0);
    CHECK(c.median_rescaled > 0.0);
    CHECK(c.c2 == doctest::Approx(c2_c3(0.1).c2));
    // the rescaled sequence is far from collapsing toward zero: it stays
    // within a factor-two band around its median on these grids
    for (const LowerBoundPoint& pt : c.points) {
        CHECK(pt.rescaled > 0.5 * c.median_rescaled);
        CHECK(pt.rescaled < 2.0 * c.median_rescaled);
    }
}
