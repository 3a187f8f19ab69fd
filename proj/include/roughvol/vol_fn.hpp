#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace roughvol {

// Volatility function families: c1*x, c2*exp(c3*x), 1+tanh(x).
// Every family exposes closed-form derivatives of any requested order.
struct VolFn {
    enum class Family { linear, exponential, shifted_tanh };

    Family family = Family::linear;
    double c1 = 1.0, c2 = 1.0, c3 = 1.0;

    static VolFn linear(double c1) {
        VolFn f;
        f.family = Family::linear;
        f.c1 = c1;
        return f;
    }
    static VolFn exponential(double c2, double c3) {
        VolFn f;
        f.family = Family::exponential;
        f.c2 = c2;
        f.c3 = c3;
        return f;
    }
    static VolFn shifted_tanh() {
        VolFn f;
        f.family = Family::shifted_tanh;
        return f;
    }

    int max_derivative_order() const {
        return family == Family::shifted_tanh ? 24 : 64;
    }

    double deriv(int d, double x) const;
    double operator()(double x) const { return deriv(0, x); }

    std::string describe() const;
    bool operator==(const VolFn&) const = default;
};

// One elementary summand of a differentiated product of f's:
//   prod_j prod_{d in factors[j]} f^{(d)}(x_j).
// factors[j] is the multiset of derivative orders attached to variable j+1.
struct ElementaryPsi {
    std::vector<std::vector<int>> factors;

    int variables() const { return static_cast<int>(factors.size()); }
    int total_derivatives() const {
        int k = 0;
        for (const auto& v : factors)
            for (int d : v) k += d;
        return k;
    }
};

} // namespace roughvol
