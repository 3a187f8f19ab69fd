#pragma once

#include <cmath>
#include <stdexcept>

namespace roughvol {

// log |Gamma(x)| together with the sign of Gamma(x), valid for any non-pole x.
// Negative arguments go through the reflection formula
//   Gamma(x) = pi / (sin(pi x) * Gamma(1 - x)),
// which keeps the sign explicit instead of losing it inside lgamma.
struct SignedLogGamma {
    double log_abs;
    int sign; // +1 or -1
};

inline SignedLogGamma signed_log_gamma(double x) {
    if (x > 0.0) {
        return {std::lgamma(x), 1};
    }
    if (x == std::floor(x)) {
        throw std::domain_error("signed_log_gamma: nonpositive integer argument (pole)");
    }
    double s = std::sin(M_PI * x);
    SignedLogGamma out;
    out.log_abs = std::log(M_PI) - std::log(std::fabs(s)) - std::lgamma(1.0 - x);
    out.sign = s > 0.0 ? 1 : -1;
    return out;
}

// Euler Beta with sign tracking; a, b, a+b may be negative non-integers.
inline double beta_signed(double a, double b) {
    SignedLogGamma ga = signed_log_gamma(a);
    SignedLogGamma gb = signed_log_gamma(b);
    SignedLogGamma gab = signed_log_gamma(a + b);
    double log_abs = ga.log_abs + gb.log_abs - gab.log_abs;
    int sign = ga.sign * gb.sign * gab.sign;
    return sign * std::exp(log_abs);
}

// Generalized binomial coefficient C(a, k) for real a, integer k >= 0.
inline double binomial_real(double a, int k) {
    double out = 1.0;
    for (int i = 0; i < k; ++i) out *= (a - i) / (i + 1);
    return out;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Kolmogorov distribution tail Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2)
inline double kolmogorov_tail(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        double term = 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::fabs(term) < 1e-16) break;
    }
    if (sum < 0.0) sum = 0.0;
    if (sum > 1.0) sum = 1.0;
    return sum;
}

} // namespace roughvol
