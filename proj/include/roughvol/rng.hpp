#pragma once

#include <cstdint>
#include <cmath>

namespace roughvol {

// Counter-based generator: every variate is addressed by (seed, path, component),
// so parallel path generation never shares mutable state and any single variate
// can be regenerated in isolation.
namespace rng {

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t path, std::uint64_t component) {
    std::uint64_t k = mix64(seed ^ 0xD1B54A32D192ED03ull);
    k = mix64(k ^ path * 0x8CB92BA72F3D8DD7ull);
    k = mix64(k ^ component * 0xEB44ACCAB455D165ull);
    return mix64(k);
}

// uniform in (0, 1), never returning an exact endpoint
inline double counter_uniform(std::uint64_t seed, std::uint64_t path, std::uint64_t component) {
    std::uint64_t b = counter_bits(seed, path, component);
    return (static_cast<double>(b >> 11) + 0.5) * 0x1.0p-53;
}

// Inverse CDF of the standard normal (Acklam's rational approximation with one
// Halley refinement step; relative error after refinement is near machine level).
inline double inverse_normal_cdf(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double q, r, x;
    if (p < plow) {
        q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        q = p - 0.5;
        r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley step on Phi(x) - p = 0
    double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
    x = x - u / (1.0 + x * u / 2.0);
    return x;
}

inline double counter_normal(std::uint64_t seed, std::uint64_t path, std::uint64_t component) {
    return inverse_normal_cdf(counter_uniform(seed, path, component));
}

} // namespace rng
} // namespace roughvol
