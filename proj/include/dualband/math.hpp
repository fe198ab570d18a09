#pragma once

#include <cmath>
#include <cstdint>

namespace dualband {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = 3.14159265358979323846;

// erfc with a documented, platform-independent evaluation:
//   x in [0, 2]  -- Taylor series of erf, erfc = 1 - erf
//   x > 2        -- Lentz continued fraction
//     erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
// Negative arguments use erfc(-x) = 2 - erfc(x).
inline double erfc_series(double x) {
    if (x < 0.0) return 2.0 - erfc_series(-x);
    if (x <= 2.0) {
        // erf(x) = 2/sqrt(pi) * sum_{n>=0} (-1)^n x^(2n+1) / (n! (2n+1))
        double term = x;
        double sum = x;
        const double x2 = x * x;
        for (int n = 1; n < 200; ++n) {
            term *= -x2 / n;
            const double inc = term / (2 * n + 1);
            sum += inc;
            if (std::fabs(inc) < 1e-18 * std::fabs(sum)) break;
        }
        const double erf = sum * 2.0 / std::sqrt(kPi);
        return 1.0 - erf;
    }
    // Modified Lentz; partial numerators a_1 = 1, a_{k+1} = k/2, denominators x.
    const double tiny = 1e-300;
    double f = tiny;  // b_0 = 0
    double c = f;
    double d = 0.0;
    double a = 1.0;
    for (int k = 1; k < 300; ++k) {
        d = x + a * d;
        if (d == 0.0) d = tiny;
        c = x + a / c;
        if (c == 0.0) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        a = k * 0.5;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x * x) / std::sqrt(kPi) * f;
}

// Standard normal CDF via the complementary form (stable in both tails).
inline double normal_cdf(double x) {
    return 0.5 * erfc_series(-x / std::sqrt(2.0));
}

// FNV-1a over a byte span; used for the prior digest in the codec container.
inline std::uint64_t fnv1a64(const void* data, std::size_t len,
                             std::uint64_t h = 1469598103934665603ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace dualband
