// Shared Horner-scheme helpers for the real coefficient tables used
// throughout. Not installed; implementation detail.
#pragma once

#include <cmath>
#include <complex>
#include <span>

namespace ruincalc::detail {

inline double horner(std::span<const double> c, double x) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        acc = acc * x + *it;
    return acc;
}

inline std::complex<double> horner(std::span<const double> c,
                                   std::complex<double> z) {
    std::complex<double> acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        acc = acc * z + *it;
    return acc;
}

// Value and derivative in one pass.
inline void horner2(std::span<const double> c, double x, double& f,
                    double& df) {
    f = 0.0;
    df = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        df = df * x + f;
        f = f * x + *it;
    }
}

inline void horner2(std::span<const double> c, std::complex<double> z,
                    std::complex<double>& f, std::complex<double>& df) {
    f = 0.0;
    df = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        df = df * z + f;
        f = f * z + *it;
    }
}

// Compensated Horner (error-free transformations via fma): evaluates the
// polynomial as if in twice the working precision. Used for the final root
// polish, where the plain scheme's rounding noise would limit the root to
// about eps / |p'(root)| and small drifts make that derivative small.
inline double horner_compensated(std::span<const double> c, double x) {
    auto it = c.rbegin();
    double s = *it++;
    double err = 0.0;
    for (; it != c.rend(); ++it) {
        double p = s * x;
        double pe = std::fma(s, x, -p); // exact product error
        double t = p + *it;
        double z = t - p;
        double se = (p - (t - z)) + (*it - z); // exact sum error
        s = t;
        err = err * x + (pe + se);
    }
    return s + err;
}

// sum |c_k| r^k, the scale for floating-point stopping criteria.
inline double abs_horner(std::span<const double> c, double r) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        acc = acc * r + std::abs(*it);
    return acc;
}

// Exponentiation by squaring, e >= 0.
template <typename T>
T pow_int(T base, long long e) {
    T acc(1);
    while (e > 0) {
        if (e & 1)
            acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

} // namespace ruincalc::detail
