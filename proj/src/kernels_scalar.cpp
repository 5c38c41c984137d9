#include "thinhom/kernels.hpp"

#include <cmath>

namespace thinhom::kern::scalar {

double dot(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double weighted_abs_pow_sum(const double* v, const double* w, std::size_t n, double p) {
    double s = 0.0;
    if (p == 2.0) {
        for (std::size_t i = 0; i < n; ++i) s += w[i] * v[i] * v[i];
    } else if (p == 1.0) {
        for (std::size_t i = 0; i < n; ++i) s += w[i] * std::abs(v[i]);
    } else if (p == 3.0) {
        for (std::size_t i = 0; i < n; ++i) s += w[i] * std::abs(v[i]) * v[i] * v[i];
    } else if (p == 4.0) {
        for (std::size_t i = 0; i < n; ++i) {
            const double v2 = v[i] * v[i];
            s += w[i] * v2 * v2;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) s += w[i] * std::pow(std::abs(v[i]), p);
    }
    return s;
}

void pow_nonneg(const double* s, double* out, std::size_t n, double e) {
    if (e == 0.0) {
        for (std::size_t i = 0; i < n; ++i) out[i] = 1.0;
    } else if (e == 0.5) {
        for (std::size_t i = 0; i < n; ++i) out[i] = std::sqrt(s[i]);
    } else if (e == 1.0) {
        for (std::size_t i = 0; i < n; ++i) out[i] = s[i];
    } else if (e == 1.5) {
        for (std::size_t i = 0; i < n; ++i) out[i] = s[i] * std::sqrt(s[i]);
    } else if (e == 2.0) {
        for (std::size_t i = 0; i < n; ++i) out[i] = s[i] * s[i];
    } else if (e == -0.5) {
        for (std::size_t i = 0; i < n; ++i) out[i] = 1.0 / std::sqrt(s[i]);
    } else {
        for (std::size_t i = 0; i < n; ++i) out[i] = std::pow(s[i], e);
    }
}

void signed_abs_pow(const double* u, double* out, std::size_t n, double q) {
    if (q == 0.0) {
        for (std::size_t i = 0; i < n; ++i) out[i] = u[i];
    } else if (q == 1.0) {
        for (std::size_t i = 0; i < n; ++i) out[i] = std::abs(u[i]) * u[i];
    } else if (q == 2.0) {
        for (std::size_t i = 0; i < n; ++i) out[i] = u[i] * u[i] * u[i];
    } else {
        for (std::size_t i = 0; i < n; ++i) out[i] = std::pow(std::abs(u[i]), q) * u[i];
    }
}

} // namespace thinhom::kern::scalar
