#if defined(__x86_64__)

#include "thinhom/kernels.hpp"

#include <cmath>
#include <immintrin.h>

namespace thinhom::kern::avx2 {

bool available() {
    return __builtin_cpu_supports("avx2");
}

namespace {

inline __m256d abs_pd(__m256d v) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    return _mm256_and_pd(v, mask);
}

// Lane sum in a fixed order so repeated runs reduce identically.
inline double hsum(__m256d v) {
    alignas(32) double lane[4];
    _mm256_store_pd(lane, v);
    return ((lane[0] + lane[1]) + lane[2]) + lane[3];
}

} // namespace

double dot(const double* x, const double* y, std::size_t n) {
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    std::size_t i = 0;
    const __m256d va = _mm256_set1_pd(a);
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

double weighted_abs_pow_sum(const double* v, const double* w, std::size_t n, double p) {
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    if (p == 2.0) {
        for (; i + 4 <= n; i += 4) {
            const __m256d vv = _mm256_loadu_pd(v + i);
            acc = _mm256_fmadd_pd(_mm256_mul_pd(vv, vv), _mm256_loadu_pd(w + i), acc);
        }
    } else if (p == 1.0) {
        for (; i + 4 <= n; i += 4)
            acc = _mm256_fmadd_pd(abs_pd(_mm256_loadu_pd(v + i)), _mm256_loadu_pd(w + i), acc);
    } else if (p == 3.0) {
        for (; i + 4 <= n; i += 4) {
            const __m256d vv = _mm256_loadu_pd(v + i);
            const __m256d t = _mm256_mul_pd(abs_pd(vv), _mm256_mul_pd(vv, vv));
            acc = _mm256_fmadd_pd(t, _mm256_loadu_pd(w + i), acc);
        }
    } else if (p == 4.0) {
        for (; i + 4 <= n; i += 4) {
            const __m256d vv = _mm256_loadu_pd(v + i);
            const __m256d v2 = _mm256_mul_pd(vv, vv);
            acc = _mm256_fmadd_pd(_mm256_mul_pd(v2, v2), _mm256_loadu_pd(w + i), acc);
        }
    } else {
        double s = 0.0;
        for (; i < n; ++i) s += w[i] * std::pow(std::abs(v[i]), p);
        return s;
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += w[i] * std::pow(std::abs(v[i]), p);
    return s;
}

void pow_nonneg(const double* s, double* out, std::size_t n, double e) {
    std::size_t i = 0;
    if (e == 0.5) {
        for (; i + 4 <= n; i += 4)
            _mm256_storeu_pd(out + i, _mm256_sqrt_pd(_mm256_loadu_pd(s + i)));
        for (; i < n; ++i) out[i] = std::sqrt(s[i]);
    } else if (e == 1.5) {
        for (; i + 4 <= n; i += 4) {
            const __m256d vs = _mm256_loadu_pd(s + i);
            _mm256_storeu_pd(out + i, _mm256_mul_pd(vs, _mm256_sqrt_pd(vs)));
        }
        for (; i < n; ++i) out[i] = s[i] * std::sqrt(s[i]);
    } else if (e == 2.0) {
        for (; i + 4 <= n; i += 4) {
            const __m256d vs = _mm256_loadu_pd(s + i);
            _mm256_storeu_pd(out + i, _mm256_mul_pd(vs, vs));
        }
        for (; i < n; ++i) out[i] = s[i] * s[i];
    } else if (e == -0.5) {
        const __m256d one = _mm256_set1_pd(1.0);
        for (; i + 4 <= n; i += 4)
            _mm256_storeu_pd(out + i, _mm256_div_pd(one, _mm256_sqrt_pd(_mm256_loadu_pd(s + i))));
        for (; i < n; ++i) out[i] = 1.0 / std::sqrt(s[i]);
    } else {
        // e == 0, e == 1 and general exponents gain nothing from vectorizing
        scalar::pow_nonneg(s, out, n, e);
    }
}

void signed_abs_pow(const double* u, double* out, std::size_t n, double q) {
    std::size_t i = 0;
    if (q == 1.0) {
        for (; i + 4 <= n; i += 4) {
            const __m256d vu = _mm256_loadu_pd(u + i);
            _mm256_storeu_pd(out + i, _mm256_mul_pd(abs_pd(vu), vu));
        }
        for (; i < n; ++i) out[i] = std::abs(u[i]) * u[i];
    } else if (q == 2.0) {
        for (; i + 4 <= n; i += 4) {
            const __m256d vu = _mm256_loadu_pd(u + i);
            _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_mul_pd(vu, vu), vu));
        }
        for (; i < n; ++i) out[i] = u[i] * u[i] * u[i];
    } else {
        scalar::signed_abs_pow(u, out, n, q);
    }
}

} // namespace thinhom::kern::avx2

#endif // __x86_64__
