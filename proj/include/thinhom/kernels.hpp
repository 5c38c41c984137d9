#pragma once

#include <cstddef>
#include <string_view>

// Data-parallel inner loops shared by assembly, norms and the CG solver.
// A scalar reference implementation always exists; on x86-64 an AVX2
// variant is selected at runtime when the CPU supports it. Both variants
// use the same strength reductions for half-integer exponents, so they
// agree to a few ulp (reductions differ only in summation order).
namespace thinhom::kern {

// sum_i x_i * y_i
double dot(const double* x, const double* y, std::size_t n);

// y_i += a * x_i
void axpy(double a, const double* x, double* y, std::size_t n);

// sum_i w_i * |v_i|^p
double weighted_abs_pow_sum(const double* v, const double* w, std::size_t n, double p);

// out_i = s_i^e for s_i >= 0. Fast paths for e in {-0.5, 0, 0.5, 1, 1.5, 2}.
void pow_nonneg(const double* s, double* out, std::size_t n, double e);

// out_i = |u_i|^q * u_i. Fast paths for q in {0, 1, 2}.
void signed_abs_pow(const double* u, double* out, std::size_t n, double q);

// Name of the active backend: "avx2" or "scalar".
std::string_view backend();

// Force a backend by name (tests / THINHOM_BACKEND env var). Throws if the
// requested backend is not available on this machine.
void force_backend(std::string_view name);

namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
double weighted_abs_pow_sum(const double* v, const double* w, std::size_t n, double p);
void pow_nonneg(const double* s, double* out, std::size_t n, double e);
void signed_abs_pow(const double* u, double* out, std::size_t n, double q);
} // namespace scalar

#if defined(__x86_64__)
namespace avx2 {
bool available();
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
double weighted_abs_pow_sum(const double* v, const double* w, std::size_t n, double p);
void pow_nonneg(const double* s, double* out, std::size_t n, double e);
void signed_abs_pow(const double* u, double* out, std::size_t n, double q);
} // namespace avx2
#endif

} // namespace thinhom::kern
