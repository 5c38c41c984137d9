#include "thinhom/kernels.hpp"

#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <string>

namespace thinhom::kern {

namespace {

struct Table {
    std::string_view name;
    double (*dot)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    double (*waps)(const double*, const double*, std::size_t, double);
    void (*pown)(const double*, double*, std::size_t, double);
    void (*sabs)(const double*, double*, std::size_t, double);
};

constexpr Table kScalar{"scalar", &scalar::dot, &scalar::axpy,
                        &scalar::weighted_abs_pow_sum, &scalar::pow_nonneg,
                        &scalar::signed_abs_pow};

#if defined(__x86_64__)
constexpr Table kAvx2{"avx2", &avx2::dot, &avx2::axpy,
                      &avx2::weighted_abs_pow_sum, &avx2::pow_nonneg,
                      &avx2::signed_abs_pow};
#endif

const Table* g_active = nullptr;
std::once_flag g_once;

const Table* pick(std::string_view name) {
    if (name == "scalar") return &kScalar;
#if defined(__x86_64__)
    if (name == "avx2") {
        if (!avx2::available())
            throw std::runtime_error("kernels: avx2 backend requested but CPU lacks AVX2");
        return &kAvx2;
    }
#endif
    throw std::runtime_error("kernels: unknown backend '" + std::string(name) + "'");
}

void init() {
    if (const char* env = std::getenv("THINHOM_BACKEND")) {
        g_active = pick(env);
        return;
    }
#if defined(__x86_64__)
    if (avx2::available()) {
        g_active = &kAvx2;
        return;
    }
#endif
    g_active = &kScalar;
}

const Table& active() {
    std::call_once(g_once, init);
    return *g_active;
}

} // namespace

double dot(const double* x, const double* y, std::size_t n) { return active().dot(x, y, n); }
void axpy(double a, const double* x, double* y, std::size_t n) { active().axpy(a, x, y, n); }
double weighted_abs_pow_sum(const double* v, const double* w, std::size_t n, double p) {
    return active().waps(v, w, n, p);
}
void pow_nonneg(const double* s, double* out, std::size_t n, double e) { active().pown(s, out, n, e); }
void signed_abs_pow(const double* u, double* out, std::size_t n, double q) { active().sabs(u, out, n, q); }

std::string_view backend() { return active().name; }

void force_backend(std::string_view name) {
    std::call_once(g_once, init);
    g_active = pick(name);
}

} // namespace thinhom::kern
