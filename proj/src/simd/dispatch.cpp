#include "ctar/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <string>

namespace ctar::simd {

namespace {

struct KernelTable {
    double (*dot)(const double*, const double*, std::size_t);
    double (*sum)(const double*, std::size_t);
    double (*sumsq)(const double*, std::size_t);
    double (*sumabs)(const double*, std::size_t);
    double (*max_abs)(const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*scale)(double, double*, std::size_t);
    void (*mul_ewise)(const double*, const double*, double*, std::size_t);
};

constexpr KernelTable kScalarTable = {
    &scalar::dot,    &scalar::sum,   &scalar::sumsq,     &scalar::sumabs,
    &scalar::max_abs, &scalar::axpy, &scalar::scale,     &scalar::mul_ewise,
};

#if defined(CTAR_HAVE_AVX2)
constexpr KernelTable kAvx2Table = {
    &avx2::dot,    &avx2::sum,   &avx2::sumsq,     &avx2::sumabs,
    &avx2::max_abs, &avx2::axpy, &avx2::scale,     &avx2::mul_ewise,
};
#endif

std::atomic<const KernelTable*> g_table{nullptr};
std::atomic<Backend> g_backend{Backend::scalar};
std::once_flag g_init_once;

bool cpu_has_avx2() {
#if defined(CTAR_HAVE_AVX2) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

void install(Backend b) {
    switch (b) {
        case Backend::scalar:
            g_table.store(&kScalarTable, std::memory_order_release);
            break;
        case Backend::avx2:
#if defined(CTAR_HAVE_AVX2)
            g_table.store(&kAvx2Table, std::memory_order_release);
            break;
#else
            throw std::runtime_error("simd backend avx2 not compiled in");
#endif
    }
    g_backend.store(b, std::memory_order_release);
}

void init_from_environment() {
    const char* env = std::getenv("CTAR_SIMD");
    if (env != nullptr) {
        std::string want(env);
        if (want == "scalar") {
            install(Backend::scalar);
            return;
        }
        if (want == "avx2") {
            if (!backend_available(Backend::avx2))
                throw std::runtime_error("CTAR_SIMD=avx2 requested but avx2 is unavailable");
            install(Backend::avx2);
            return;
        }
        // Unknown value falls through to auto-detection.
    }
    install(backend_available(Backend::avx2) ? Backend::avx2 : Backend::scalar);
}

const KernelTable& table() {
    const KernelTable* t = g_table.load(std::memory_order_acquire);
    if (t == nullptr) {
        std::call_once(g_init_once, init_from_environment);
        t = g_table.load(std::memory_order_acquire);
    }
    return *t;
}

}  // namespace

Backend active_backend() {
    table();
    return g_backend.load(std::memory_order_acquire);
}

bool backend_available(Backend b) {
    if (b == Backend::scalar) return true;
    return cpu_has_avx2();
}

void force_backend(Backend b) {
    if (!backend_available(b))
        throw std::runtime_error(std::string("simd backend unavailable: ") +
                                 std::string(backend_name(b)));
    std::call_once(g_init_once, [] {});  // claim initialization
    install(b);
}

void reset_backend_from_environment() {
    std::call_once(g_init_once, [] {});
    init_from_environment();
}

std::string_view backend_name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
    }
    return "unknown";
}

double dot(const double* a, const double* b, std::size_t n) { return table().dot(a, b, n); }
double sum(const double* a, std::size_t n) { return table().sum(a, n); }
double sumsq(const double* a, std::size_t n) { return table().sumsq(a, n); }
double sumabs(const double* a, std::size_t n) { return table().sumabs(a, n); }
double max_abs(const double* a, std::size_t n) { return table().max_abs(a, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) { table().axpy(alpha, x, y, n); }
void scale(double alpha, double* x, std::size_t n) { table().scale(alpha, x, n); }
void mul_ewise(const double* a, const double* b, double* out, std::size_t n) {
    table().mul_ewise(a, b, out, n);
}

}  // namespace ctar::simd
