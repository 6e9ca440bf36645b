#pragma once

#include <cstddef>
#include <string_view>

// Data-parallel inner loops used by the numeric layers: sliding dot products
// for discrete convolution and autocovariance, reductions for norms, and
// fused accumulation for kernel series.  Scalar reference implementations
// always exist; an AVX2+FMA variant is selected at runtime on capable CPUs.
// The two backends agree up to reduction reordering (see tests/test_simd.cpp).

namespace ctar::simd {

enum class Backend { scalar, avx2 };

// Backend in effect for the dispatched entry points below.
Backend active_backend();

// Forces a backend (tests, reproducibility pinning).  Throws std::runtime_error
// if the requested backend is not available on this CPU/build.
void force_backend(Backend b);

// Honors the CTAR_SIMD environment variable ("scalar" or "avx2"), otherwise
// picks the widest available backend.  Called lazily on first use.
void reset_backend_from_environment();

std::string_view backend_name(Backend b);
bool backend_available(Backend b);

// Dispatched kernels.
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double sumsq(const double* a, std::size_t n);
double sumabs(const double* a, std::size_t n);
double max_abs(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);  // y += alpha*x
void scale(double alpha, double* x, std::size_t n);                  // x *= alpha
void mul_ewise(const double* a, const double* b, double* out, std::size_t n);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double sumsq(const double* a, std::size_t n);
double sumabs(const double* a, std::size_t n);
double max_abs(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
void mul_ewise(const double* a, const double* b, double* out, std::size_t n);
}  // namespace scalar

#if defined(CTAR_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double sumsq(const double* a, std::size_t n);
double sumabs(const double* a, std::size_t n);
double max_abs(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
void mul_ewise(const double* a, const double* b, double* out, std::size_t n);
}  // namespace avx2
#endif

}  // namespace ctar::simd
