#include "ctar/simd/kernels.hpp"

#include <cmath>

namespace ctar::simd::scalar {

double dot(const double* a, const double* b, std::size_t n) {
    // Four independent accumulators; matches the lane structure of the
    // vector variants closely enough that results differ only in rounding.
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    double s = (s0 + s1) + (s2 + s3);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double sum(const double* a, std::size_t n) {
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += a[i];
        s1 += a[i + 1];
        s2 += a[i + 2];
        s3 += a[i + 3];
    }
    double s = (s0 + s1) + (s2 + s3);
    for (; i < n; ++i) s += a[i];
    return s;
}

double sumsq(const double* a, std::size_t n) { return dot(a, a, n); }

double sumabs(const double* a, std::size_t n) {
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += std::fabs(a[i]);
        s1 += std::fabs(a[i + 1]);
        s2 += std::fabs(a[i + 2]);
        s3 += std::fabs(a[i + 3]);
    }
    double s = (s0 + s1) + (s2 + s3);
    for (; i < n; ++i) s += std::fabs(a[i]);
    return s;
}

double max_abs(const double* a, std::size_t n) {
    double m = 0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(a[i]));
    return m;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale(double alpha, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void mul_ewise(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

}  // namespace ctar::simd::scalar
