// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <cmath>

#include "kernel_table.hpp"

namespace femu::kernels::detail {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sw = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sw));
}

inline __m256d abs_pd(__m256d v) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i,
                         _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void affine(const double* w, const double* bias, const double* x, double* out,
            std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) out[r] = bias[r] + dot(w + r * cols, x, cols);
}

void swarm_velocity(double* v, const double* p, const double* pbest, const double* gbest,
                    double inertia, const double* a1, const double* a2, std::size_t n) {
    const __m256d vw = _mm256_set1_pd(inertia);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d pos = _mm256_loadu_pd(p + i);
        __m256d acc = _mm256_mul_pd(vw, _mm256_loadu_pd(v + i));
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a1 + i),
                              _mm256_sub_pd(_mm256_loadu_pd(pbest + i), pos), acc);
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a2 + i),
                              _mm256_sub_pd(_mm256_loadu_pd(gbest + i), pos), acc);
        _mm256_storeu_pd(v + i, acc);
    }
    for (; i < n; ++i)
        v[i] = inertia * v[i] + a1[i] * (pbest[i] - p[i]) + a2[i] * (gbest[i] - p[i]);
}

CrossSums cross_sums(const double* a, const double* b, std::size_t n) {
    __m256d sab = _mm256_setzero_pd();
    __m256d saa = _mm256_setzero_pd();
    __m256d sbb = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d va = _mm256_loadu_pd(a + i);
        const __m256d vb = _mm256_loadu_pd(b + i);
        sab = _mm256_add_pd(sab, abs_pd(_mm256_mul_pd(va, vb)));
        saa = _mm256_fmadd_pd(va, va, saa);
        sbb = _mm256_fmadd_pd(vb, vb, sbb);
    }
    CrossSums s{hsum(sab), hsum(saa), hsum(sbb)};
    for (; i < n; ++i) {
        s.abs_ab += std::abs(a[i] * b[i]);
        s.aa += a[i] * a[i];
        s.bb += b[i] * b[i];
    }
    return s;
}

}  // namespace

const KernelTable& avx2_table() {
    static const KernelTable table{dot, axpy, affine, swarm_velocity, cross_sums};
    return table;
}

}  // namespace femu::kernels::detail
