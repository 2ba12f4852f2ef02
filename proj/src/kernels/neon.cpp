#include <arm_neon.h>

#include <cmath>

#include "kernel_table.hpp"

namespace femu::kernels::detail {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    }
    double s = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void affine(const double* w, const double* bias, const double* x, double* out,
            std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) out[r] = bias[r] + dot(w + r * cols, x, cols);
}

void swarm_velocity(double* v, const double* p, const double* pbest, const double* gbest,
                    double inertia, const double* a1, const double* a2, std::size_t n) {
    const float64x2_t vw = vdupq_n_f64(inertia);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t pos = vld1q_f64(p + i);
        float64x2_t acc = vmulq_f64(vw, vld1q_f64(v + i));
        acc = vfmaq_f64(acc, vld1q_f64(a1 + i), vsubq_f64(vld1q_f64(pbest + i), pos));
        acc = vfmaq_f64(acc, vld1q_f64(a2 + i), vsubq_f64(vld1q_f64(gbest + i), pos));
        vst1q_f64(v + i, acc);
    }
    for (; i < n; ++i)
        v[i] = inertia * v[i] + a1[i] * (pbest[i] - p[i]) + a2[i] * (gbest[i] - p[i]);
}

CrossSums cross_sums(const double* a, const double* b, std::size_t n) {
    float64x2_t sab = vdupq_n_f64(0.0);
    float64x2_t saa = vdupq_n_f64(0.0);
    float64x2_t sbb = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t va = vld1q_f64(a + i);
        const float64x2_t vb = vld1q_f64(b + i);
        sab = vaddq_f64(sab, vabsq_f64(vmulq_f64(va, vb)));
        saa = vfmaq_f64(saa, va, va);
        sbb = vfmaq_f64(sbb, vb, vb);
    }
    CrossSums s{vaddvq_f64(sab), vaddvq_f64(saa), vaddvq_f64(sbb)};
    for (; i < n; ++i) {
        s.abs_ab += std::abs(a[i] * b[i]);
        s.aa += a[i] * a[i];
        s.bb += b[i] * b[i];
    }
    return s;
}

}  // namespace

const KernelTable& neon_table() {
    static const KernelTable table{dot, axpy, affine, swarm_velocity, cross_sums};
    return table;
}

}  // namespace femu::kernels::detail
