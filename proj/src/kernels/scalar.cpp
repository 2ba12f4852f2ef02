#include <cmath>

#include "kernel_table.hpp"

namespace femu::kernels {
namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void affine(const double* w, const double* bias, const double* x, double* out,
            std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) out[r] = bias[r] + dot(w + r * cols, x, cols);
}

void swarm_velocity(double* v, const double* p, const double* pbest, const double* gbest,
                    double inertia, const double* a1, const double* a2, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        v[i] = inertia * v[i] + a1[i] * (pbest[i] - p[i]) + a2[i] * (gbest[i] - p[i]);
}

CrossSums cross_sums(const double* a, const double* b, std::size_t n) {
    CrossSums s;
    for (std::size_t i = 0; i < n; ++i) {
        s.abs_ab += std::abs(a[i] * b[i]);
        s.aa += a[i] * a[i];
        s.bb += b[i] * b[i];
    }
    return s;
}

}  // namespace scalar

namespace detail {

const KernelTable& scalar_table() {
    static const KernelTable table{scalar::dot, scalar::axpy, scalar::affine,
                                   scalar::swarm_velocity, scalar::cross_sums};
    return table;
}

}  // namespace detail
}  // namespace femu::kernels
