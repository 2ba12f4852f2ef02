#pragma once

// Data-parallel inner loops used by the network, the swarm update and the
// mode-shape correlation. Every kernel has a scalar reference implementation;
// vector variants (AVX2+FMA on x86-64, NEON on AArch64) are selected once at
// runtime and must agree with the reference to rounding.

#include <cstddef>
#include <span>
#include <string_view>

namespace femu::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

/// Best instruction set supported by this CPU and compiled into the library.
Isa detected_isa();

/// Instruction set currently used by the dispatching entry points.
Isa active_isa();

/// Force a backend (tests, benchmarking). Requesting an unsupported ISA
/// falls back to Scalar; the ISA actually selected is returned.
Isa set_active_isa(Isa isa);

/// Per-row correlation sums used by COMAC: sum |a_i b_i|, sum a_i^2, sum b_i^2.
struct CrossSums {
    double abs_ab = 0.0;
    double aa = 0.0;
    double bb = 0.0;
};

double dot(std::span<const double> a, std::span<const double> b);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// out = W x + bias, W row-major with out.size() rows and x.size() columns.
void affine(std::span<const double> weights, std::span<const double> bias,
            std::span<const double> x, std::span<double> out);

/// v = w*v + a1 .* (pbest - p) + a2 .* (gbest - p), elementwise.
void swarm_velocity(std::span<double> velocity, std::span<const double> position,
                    std::span<const double> pbest, std::span<const double> gbest,
                    double inertia, std::span<const double> a1, std::span<const double> a2);

CrossSums cross_sums(std::span<const double> a, std::span<const double> b);

// Reference implementations, always available and never dispatched.
namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void affine(const double* w, const double* bias, const double* x, double* out,
            std::size_t rows, std::size_t cols);
void swarm_velocity(double* v, const double* p, const double* pbest, const double* gbest,
                    double inertia, const double* a1, const double* a2, std::size_t n);
CrossSums cross_sums(const double* a, const double* b, std::size_t n);
}  // namespace scalar

}  // namespace femu::kernels
