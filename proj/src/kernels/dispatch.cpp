#include <atomic>
#include <string>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "kernel_table.hpp"

namespace femu::kernels {
namespace {

bool cpu_has_avx2() {
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const detail::KernelTable& table_for(Isa isa) {
    switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
        case Isa::Avx2:
            return detail::avx2_table();
#endif
#if defined(__aarch64__)
        case Isa::Neon:
            return detail::neon_table();
#endif
        default:
            return detail::scalar_table();
    }
}

bool supported(Isa isa) {
    switch (isa) {
        case Isa::Scalar:
            return true;
        case Isa::Avx2:
            return cpu_has_avx2();
        case Isa::Neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

// FEMU_ISA=scalar pins the reference path for a whole process.
Isa initial_isa() {
    if (const char* env = std::getenv("FEMU_ISA"); env != nullptr && std::strcmp(env, "scalar") == 0)
        return Isa::Scalar;
    return detected_isa();
}

std::atomic<const detail::KernelTable*>& active_table() {
    static std::atomic<const detail::KernelTable*> table{&table_for(initial_isa())};
    return table;
}

std::atomic<Isa>& active_tag() {
    static std::atomic<Isa> tag{initial_isa()};
    return tag;
}

void require_same_size(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw std::invalid_argument(std::string(what) + ": size mismatch");
}

}  // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::Scalar:
            return "scalar";
        case Isa::Avx2:
            return "avx2";
        case Isa::Neon:
            return "neon";
    }
    return "unknown";
}

Isa detected_isa() {
#if defined(__aarch64__)
    return Isa::Neon;
#else
    return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
#endif
}

Isa active_isa() { return active_tag().load(std::memory_order_relaxed); }

Isa set_active_isa(Isa isa) {
    if (!supported(isa)) isa = Isa::Scalar;
    active_table().store(&table_for(isa), std::memory_order_relaxed);
    active_tag().store(isa, std::memory_order_relaxed);
    return isa;
}

double dot(std::span<const double> a, std::span<const double> b) {
    require_same_size(a.size(), b.size(), "dot");
    return active_table().load(std::memory_order_relaxed)->dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    require_same_size(x.size(), y.size(), "axpy");
    active_table().load(std::memory_order_relaxed)->axpy(alpha, x.data(), y.data(), x.size());
}

void affine(std::span<const double> weights, std::span<const double> bias,
            std::span<const double> x, std::span<double> out) {
    require_same_size(bias.size(), out.size(), "affine");
    require_same_size(weights.size(), out.size() * x.size(), "affine");
    active_table().load(std::memory_order_relaxed)
        ->affine(weights.data(), bias.data(), x.data(), out.data(), out.size(), x.size());
}

void swarm_velocity(std::span<double> velocity, std::span<const double> position,
                    std::span<const double> pbest, std::span<const double> gbest,
                    double inertia, std::span<const double> a1, std::span<const double> a2) {
    const std::size_t n = velocity.size();
    require_same_size(position.size(), n, "swarm_velocity");
    require_same_size(pbest.size(), n, "swarm_velocity");
    require_same_size(gbest.size(), n, "swarm_velocity");
    require_same_size(a1.size(), n, "swarm_velocity");
    require_same_size(a2.size(), n, "swarm_velocity");
    active_table().load(std::memory_order_relaxed)
        ->swarm_velocity(velocity.data(), position.data(), pbest.data(), gbest.data(), inertia,
                         a1.data(), a2.data(), n);
}

CrossSums cross_sums(std::span<const double> a, std::span<const double> b) {
    require_same_size(a.size(), b.size(), "cross_sums");
    return active_table().load(std::memory_order_relaxed)->cross_sums(a.data(), b.data(), a.size());
}

}  // namespace femu::kernels
