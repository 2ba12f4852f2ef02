#pragma once

#include "femu/kernels.hpp"

namespace femu::kernels::detail {

struct KernelTable {
    double (*dot)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*affine)(const double*, const double*, const double*, double*, std::size_t,
                   std::size_t);
    void (*swarm_velocity)(double*, const double*, const double*, const double*, double,
                           const double*, const double*, std::size_t);
    CrossSums (*cross_sums)(const double*, const double*, std::size_t);
};

const KernelTable& scalar_table();

#if defined(__x86_64__) || defined(_M_X64)
const KernelTable& avx2_table();
#endif

#if defined(__aarch64__)
const KernelTable& neon_table();
#endif

}  // namespace femu::kernels::detail
