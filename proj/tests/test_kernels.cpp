#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "femu/kernels.hpp"

namespace k = femu::kernels;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> d(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

double tol(double scale) { return 1e-13 * (1.0 + scale); }

class IsaGuard {
public:
    IsaGuard() : saved_(k::active_isa()) {}
    ~IsaGuard() { k::set_active_isa(saved_); }

private:
    k::Isa saved_;
};

const std::size_t kSizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 12, 15, 16, 17, 31, 64, 101};

}  // namespace

TEST(Kernels, ForcedScalarIsHonoured) {
    IsaGuard guard;
    EXPECT_EQ(k::set_active_isa(k::Isa::Scalar), k::Isa::Scalar);
    EXPECT_EQ(k::active_isa(), k::Isa::Scalar);
}

TEST(Kernels, UnsupportedIsaFallsBackToScalar) {
    IsaGuard guard;
#if defined(__x86_64__)
    EXPECT_EQ(k::set_active_isa(k::Isa::Neon), k::Isa::Scalar);
#elif defined(__aarch64__)
    EXPECT_EQ(k::set_active_isa(k::Isa::Avx2), k::Isa::Scalar);
#endif
}

TEST(Kernels, DispatchedMatchesReferenceAcrossSizes) {
    IsaGuard guard;
    k::set_active_isa(k::detected_isa());
    std::mt19937_64 rng(11);
    for (std::size_t n : kSizes) {
        SCOPED_TRACE(n);
        const auto a = random_vector(rng, n);
        const auto b = random_vector(rng, n);

        double scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) scale += std::abs(a[i] * b[i]);
        EXPECT_NEAR(k::dot(a, b), k::scalar::dot(a.data(), b.data(), n), tol(scale));

        auto y1 = random_vector(rng, n);
        auto y2 = y1;
        k::axpy(0.37, a, y1);
        k::scalar::axpy(0.37, a.data(), y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y1[i], y2[i], tol(std::abs(y2[i])));

        const auto s1 = k::cross_sums(a, b);
        const auto s2 = k::scalar::cross_sums(a.data(), b.data(), n);
        EXPECT_NEAR(s1.abs_ab, s2.abs_ab, tol(s2.abs_ab));
        EXPECT_NEAR(s1.aa, s2.aa, tol(s2.aa));
        EXPECT_NEAR(s1.bb, s2.bb, tol(s2.bb));

        const auto p = random_vector(rng, n);
        const auto pb = random_vector(rng, n);
        const auto gb = random_vector(rng, n);
        const auto a1 = random_vector(rng, n);
        const auto a2 = random_vector(rng, n);
        auto v1 = random_vector(rng, n);
        auto v2 = v1;
        k::swarm_velocity(v1, p, pb, gb, 0.72, a1, a2);
        k::scalar::swarm_velocity(v2.data(), p.data(), pb.data(), gb.data(), 0.72, a1.data(),
                                  a2.data(), n);
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(v1[i], v2[i], tol(std::abs(v2[i])));
    }
}

TEST(Kernels, AffineMatchesReference) {
    IsaGuard guard;
    k::set_active_isa(k::detected_isa());
    std::mt19937_64 rng(5);
    for (std::size_t rows : {1u, 3u, 8u}) {
        for (std::size_t cols : kSizes) {
            const auto w = random_vector(rng, rows * cols);
            const auto bias = random_vector(rng, rows);
            const auto x = random_vector(rng, cols);
            std::vector<double> o1(rows), o2(rows);
            k::affine(w, bias, x, o1);
            k::scalar::affine(w.data(), bias.data(), x.data(), o2.data(), rows, cols);
            for (std::size_t r = 0; r < rows; ++r) EXPECT_NEAR(o1[r], o2[r], tol(10.0 * cols));
        }
    }
}

TEST(Kernels, ReferenceValuesByHand) {
    const std::vector<double> a{1, -2, 3};
    const std::vector<double> b{4, 5, -6};
    EXPECT_DOUBLE_EQ(k::dot(a, b), 4.0 - 10.0 - 18.0);
    const auto s = k::cross_sums(a, b);
    EXPECT_DOUBLE_EQ(s.abs_ab, 4.0 + 10.0 + 18.0);
    EXPECT_DOUBLE_EQ(s.aa, 14.0);
    EXPECT_DOUBLE_EQ(s.bb, 77.0);

    const std::vector<double> w{1, 2, 3, 4, 5, 6};
    const std::vector<double> bias{0.5, -0.5};
    std::vector<double> out(2);
    k::affine(w, bias, a, out);
    EXPECT_DOUBLE_EQ(out[0], 1 - 4 + 9 + 0.5);
    EXPECT_DOUBLE_EQ(out[1], 4 - 10 + 18 - 0.5);
}

TEST(Kernels, SizeMismatchThrows) {
    const std::vector<double> a(3), b(4);
    EXPECT_THROW(k::dot(a, b), std::invalid_argument);
    EXPECT_THROW(k::cross_sums(a, b), std::invalid_argument);
    std::vector<double> out(2);
    EXPECT_THROW(k::affine(a, a, a, out), std::invalid_argument);
}
