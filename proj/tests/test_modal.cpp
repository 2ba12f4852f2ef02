#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <limits>
#include <random>

#include "femu/errors.hpp"
#include "femu/modal.hpp"
#include "random_models.hpp"

using namespace femu;

namespace {

GlobalMatrices two_dof() {
    GlobalMatrices g{Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd(2, 2)};
    g.stiffness << 2.0, -1.0, -1.0, 1.0;
    return g;
}

ModalSolution single_mode(double omega, double phi) {
    ModalSolution s;
    s.frequencies = Eigen::VectorXd::Constant(1, omega / (2.0 * std::numbers::pi));
    s.mode_shapes = Eigen::MatrixXd::Constant(1, 1, phi);
    return s;
}

double direct_comac_row(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, int j) {
    double num = 0.0, da = 0.0, db = 0.0;
    for (int i = 0; i < a.cols(); ++i) {
        num += std::fabs(a(j, i) * b(j, i));
        da += a(j, i) * a(j, i);
        db += b(j, i) * b(j, i);
    }
    return num * num / (da * db);
}

}  // namespace

TEST(SolveModes, TwoDofClosedForm) {
    const auto s = solve_modes(two_dof(), 2);
    ASSERT_EQ(s.mode_count(), 2);
    EXPECT_EQ(s.n_rigid, 0);
    const double two_pi = 2.0 * std::numbers::pi;
    EXPECT_NEAR(s.frequencies(0), std::sqrt((3.0 - std::sqrt(5.0)) / 2.0) / two_pi, 1e-12);
    EXPECT_NEAR(s.frequencies(1), std::sqrt((3.0 + std::sqrt(5.0)) / 2.0) / two_pi, 1e-12);
    EXPECT_NEAR(s.frequencies(0), 0.09836, 1e-5);
    EXPECT_NEAR(s.frequencies(1), 0.25752, 1e-5);
}

TEST(SolveModes, ScalingStiffnessByFourDoublesFrequencies) {
    auto g = two_dof();
    const auto a = solve_modes(g, 2);
    g.stiffness *= 4.0;
    const auto b = solve_modes(g, 2);
    for (int i = 0; i < 2; ++i) {
        EXPECT_NEAR(b.frequencies(i), 2.0 * a.frequencies(i), 1e-12);
        EXPECT_TRUE(b.mode_shapes.col(i).isApprox(a.mode_shapes.col(i), 1e-12));
    }
}

TEST(SolveModes, SignConventionLargestEntryPositive) {
    const auto s = structure_modes(make_h_structure(), 5);
    for (int i = 0; i < s.mode_count(); ++i) {
        Eigen::Index at = 0;
        s.mode_shapes.col(i).cwiseAbs().maxCoeff(&at);
        EXPECT_GT(s.mode_shapes(at, i), 0.0);
    }
    const auto again = structure_modes(make_h_structure(), 5);
    EXPECT_EQ(s.frequencies, again.frequencies);
    EXPECT_EQ(s.mode_shapes, again.mode_shapes);
}

TEST(SolveModes, FreeFreeBeamMatchesClosedForm) {
    const double L = 0.6;
    const ElementSection sec{0.0322 * 0.0098, 0.0322 * std::pow(0.0098, 3) / 12.0, 2700.0};
    const double E = 7e10;
    const auto s = structure_modes(make_uniform_beam(12, L, sec, E), 3);
    EXPECT_EQ(s.n_rigid, 3);
    const double c = std::sqrt(E * sec.second_moment / (sec.density * sec.area)) / (2.0 * std::numbers::pi * L * L);
    const double beta_l[3] = {4.730040744862704, 7.853204624095838, 10.99560783800167};
    for (int i = 0; i < 3; ++i)
        EXPECT_NEAR(s.frequencies(i) / (beta_l[i] * beta_l[i] * c), 1.0, 0.01) << "mode " << i + 1;
}

TEST(SolveModes, HStructureHasThreeRigidModesAndAscendingFrequencies) {
    const auto s = structure_modes(make_h_structure(), 10);
    EXPECT_EQ(s.n_rigid, 3);
    for (int i = 1; i < s.mode_count(); ++i) EXPECT_GT(s.frequencies(i), s.frequencies(i - 1));
    EXPECT_GT(s.frequencies(0), 0.0);
}

TEST(SolveModes, RandomModelsResidualAndOrthonormality) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const auto model = femu::testing::random_frame(rng);
        const auto g = assemble(model);
        const int m = static_cast<int>(model.dof_count()) - 3;
        const auto s = solve_modes(g, m, {.expected_rigid = 3});
        for (int i = 0; i < m; ++i) {
            const Eigen::VectorXd phi = s.mode_shapes.col(i);
            const double w2 = s.omega(i) * s.omega(i);
            const Eigen::VectorXd kphi = g.stiffness * phi;
            EXPECT_LT((kphi - w2 * (g.mass * phi)).norm() / kphi.norm(), 1e-8);
        }
        const Eigen::MatrixXd gram = s.mode_shapes.transpose() * g.mass * s.mode_shapes;
        EXPECT_LT((gram - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff(), 1e-8);
    }
}

// Long thin members: the relative residual is bounded by rounding in K phi itself.
TEST(SolveModes, SlenderFramesStayNearRoundingFloor) {
    std::mt19937_64 rng(2718);
    for (int trial = 0; trial < 30; ++trial) {
        auto model = femu::testing::random_frame(rng);
        for (auto& node : model.nodes) node.x *= 6.0;
        for (auto& e : model.elements) {
            e.section.area *= 0.5;
            e.section.second_moment *= 0.5 * 0.5 * 0.5;
        }
        const auto g = assemble(model);
        const int m = static_cast<int>(model.dof_count()) - 3;
        const auto s = solve_modes(g, m, {.expected_rigid = 3});
        const double knorm = g.stiffness.norm();
        for (int i = 0; i < m; ++i) {
            const Eigen::VectorXd phi = s.mode_shapes.col(i);
            const Eigen::VectorXd kphi = g.stiffness * phi;
            const double floor = std::numeric_limits<double>::epsilon() * knorm * phi.norm();
            const double w2 = s.omega(i) * s.omega(i);
            EXPECT_LT((kphi - w2 * (g.mass * phi)).norm(), 10.0 * floor);
        }
    }
}

TEST(SolveModes, Errors) {
    auto g = two_dof();
    EXPECT_THROW(solve_modes(g, 3), ModalError);
    EXPECT_THROW(solve_modes(g, 2, {.expected_rigid = 3}), ModalError);
    g.mass(1, 1) = -1.0;
    EXPECT_THROW(solve_modes(g, 1), ModalError);
}

TEST(Frf, ZeroFrequencyGivesZero) {
    const auto s = solve_modes(two_dof(), 2);
    const auto h = frf_inertance(s, {0, 1, {0.02}, {0.0, 0.1}});
    EXPECT_EQ(h[0], std::complex<double>(0.0, 0.0));
    EXPECT_NE(h[1], std::complex<double>(0.0, 0.0));
}

TEST(Frf, MassLineAsymptote) {
    const auto s = single_mode(10.0, 0.7);
    const auto h = frf_inertance(s, {0, 0, {0.0}, {1e7}});
    EXPECT_NEAR(h[0].real(), 0.49, 1e-9);
}

TEST(Frf, PeakNearFirstResonance) {
    const auto s = solve_modes(two_dof(), 2);
    const double w1 = s.omega(0);
    std::vector<double> grid;
    const double step = 1e-4;
    for (double w = 0.2; w < 0.9; w += step) grid.push_back(w);
    const auto h = frf_inertance(s, {1, 1, {0.01}, grid});
    std::size_t best = 0;
    for (std::size_t i = 0; i < h.size(); ++i)
        if (std::abs(h[i]) > std::abs(h[best])) best = i;
    EXPECT_LE(std::fabs(grid[best] - w1), step);
}

TEST(Frf, DirectSumOracleAndReciprocity) {
    const auto s = structure_modes(make_h_structure(), 5);
    std::vector<double> grid;
    for (int i = 1; i <= 50; ++i) grid.push_back(60.0 * i);
    const std::vector<double> zeta{0.01, 0.02, 0.015, 0.01, 0.03};
    const auto kl = frf_inertance(s, {4, 30, zeta, grid});
    const auto lk = frf_inertance(s, {30, 4, zeta, grid});
    for (std::size_t g = 0; g < grid.size(); ++g) {
        std::complex<double> ref = 0.0;
        const double w = grid[g];
        for (int i = 0; i < 5; ++i) {
            const double wi = s.omega(i);
            ref += -w * w * s.mode_shapes(4, i) * s.mode_shapes(30, i) /
                   std::complex<double>(wi * wi - w * w, 2.0 * zeta[i] * wi * w);
        }
        EXPECT_LT(std::abs(kl[g] - ref), 1e-12 * (1.0 + std::abs(ref)));
        EXPECT_LE(std::abs(kl[g] - lk[g]), 1e-14 * std::abs(kl[g]));
    }
}

TEST(Frf, UndampedPoleNamesTheMode) {
    const auto s = solve_modes(two_dof(), 2);
    try {
        frf_inertance(s, {0, 0, {0.0}, {s.omega(1)}});
        FAIL();
    } catch (const ModalError& ex) {
        EXPECT_NE(std::string(ex.what()).find("mode 2"), std::string::npos) << ex.what();
    }
    EXPECT_THROW(frf_inertance(s, {0, 0, {1.5}, {1.0}}), ModalError);
    EXPECT_THROW(frf_inertance(s, {0, 5, {0.1}, {1.0}}), ModalError);
}

TEST(Comac, IdentityGivesOne) {
    const auto s = structure_modes(make_h_structure(), 5);
    const auto a = select_measured(s, make_h_structure().measured_dofs);
    for (double c : comac(a, a)) EXPECT_NEAR(c, 1.0, 1e-12);
    EXPECT_NEAR(average_comac(comac(a, a)), 1.0, 1e-12);
}

TEST(Comac, UncorrelatedRowGivesZero) {
    Eigen::MatrixXd a(2, 2), b(2, 2);
    a << 1.0, 0.0, 1.0, 1.0;
    b << 0.0, 1.0, 1.0, 1.0;
    const auto c = comac(a, b);
    EXPECT_EQ(c[0], 0.0);
    EXPECT_NEAR(c[1], 1.0, 1e-15);
}

TEST(Comac, MatchesDirectSummationOnRandomInputs) {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> d(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::MatrixXd a(15, 5), b(15, 5);
        for (int i = 0; i < a.size(); ++i) {
            a(i) = d(rng);
            b(i) = d(rng);
        }
        const auto c = comac(a, b);
        for (int j = 0; j < 15; ++j) {
            EXPECT_NEAR(c[j], direct_comac_row(a, b, j), 1e-12);
            EXPECT_GE(c[j], 0.0);
            EXPECT_LE(c[j], 1.0);
        }
    }
}

TEST(Comac, Errors) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Ones(3, 2);
    Eigen::MatrixXd b = a;
    b.row(1).setZero();
    try {
        comac(a, b);
        FAIL();
    } catch (const ModalError& ex) {
        EXPECT_NE(std::string(ex.what()).find("row 1"), std::string::npos) << ex.what();
    }
    EXPECT_THROW(comac(a, Eigen::MatrixXd::Ones(3, 3)), ModalError);
    EXPECT_THROW(average_comac({}), ModalError);
}

TEST(Comac, AverageIsArithmeticMean) {
    const std::vector<double> v{0.0, 1.0};
    EXPECT_DOUBLE_EQ(average_comac(v), 0.5);
}

TEST(SelectMeasured, RowsInGivenOrder) {
    const auto model = make_h_structure();
    const auto s = structure_modes(model, 5);
    std::vector<int> all(model.dof_count());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    EXPECT_EQ(select_measured(s, all), s.mode_shapes);
    const std::vector<int> first{0};
    EXPECT_EQ(select_measured(s, first), s.mode_shapes.topRows(1));
    const auto measured = select_measured(s, model.measured_dofs);
    EXPECT_EQ(measured.rows(), 15);
    EXPECT_EQ(measured.row(3), s.mode_shapes.row(model.measured_dofs[3]));
    const std::vector<int> bad{99};
    EXPECT_THROW(select_measured(s, bad), ModalError);
}
