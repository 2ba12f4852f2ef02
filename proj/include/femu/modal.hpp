#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "femu/beam_fe.hpp"

namespace femu {

/// Elastic modes of an undamped (M, K) pencil. Rigid-body modes are dropped.
struct ModalSolution {
    Eigen::VectorXd frequencies;  // Hz, ascending
    Eigen::MatrixXd mode_shapes;  // n_dof x n_modes, mass-normalised columns
    int n_rigid = 0;

    int mode_count() const { return static_cast<int>(frequencies.size()); }
    double omega(int mode) const;  // rad/s
};

struct ModalOptions {
    /// When set, the number of near-zero eigenvalues must equal this (3 for a
    /// free-free plane frame) or solve_modes throws.
    std::optional<int> expected_rigid;
    /// Eigenvalues below rigid_tolerance * max eigenvalue are treated as rigid.
    double rigid_tolerance = 1e-9;
};

/// Solves K phi = omega^2 M phi by Cholesky reduction of M to a standard
/// symmetric problem. Each shape is scaled so its largest-magnitude entry is
/// positive. Throws ModalError when M is not positive definite, the solver
/// fails, or fewer than `n_modes` elastic modes exist.
ModalSolution solve_modes(const GlobalMatrices& matrices, int n_modes,
                          const ModalOptions& options = {});

/// assemble + solve_modes with exactly three rigid-body modes required.
ModalSolution structure_modes(const StructureModel& model, int n_modes);

struct FrfSpec {
    int excitation_dof = 0;
    int response_dof = 0;
    std::vector<double> damping_ratios;  // one per mode, or a single shared value
    std::vector<double> omega;           // rad/s
};

/// Inertance H_kl(w) = sum_i -w^2 phi_k,i phi_l,i / (w_i^2 - w^2 + 2 j zeta_i w_i w).
std::vector<std::complex<double>> frf_inertance(const ModalSolution& solution,
                                                const FrfSpec& spec);

/// Coordinate modal assurance criterion per row (measured DOF) of two shape sets
/// of identical shape n_meas x m.
std::vector<double> comac(const Eigen::MatrixXd& shapes_a, const Eigen::MatrixXd& shapes_b);

double average_comac(std::span<const double> values);

/// Rows of the mode-shape matrix at `dofs`, in the given order.
Eigen::MatrixXd select_measured(const ModalSolution& solution, std::span<const int> dofs);

}  // namespace femu
