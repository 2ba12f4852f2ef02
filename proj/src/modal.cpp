#include "femu/modal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "femu/errors.hpp"
#include "femu/kernels.hpp"

namespace femu {

double ModalSolution::omega(int mode) const { return 2.0 * std::numbers::pi * frequencies(mode); }

ModalSolution solve_modes(const GlobalMatrices& matrices, int n_modes, const ModalOptions& options) {
    const Eigen::MatrixXd& K = matrices.stiffness;
    const Eigen::MatrixXd& M = matrices.mass;
    const Eigen::Index n = M.rows();
    if (M.cols() != n || K.rows() != n || K.cols() != n)
        throw ModalError("mass and stiffness must be square and of equal size");
    if (n_modes < 1) throw ModalError("n_modes must be at least 1");

    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() != Eigen::Success) throw ModalError("mass matrix is not positive definite");

    // C = L^-1 K L^-T
    Eigen::MatrixXd C = llt.matrixL().solve(K);
    C = llt.matrixL().solve(C.transpose()).transpose();
    C = 0.5 * (C + C.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C);
    if (eig.info() != Eigen::Success)
        throw ModalError("symmetric eigensolver did not converge (n = " + std::to_string(n) + ")");

    const Eigen::VectorXd& lambda = eig.eigenvalues();  // ascending
    const double scale = std::max(std::abs(lambda(0)), std::abs(lambda(n - 1)));
    const double cutoff = options.rigid_tolerance * scale;
    int n_rigid = 0;
    while (n_rigid < n && lambda(n_rigid) < cutoff) ++n_rigid;

    if (options.expected_rigid && n_rigid != *options.expected_rigid)
        throw ModalError("found " + std::to_string(n_rigid) + " rigid-body modes, expected " +
                         std::to_string(*options.expected_rigid));
    if (n_rigid + n_modes > n)
        throw ModalError("requested " + std::to_string(n_modes) + " elastic modes but only " +
                         std::to_string(n - n_rigid) + " exist");

    ModalSolution out;
    out.n_rigid = n_rigid;
    out.frequencies.resize(n_modes);
    // phi = L^-T y is M-orthonormal when y is orthonormal.
    out.mode_shapes =
        llt.matrixU().solve(eig.eigenvectors().middleCols(n_rigid, n_modes));
    for (int i = 0; i < n_modes; ++i) {
        out.frequencies(i) = std::sqrt(lambda(n_rigid + i)) / (2.0 * std::numbers::pi);
        auto col = out.mode_shapes.col(i);
        Eigen::Index arg = 0;
        col.cwiseAbs().maxCoeff(&arg);
        if (col(arg) < 0.0) col = -col;
    }
    return out;
}

ModalSolution structure_modes(const StructureModel& model, int n_modes) {
    ModalOptions options;
    options.expected_rigid = 3;
    return solve_modes(assemble(model), n_modes, options);
}

std::vector<std::complex<double>> frf_inertance(const ModalSolution& solution,
                                                const FrfSpec& spec) {
    const auto n_dof = solution.mode_shapes.rows();
    const int m = solution.mode_count();
    if (spec.excitation_dof < 0 || spec.excitation_dof >= n_dof || spec.response_dof < 0 ||
        spec.response_dof >= n_dof)
        throw ModalError("FRF DOF index out of range");
    if (spec.damping_ratios.size() != 1 && spec.damping_ratios.size() != static_cast<std::size_t>(m))
        throw ModalError("damping_ratios must have one entry or one per mode");
    for (double z : spec.damping_ratios)
        if (!(z >= 0.0 && z < 1.0)) throw ModalError("damping ratio must lie in [0, 1)");
    for (double w : spec.omega)
        if (!(w >= 0.0)) throw ModalError("frequency grid values must be non-negative");

    auto zeta = [&](int i) {
        return spec.damping_ratios.size() == 1 ? spec.damping_ratios[0] : spec.damping_ratios[i];
    };

    std::vector<std::complex<double>> h(spec.omega.size());
    for (std::size_t g = 0; g < spec.omega.size(); ++g) {
        const double w = spec.omega[g];
        std::complex<double> sum = 0.0;
        for (int i = 0; i < m; ++i) {
            const double wi = solution.omega(i);
            const std::complex<double> denom(wi * wi - w * w, 2.0 * zeta(i) * wi * w);
            if (denom == 0.0) {
                if (w == 0.0) continue;  // numerator is zero as well
                throw ModalError("undamped pole: grid frequency coincides with mode " +
                                 std::to_string(i + 1));
            }
            const double num = -w * w * solution.mode_shapes(spec.excitation_dof, i) *
                               solution.mode_shapes(spec.response_dof, i);
            sum += num / denom;
        }
        h[g] = sum;
    }
    return h;
}

std::vector<double> comac(const Eigen::MatrixXd& shapes_a, const Eigen::MatrixXd& shapes_b) {
    if (shapes_a.rows() != shapes_b.rows() || shapes_a.cols() != shapes_b.cols())
        throw ModalError("COMAC inputs must have identical dimensions");
    if (shapes_a.cols() < 1) throw ModalError("COMAC needs at least one mode");

    // Rows are strided in Eigen's column-major storage; copy them contiguous.
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> a = shapes_a;
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> b = shapes_b;
    const auto m = static_cast<std::size_t>(a.cols());

    std::vector<double> out(static_cast<std::size_t>(a.rows()));
    for (Eigen::Index j = 0; j < a.rows(); ++j) {
        const auto s = kernels::cross_sums({a.row(j).data(), m}, {b.row(j).data(), m});
        if (s.aa == 0.0 || s.bb == 0.0)
            throw ModalError("COMAC undefined at measured DOF row " + std::to_string(j) +
                             ": all-zero mode-shape entries");
        const double value = (s.abs_ab * s.abs_ab) / (s.aa * s.bb);
        out[static_cast<std::size_t>(j)] = std::clamp(value, 0.0, 1.0);
    }
    return out;
}

double average_comac(std::span<const double> values) {
    if (values.empty()) throw ModalError("average of an empty COMAC vector");
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

Eigen::MatrixXd select_measured(const ModalSolution& solution, std::span<const int> dofs) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(dofs.size()), solution.mode_shapes.cols());
    for (std::size_t r = 0; r < dofs.size(); ++r) {
        if (dofs[r] < 0 || dofs[r] >= solution.mode_shapes.rows())
            throw ModalError("measured DOF " + std::to_string(dofs[r]) + " out of range");
        out.row(static_cast<Eigen::Index>(r)) = solution.mode_shapes.row(dofs[r]);
    }
    return out;
}

}  // namespace femu
