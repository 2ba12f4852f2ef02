#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace femu {

/// Per-node degrees of freedom of the in-plane frame: axial u (x), transverse v (y)
/// and rotation theta about the out-of-plane axis.
enum class Dof : int { U = 0, V = 1, Theta = 2 };

inline constexpr int kDofsPerNode = 3;

constexpr int dof_index(int node, Dof dof) { return kDofsPerNode * node + static_cast<int>(dof); }

struct Node {
    int id = 0;
    double x = 0.0;  // m
    double y = 0.0;  // m
};

struct ElementSection {
    double area = 0.0;           // m^2
    double second_moment = 0.0;  // m^4, bending about the out-of-plane axis
    double density = 0.0;        // kg/m^3

    bool operator==(const ElementSection&) const = default;
};

struct FrameElement {
    int id = 0;
    int node_a = 0;
    int node_b = 0;
    ElementSection section;
    double modulus = 0.0;  // Pa
};

struct StructureModel {
    std::vector<Node> nodes;
    std::vector<FrameElement> elements;
    std::vector<int> measured_dofs;

    std::size_t dof_count() const { return kDofsPerNode * nodes.size(); }
    std::size_t element_count() const { return elements.size(); }

    std::vector<double> moduli() const;

    /// Throws GeometryError / std::invalid_argument when an invariant is broken:
    /// contiguous node ids, valid element connectivity, positive section data,
    /// non-degenerate element lengths, distinct in-range measured DOFs.
    void validate() const;

    /// True when every node is reachable from node 0 through elements.
    bool is_connected() const;
};

struct GlobalMatrices {
    Eigen::MatrixXd mass;
    Eigen::MatrixXd stiffness;
};

using Matrix6 = Eigen::Matrix<double, 6, 6>;

/// Local-frame element matrices, DOF order (u_a, v_a, theta_a, u_b, v_b, theta_b).
struct ElementMatrices {
    Matrix6 stiffness;
    Matrix6 mass;
};

double element_length(const FrameElement& element, std::span<const Node> nodes);

/// Axial bar plus cubic-Hermite bending stiffness and consistent mass in the
/// element's local frame.
ElementMatrices element_matrices(const FrameElement& element, std::span<const Node> nodes);

/// Local-to-global rotation T such that k_global = T^T k_local T.
Matrix6 element_rotation(const FrameElement& element, std::span<const Node> nodes);

/// Global dense mass and stiffness. Throws GeometryError for a disconnected mesh.
GlobalMatrices assemble(const StructureModel& model);

/// Copy of `model` with element moduli replaced, in element order.
StructureModel apply_parameters(const StructureModel& model, std::span<const double> moduli);

/// Parameters of the built-in asymmetric H frame. Dimensions are a plausible
/// aluminium test piece, not measured values.
struct HGeometry {
    double left_leg_length = 0.30;
    double left_leg_base = 0.05;
    double right_leg_length = 0.40;
    double cross_length = 0.50;
    double section_width = 0.0322;  // out-of-plane
    double section_depth = 0.0098;  // in-plane bending depth
    double density = 2700.0;
    double modulus = 7.0e10;
};

/// 13 nodes, 12 elements, 39 DOFs, 15 measured translations. Elements 3, 4 and 5
/// (1-based, indices 2..4) are the three members meeting at the right-hand joint.
StructureModel make_h_structure(const HGeometry& geometry = {});

/// Straight free-free beam along x split into `n_elements` equal elements.
StructureModel make_uniform_beam(int n_elements, double length, const ElementSection& section,
                                 double modulus);

}  // namespace femu
