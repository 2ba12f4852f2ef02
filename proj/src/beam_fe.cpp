#include "femu/beam_fe.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "femu/errors.hpp"

namespace femu {
namespace {

const Node& lookup(std::span<const Node> nodes, int id) {
    if (id < 0 || static_cast<std::size_t>(id) >= nodes.size())
        throw std::invalid_argument("node id " + std::to_string(id) + " out of range");
    return nodes[static_cast<std::size_t>(id)];
}

std::array<int, 6> element_dofs(const FrameElement& e) {
    return {dof_index(e.node_a, Dof::U), dof_index(e.node_a, Dof::V),
            dof_index(e.node_a, Dof::Theta), dof_index(e.node_b, Dof::U),
            dof_index(e.node_b, Dof::V), dof_index(e.node_b, Dof::Theta)};
}

}  // namespace

std::vector<double> StructureModel::moduli() const {
    std::vector<double> out;
    out.reserve(elements.size());
    for (const auto& e : elements) out.push_back(e.modulus);
    return out;
}

void StructureModel::validate() const {
    if (nodes.empty()) throw std::invalid_argument("structure has no nodes");
    if (elements.empty()) throw std::invalid_argument("structure has no elements");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].id != static_cast<int>(i))
            throw std::invalid_argument("node ids must be contiguous from 0 (node " +
                                        std::to_string(i) + " has id " +
                                        std::to_string(nodes[i].id) + ")");
        if (!std::isfinite(nodes[i].x) || !std::isfinite(nodes[i].y))
            throw GeometryError("node " + std::to_string(i) + " has non-finite coordinates");
    }
    for (const auto& e : elements) {
        const std::string tag = "element " + std::to_string(e.id);
        if (e.node_a == e.node_b) throw GeometryError(tag + " connects a node to itself");
        lookup(nodes, e.node_a);
        lookup(nodes, e.node_b);
        if (!(e.modulus > 0.0) || !std::isfinite(e.modulus))
            throw std::invalid_argument(tag + ": modulus must be positive");
        if (!(e.section.area > 0.0) || !(e.section.second_moment > 0.0) ||
            !(e.section.density > 0.0))
            throw std::invalid_argument(tag + ": section properties must be positive");
        element_length(e, nodes);
    }
    std::vector<int> sorted = measured_dofs;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("measured DOFs must be distinct");
    for (int d : measured_dofs)
        if (d < 0 || static_cast<std::size_t>(d) >= dof_count())
            throw std::invalid_argument("measured DOF " + std::to_string(d) + " out of range");
}

bool StructureModel::is_connected() const {
    if (nodes.empty()) return false;
    std::vector<int> parent(nodes.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    std::size_t components = nodes.size();
    for (const auto& e : elements) {
        const int ra = find(e.node_a);
        const int rb = find(e.node_b);
        if (ra != rb) {
            parent[ra] = rb;
            --components;
        }
    }
    return components == 1;
}

double element_length(const FrameElement& element, std::span<const Node> nodes) {
    const Node& a = lookup(nodes, element.node_a);
    const Node& b = lookup(nodes, element.node_b);
    const double length = std::hypot(b.x - a.x, b.y - a.y);
    if (!(length > 0.0))
        throw GeometryError("element " + std::to_string(element.id) + " has zero length");
    return length;
}

ElementMatrices element_matrices(const FrameElement& element, std::span<const Node> nodes) {
    const double L = element_length(element, nodes);
    const double E = element.modulus;
    const double A = element.section.area;
    const double I = element.section.second_moment;
    const double rho = element.section.density;

    ElementMatrices out;
    Matrix6& k = out.stiffness;
    Matrix6& m = out.mass;
    k.setZero();
    m.setZero();

    const double ka = E * A / L;
    k(0, 0) = k(3, 3) = ka;
    k(0, 3) = k(3, 0) = -ka;

    // Hermite bending block on (v_a, theta_a, v_b, theta_b).
    const double b12 = 12.0 * E * I / (L * L * L);
    const double b6 = 6.0 * E * I / (L * L);
    const double b4 = 4.0 * E * I / L;
    const double b2 = 2.0 * E * I / L;
    const int v_a = 1, t_a = 2, v_b = 4, t_b = 5;
    k(v_a, v_a) = k(v_b, v_b) = b12;
    k(v_a, v_b) = k(v_b, v_a) = -b12;
    k(v_a, t_a) = k(t_a, v_a) = b6;
    k(v_a, t_b) = k(t_b, v_a) = b6;
    k(v_b, t_a) = k(t_a, v_b) = -b6;
    k(v_b, t_b) = k(t_b, v_b) = -b6;
    k(t_a, t_a) = k(t_b, t_b) = b4;
    k(t_a, t_b) = k(t_b, t_a) = b2;

    const double mass = rho * A * L;
    m(0, 0) = m(3, 3) = mass / 3.0;
    m(0, 3) = m(3, 0) = mass / 6.0;

    const double c = mass / 420.0;
    m(v_a, v_a) = m(v_b, v_b) = 156.0 * c;
    m(v_a, v_b) = m(v_b, v_a) = 54.0 * c;
    m(v_a, t_a) = m(t_a, v_a) = 22.0 * L * c;
    m(v_b, t_b) = m(t_b, v_b) = -22.0 * L * c;
    m(v_a, t_b) = m(t_b, v_a) = -13.0 * L * c;
    m(v_b, t_a) = m(t_a, v_b) = 13.0 * L * c;
    m(t_a, t_a) = m(t_b, t_b) = 4.0 * L * L * c;
    m(t_a, t_b) = m(t_b, t_a) = -3.0 * L * L * c;
    return out;
}

Matrix6 element_rotation(const FrameElement& element, std::span<const Node> nodes) {
    const double L = element_length(element, nodes);
    const Node& a = nodes[static_cast<std::size_t>(element.node_a)];
    const Node& b = nodes[static_cast<std::size_t>(element.node_b)];
    const double c = (b.x - a.x) / L;
    const double s = (b.y - a.y) / L;
    Matrix6 t = Matrix6::Zero();
    for (int block = 0; block < 2; ++block) {
        const int o = 3 * block;
        t(o + 0, o + 0) = c;
        t(o + 0, o + 1) = s;
        t(o + 1, o + 0) = -s;
        t(o + 1, o + 1) = c;
        t(o + 2, o + 2) = 1.0;
    }
    return t;
}

GlobalMatrices assemble(const StructureModel& model) {
    model.validate();
    if (!model.is_connected())
        throw GeometryError("mesh is disconnected; stiffness would have more than 3 rigid-body modes");

    const auto n = static_cast<Eigen::Index>(model.dof_count());
    GlobalMatrices g{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
    for (const auto& e : model.elements) {
        const ElementMatrices local = element_matrices(e, model.nodes);
        const Matrix6 t = element_rotation(e, model.nodes);
        const Matrix6 kg = t.transpose() * local.stiffness * t;
        const Matrix6 mg = t.transpose() * local.mass * t;
        const auto dofs = element_dofs(e);
        for (int i = 0; i < 6; ++i) {
            for (int j = 0; j < 6; ++j) {
                g.stiffness(dofs[i], dofs[j]) += kg(i, j);
                g.mass(dofs[i], dofs[j]) += mg(i, j);
            }
        }
    }
    // Rotation products leave ~1 ulp asymmetry; store the symmetric part.
    g.stiffness = 0.5 * (g.stiffness + g.stiffness.transpose()).eval();
    g.mass = 0.5 * (g.mass + g.mass.transpose()).eval();
    return g;
}

StructureModel apply_parameters(const StructureModel& model, std::span<const double> moduli) {
    if (moduli.size() != model.elements.size())
        throw std::invalid_argument("expected " + std::to_string(model.elements.size()) +
                                    " moduli, got " + std::to_string(moduli.size()));
    StructureModel out = model;
    for (std::size_t i = 0; i < moduli.size(); ++i) {
        if (!(moduli[i] > 0.0) || !std::isfinite(moduli[i]))
            throw std::invalid_argument("modulus for element " + std::to_string(i) +
                                        " must be positive and finite");
        out.elements[i].modulus = moduli[i];
    }
    return out;
}

StructureModel make_h_structure(const HGeometry& g) {
    StructureModel model;
    const ElementSection section{
        g.section_width * g.section_depth,
        g.section_width * g.section_depth * g.section_depth * g.section_depth / 12.0,
        g.density};

    auto add_node = [&](double x, double y) {
        const int id = static_cast<int>(model.nodes.size());
        model.nodes.push_back({id, x, y});
        return id;
    };

    // Right leg: nodes 0..4, bottom to top; joint at node 2.
    for (int i = 0; i <= 4; ++i) add_node(g.cross_length, g.right_leg_length * i / 4.0);
    // Cross member interior: nodes 5..7, right joint towards the left joint.
    const Node right_joint = model.nodes[2];
    const double left_joint_y = g.left_leg_base + 0.5 * g.left_leg_length;
    for (int i = 1; i <= 3; ++i) {
        const double t = i / 4.0;
        add_node(right_joint.x * (1.0 - t), right_joint.y + (left_joint_y - right_joint.y) * t);
    }
    // Left leg: nodes 8..12, bottom to top; joint at node 10.
    for (int i = 0; i <= 4; ++i) add_node(0.0, g.left_leg_base + g.left_leg_length * i / 4.0);

    const int connectivity[12][2] = {{0, 1}, {3, 4},  {1, 2},  {2, 3},   {2, 5},   {5, 6},
                                     {6, 7}, {7, 10}, {8, 9},  {9, 10},  {10, 11}, {11, 12}};
    for (int e = 0; e < 12; ++e)
        model.elements.push_back({e, connectivity[e][0], connectivity[e][1], section, g.modulus});

    // Lateral translation of every leg node, transverse translation of the cross
    // member interior, and the axial translation at the foot of each leg.
    model.measured_dofs = {
        dof_index(0, Dof::U),  dof_index(0, Dof::V),  dof_index(1, Dof::U),
        dof_index(2, Dof::U),  dof_index(3, Dof::U),  dof_index(4, Dof::U),
        dof_index(5, Dof::V),  dof_index(6, Dof::V),  dof_index(7, Dof::V),
        dof_index(8, Dof::U),  dof_index(8, Dof::V),  dof_index(9, Dof::U),
        dof_index(10, Dof::U), dof_index(11, Dof::U), dof_index(12, Dof::U)};
    return model;
}

StructureModel make_uniform_beam(int n_elements, double length, const ElementSection& section,
                                 double modulus) {
    if (n_elements < 1) throw std::invalid_argument("beam needs at least one element");
    StructureModel model;
    for (int i = 0; i <= n_elements; ++i) model.nodes.push_back({i, length * i / n_elements, 0.0});
    for (int e = 0; e < n_elements; ++e) model.elements.push_back({e, e, e + 1, section, modulus});
    return model;
}

}  // namespace femu
