#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace femu {

/// Axis-aligned box [lower_j, upper_j] over the parameter vector.
struct Bounds {
    std::vector<double> lower;
    std::vector<double> upper;

    static Bounds uniform(std::size_t dim, double lo, double hi) {
        return {std::vector<double>(dim, lo), std::vector<double>(dim, hi)};
    }

    std::size_t size() const { return lower.size(); }
    double width(std::size_t j) const { return upper[j] - lower[j]; }

    bool contains(std::span<const double> x) const {
        if (x.size() != size()) return false;
        for (std::size_t j = 0; j < x.size(); ++j)
            if (!(x[j] >= lower[j] && x[j] <= upper[j])) return false;
        return true;
    }

    /// Throws std::invalid_argument unless sizes agree and lo < hi everywhere.
    void validate() const {
        if (lower.size() != upper.size()) throw std::invalid_argument("bounds: size mismatch");
        if (lower.empty()) throw std::invalid_argument("bounds: empty");
        for (std::size_t j = 0; j < lower.size(); ++j)
            if (!(lower[j] < upper[j])) throw std::invalid_argument("bounds: need lo < hi");
    }
};

/// Each coordinate clamped into its [lo, hi].
std::vector<double> clip_to_bounds(std::span<const double> params, const Bounds& bounds);

}  // namespace femu
