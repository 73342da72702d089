#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "vmadmit/errors.hpp"

namespace vmadmit {

/**
 * Dense value grid over states (n1, n2), n1 = 0..n1_size-1, n2 = 0..n2_size-1.
 * Row-major storage; the largest n2 index is the truncation cap.
 */
struct ValueGrid {
    int n1_size = 0;
    int n2_size = 0;
    std::vector<double> values;

    ValueGrid() = default;
    ValueGrid(int n1_count, int n2_count, double fill = 0.0)
        : n1_size(n1_count), n2_size(n2_count),
          values(std::size_t(n1_count) * std::size_t(n2_count), fill) {}

    int cap() const { return n2_size - 1; }

    double at(int n1, int n2) const { return values[std::size_t(n1) * n2_size + n2]; }
    double& at(int n1, int n2) { return values[std::size_t(n1) * n2_size + n2]; }

    bool same_shape(const ValueGrid& other) const {
        return n1_size == other.n1_size && n2_size == other.n2_size;
    }

    bool all_finite() const {
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

/// Sup-norm of the difference. Throws ShapeMismatch on unequal shapes.
inline double sup_norm_diff(const ValueGrid& a, const ValueGrid& b) {
    if (!a.same_shape(b)) throw ShapeMismatch("grid shapes differ");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
    return worst;
}

} // namespace vmadmit
