#pragma once

#include "stopgrid/errors.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace stopgrid {

/// Uniform discretization of belief space [0,1] with m nodes pi_i = i/(m-1).
struct PiGrid {
    int m;

    explicit PiGrid(int m_nodes) : m(m_nodes) {
        if (m < 3) throw InvalidParameter("PiGrid: need at least 3 nodes");
    }

    double h() const { return 1.0 / (m - 1); }
    double node(int i) const { return static_cast<double>(i) / (m - 1); }

    friend bool operator==(const PiGrid& a, const PiGrid& b) { return a.m == b.m; }
};

/// A real-valued function sampled on a PiGrid.
struct GridFunction {
    PiGrid grid;
    std::vector<double> values;

    GridFunction(PiGrid g, std::vector<double> v) : grid(g), values(std::move(v)) {
        if (static_cast<int>(values.size()) != grid.m) {
            throw InvalidParameter("GridFunction: value count must equal grid size");
        }
    }

    GridFunction(PiGrid g, double fill = 0.0)
        : grid(g), values(static_cast<std::size_t>(g.m), fill) {}

    double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return values[static_cast<std::size_t>(i)]; }
    int size() const { return grid.m; }

    /// Piecewise-linear evaluation; pi is clamped to [0,1].
    double interpolate(double pi) const {
        pi = std::clamp(pi, 0.0, 1.0);
        const int m = grid.m;
        double pos = pi * (m - 1);
        int i = std::min(static_cast<int>(pos), m - 2);
        double frac = pos - i;
        return values[i] + frac * (values[i + 1] - values[i]);
    }
};

/// Sample a callable on the grid.
template <typename F>
GridFunction sample(PiGrid g, F&& f) {
    GridFunction out(g);
    for (int i = 0; i < g.m; ++i) out[i] = f(g.node(i));
    return out;
}

} // namespace stopgrid
