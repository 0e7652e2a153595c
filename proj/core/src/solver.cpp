#include "stopgrid/solver.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace stopgrid {

namespace {

// Derivative samples matching eval_h: central differences on the interior,
// one-sided at the first/last interior node. Endpoint slots are unused.
std::vector<double> derivative_samples(const GridFunction& g) {
    const int m = g.grid.m;
    const double h = g.grid.h();
    std::vector<double> dg(static_cast<std::size_t>(m), 0.0);
    for (int i = 1; i <= m - 2; ++i) {
        if (i == 1) {
            dg[i] = (g[2] - g[1]) / h;
        } else if (i == m - 2) {
            dg[i] = (g[m - 2] - g[m - 3]) / h;
        } else {
            dg[i] = (g[i + 1] - g[i - 1]) / (2.0 * h);
        }
    }
    return dg;
}

// Linear interpolation restricted to interior nodes 1..m-2.
double interp_interior(const GridFunction& g, const std::vector<double>& vals, double pi) {
    const int m = g.grid.m;
    const double h = g.grid.h();
    int i = static_cast<int>(pi / h);
    i = std::max(1, std::min(i, m - 3));
    const double frac = pi / h - i;
    return vals[static_cast<std::size_t>(i)] +
           frac * (vals[static_cast<std::size_t>(i + 1)] - vals[static_cast<std::size_t>(i)]);
}

// First downward (positive-to-nonpositive) crossing of nodewise samples,
// scanned over interior nodes; NaN when none exists.
double first_down_crossing(const PiGrid& grid, const std::vector<double>& vals,
                           int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
        const double a = vals[static_cast<std::size_t>(i)];
        const double b = vals[static_cast<std::size_t>(i + 1)];
        if (a > 0.0 && b <= 0.0) {
            const double t = a / (a - b);
            return grid.node(i) + t * grid.h();
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

// Unique upward (negative-to-nonnegative) crossing of g over the full grid.
double root_of_g(const GridFunction& g) {
    const int m = g.grid.m;
    for (int i = 0; i < m - 1; ++i) {
        if (g[i] < 0.0 && g[i + 1] >= 0.0) {
            const double t = -g[i] / (g[i + 1] - g[i]);
            return g.grid.node(i) + t * g.grid.h();
        }
    }
    throw NumericalError("root_of_g: payoff has no sign change");
}

// Discrete (L g)(pi_i) = c_i g''_i - r g_i on interior nodes.
std::vector<double> discrete_generator(const GridFunction& g, const DerivedParams& d) {
    const int m = g.grid.m;
    const double h = g.grid.h();
    std::vector<double> lg(static_cast<std::size_t>(m), 0.0);
    for (int i = 1; i <= m - 2; ++i) {
        const double pi = g.grid.node(i);
        const double c = 0.5 * d.rho * d.rho * pi * pi * (1.0 - pi) * (1.0 - pi);
        lg[static_cast<std::size_t>(i)] =
            c * (g[i - 1] - 2.0 * g[i] + g[i + 1]) / (h * h) - d.r * g[i];
    }
    return lg;
}

double smooth_fit_residual_at(const GridFunction& g, double b_n, const DerivedParams& d) {
    const std::vector<double> dg = derivative_samples(g);
    const double gb = g.interpolate(b_n);
    const double a_n = gb / G(b_n, d.gamma);
    const double gpb = interp_interior(g, dg, b_n);
    return std::abs(a_n * G_prime(b_n, d.gamma) - gpb);
}

LevelResult closed_form_level(int n, const PiGrid& grid, const DerivedParams& d) {
    // Exact no-learning degeneracy: V_n = n V_1 with the common boundary b_1.
    const double b1 = b1_closed_form(d);
    LevelResult lvl{n, b1, 0.0, 0.0, 0.0, 0.0, GridFunction(grid), GridFunction(grid),
                    GridFunction(grid)};
    const double a1 = (b1 - d.k) / G(b1, d.gamma);
    lvl.a_n = n * a1;
    for (int i = 0; i < grid.m; ++i) {
        const double pi = grid.node(i);
        const double v1 = v1_eval(pi, d);
        lvl.v_n[i] = n * v1;
        lvl.f_n[i] = n * v1;
        lvl.g_n[i] = pi - d.k + (n - 1) * v1;
    }
    lvl.pi0_n = (n == 1) ? d.k : root_of_g(lvl.g_n);
    lvl.pi_star_n = first_down_crossing(grid, discrete_generator(lvl.g_n, d), 1, grid.m - 2);
    lvl.smooth_fit_residual = 0.0; // smooth fit holds identically
    return lvl;
}

} // namespace

GridFunction build_g(const GridFunction& f_prev, const DerivedParams& d) {
    GridFunction g(f_prev.grid);
    for (int i = 0; i < f_prev.grid.m; ++i) {
        g[i] = f_prev.grid.node(i) - d.k + f_prev[i];
    }
    return g;
}

GridFunction eval_h(const GridFunction& g, const DerivedParams& d) {
    const int m = g.grid.m;
    const std::vector<double> dg = derivative_samples(g);
    GridFunction h(g.grid);
    for (int i = 1; i <= m - 2; ++i) {
        const double pi = g.grid.node(i);
        h[i] = G_prime(pi, d.gamma) * g[i] - G(pi, d.gamma) * dg[static_cast<std::size_t>(i)];
    }
    return h;
}

double find_boundary(const GridFunction& h, double b1) {
    const int m = h.grid.m;
    const double hg = h.grid.h();
    int bracket = -1;
    int crossings = 0;
    for (int i = 1; i <= m - 3; ++i) {
        const double a = h[i];
        const double b = h[i + 1];
        if (a < 0.0 && b >= 0.0) {
            ++crossings;
            if (bracket < 0) bracket = i;
        } else if (a >= 0.0 && b < 0.0 && bracket >= 0) {
            ++crossings; // h dips negative again after the root
        }
    }
    if (crossings == 0) {
        throw NumericalError("find_boundary: no sign change in h "
                             "(grid too coarse or PDE inaccuracies)");
    }
    if (crossings > 1) {
        throw NumericalError("find_boundary: multiple sign changes in h "
                             "(grid too coarse or PDE inaccuracies)");
    }
    double lo_pi = h.grid.node(bracket);
    double hi_pi = h.grid.node(bracket + 1);
    double lo_val = h[bracket];
    double hi_val = h[bracket + 1];
    double root;
    if (hi_val == 0.0) {
        root = hi_pi;
    } else if (lo_val == 0.0) {
        root = lo_pi;
    } else {
        // Bisection on the linear interpolant between the bracketing nodes.
        while (hi_pi - lo_pi > 1e-9) {
            const double mid = 0.5 * (lo_pi + hi_pi);
            const double t = (mid - h.grid.node(bracket)) / hg;
            const double val = h[bracket] + t * (h[bracket + 1] - h[bracket]);
            if (val < 0.0) {
                lo_pi = mid;
                lo_val = val;
            } else {
                hi_pi = mid;
                hi_val = val;
            }
        }
        root = 0.5 * (lo_pi + hi_pi);
    }
    if (root > b1 + hg) {
        throw NumericalError("find_boundary: root exceeds b1 by more than one cell");
    }
    return root;
}

GridFunction paste_candidate(const GridFunction& g, double b_n, const DerivedParams& d) {
    const int m = g.grid.m;
    if (!(b_n > 0.0) || !(b_n < 1.0)) {
        throw InvalidParameter("paste_candidate: boundary must be interior");
    }
    const double gb = g.interpolate(b_n);
    if (!(gb > 0.0)) {
        throw InvalidParameter("paste_candidate: payoff must be positive at the boundary");
    }
    const double a_n = gb / G(b_n, d.gamma);
    GridFunction v(g.grid);
    v[0] = 0.0;
    for (int i = 1; i < m; ++i) {
        const double pi = g.grid.node(i);
        v[i] = (pi < b_n) ? a_n * G(pi, d.gamma) : g[i];
    }
    return v;
}

SolveResult solve_sequence(const ModelParams& p, const PiGrid& grid, const PdeConfig& cfg) {
    p.validate();
    cfg.validate();
    const DerivedParams d = derive_params(p);
    SolveResult res{p, d, grid, cfg, b1_closed_form(d), {}};
    res.levels.reserve(static_cast<std::size_t>(p.n_rights));

    if (p.eps == 0.0) {
        for (int n = 1; n <= p.n_rights; ++n) {
            res.levels.push_back(closed_form_level(n, grid, d));
        }
        return res;
    }

    // Level 1: closed-form pasting.
    {
        const double b1 = res.b1_closed;
        LevelResult lvl{1, b1, (b1 - d.k) / G(b1, d.gamma), d.k, d.k, 0.0,
                        GridFunction(grid), GridFunction(grid), GridFunction(grid)};
        for (int i = 0; i < grid.m; ++i) {
            const double pi = grid.node(i);
            lvl.v_n[i] = v1_eval(pi, d);
            lvl.g_n[i] = pi - d.k;
        }
        lvl.smooth_fit_residual = std::abs(lvl.a_n * G_prime(b1, d.gamma) - 1.0);
        lvl.f_n = diffuse_expectation(lvl.v_n, p.eps, d, cfg, 0.0, 1.0 - d.k);
        res.levels.push_back(std::move(lvl));
    }

    for (int n = 2; n <= p.n_rights; ++n) {
        const GridFunction& f_prev = res.levels.back().f_n;
        GridFunction g = build_g(f_prev, d);
        GridFunction h = eval_h(g, d);
        double b_n;
        try {
            b_n = find_boundary(h, res.b1_closed);
        } catch (const NumericalError& e) {
            throw NumericalError("level " + std::to_string(n) + ": " + e.what());
        }
        LevelResult lvl{n, b_n, 0.0, 0.0, 0.0, 0.0, GridFunction(grid),
                        GridFunction(grid), GridFunction(grid)};
        lvl.g_n = g;
        lvl.v_n = paste_candidate(g, b_n, d);
        lvl.a_n = g.interpolate(b_n) / G(b_n, d.gamma);
        lvl.pi0_n = root_of_g(g);
        lvl.pi_star_n = first_down_crossing(grid, discrete_generator(g, d), 1, grid.m - 2);
        lvl.smooth_fit_residual = smooth_fit_residual_at(g, b_n, d);
        lvl.f_n = diffuse_expectation(lvl.v_n, p.eps, d, cfg, 0.0, n * (1.0 - d.k));
        res.levels.push_back(std::move(lvl));
    }
    return res;
}

DiagnosticsReport diagnostics(const SolveResult& res) {
    DiagnosticsReport rep;
    const DerivedParams& d = res.derived;
    const PiGrid& grid = res.grid;
    const int m = grid.m;
    bool nonincreasing = true;
    double prev_b = 1.0;
    for (const LevelResult& lvl : res.levels) {
        LevelDiagnostics ld;
        ld.n = lvl.n;
        ld.b_n = lvl.b_n;
        ld.pi0_n = lvl.pi0_n;
        ld.smooth_fit_residual = lvl.smooth_fit_residual;

        double viol = 0.0;
        for (int i = 0; i < m; ++i) {
            const double pi = grid.node(i);
            const double lower = lvl.n * std::max(pi - d.k, 0.0);
            viol = std::max(viol, lower - lvl.v_n[i]);
            viol = std::max(viol, std::max(lvl.g_n[i], 0.0) - lvl.v_n[i]);
            viol = std::max(viol, lvl.v_n[i] - lvl.f_n[i]);
            viol = std::max(viol, lvl.f_n[i] - lvl.n * (1.0 - d.k) * pi);
        }
        ld.max_chain_violation = viol;

        double min_v = 0.0, min_f = 0.0;
        for (int i = 1; i <= m - 2; ++i) {
            min_v = std::min(min_v, lvl.v_n[i - 1] - 2.0 * lvl.v_n[i] + lvl.v_n[i + 1]);
            min_f = std::min(min_f, lvl.f_n[i - 1] - 2.0 * lvl.f_n[i] + lvl.f_n[i + 1]);
        }
        ld.min_second_diff_v = min_v;
        ld.min_second_diff_f = min_f;

        ld.endpoint_error = std::max(std::abs(lvl.v_n[0]),
                                     std::abs(lvl.v_n[m - 1] - lvl.n * (1.0 - d.k)));
        ld.b_within_band = lvl.b_n > lvl.pi0_n && lvl.b_n <= res.b1_closed + grid.h();

        if (lvl.b_n > prev_b + 1e-12) nonincreasing = false;
        prev_b = lvl.b_n;
        rep.levels.push_back(ld);
    }
    rep.boundaries_nonincreasing = nonincreasing;
    return rep;
}

} // namespace stopgrid
