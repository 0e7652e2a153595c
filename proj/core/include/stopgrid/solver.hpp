#pragma once

#include "stopgrid/grid.hpp"
#include "stopgrid/model.hpp"
#include "stopgrid/pde.hpp"

#include <vector>

namespace stopgrid {

/// Output of one level of the recursion: boundary, pasted value function,
/// continuation term and diagnostics for n remaining rights.
struct LevelResult {
    int n = 0;
    double b_n = 0.0;                 ///< investment boundary
    double a_n = 0.0;                 ///< coefficient A_n = g_n(b_n)/G(b_n)
    double pi0_n = 0.0;               ///< root of g_n = 0
    double pi_star_n = 0.0;           ///< root of (L g_n) = 0 (NaN if the scan fails)
    double smooth_fit_residual = 0.0; ///< |A_n G'(b_n) - g_n'(b_n)|
    GridFunction v_n;                 ///< value function V_n
    GridFunction f_n;                 ///< F_n = E[V_n(Pi_eps)]
    GridFunction g_n;                 ///< exercise payoff g_n = pi - k + F_{n-1}
};

struct SolveResult {
    ModelParams params;
    DerivedParams derived;
    PiGrid grid;
    PdeConfig pde;
    double b1_closed = 0.0;
    std::vector<LevelResult> levels; ///< levels[n-1] holds level n
};

/// g_n(pi_i) = pi_i - k + f_prev(pi_i).
GridFunction build_g(const GridFunction& f_prev, const DerivedParams& d);

/// Smooth-fit function h_n = G' g_n - G g_n' on interior nodes (endpoints of
/// the returned samples are set to 0 and carry no meaning). g_n' uses central
/// differences, one-sided at the first/last interior node.
GridFunction eval_h(const GridFunction& g, const DerivedParams& d);

/// Locates the unique negative-to-nonnegative sign change of h on the
/// interior grid and returns the root of the piecewise-linear interpolant.
/// Throws NumericalError when no or multiple sign changes are found, or when
/// the root exceeds b1 by more than one grid cell.
double find_boundary(const GridFunction& h, double b1);

/// Pastes the candidate: A_n G(pi) below b_n, g_n(pi) at/above, with
/// g_n(b_n) taken by linear interpolation between the neighboring nodes.
GridFunction paste_candidate(const GridFunction& g, double b_n, const DerivedParams& d);

/// Runs the full recursion n = 1..N. Level 1 uses the closed form; each
/// subsequent level diffuses V_{n-1} for eps of information time, builds g_n
/// and h_n, solves h_n(b_n) = 0 and pastes V_n. eps = 0 short-circuits to the
/// exact no-learning degeneracy V_n = n V_1, b_n = b_1.
SolveResult solve_sequence(const ModelParams& p, const PiGrid& grid, const PdeConfig& cfg);

struct LevelDiagnostics {
    int n = 0;
    double b_n = 0.0;
    double max_chain_violation = 0.0; ///< worst breach of n(pi-k)^+ <= V_n <= F_n <= n(1-k)pi
    double min_second_diff_v = 0.0;   ///< min raw second difference of V_n
    double min_second_diff_f = 0.0;   ///< min raw second difference of F_n
    double pi0_n = 0.0;
    double smooth_fit_residual = 0.0;
    double endpoint_error = 0.0;      ///< max of |V_n(0)| and |V_n(1) - n(1-k)|
    bool b_within_band = false;       ///< b_n in (pi0_n, b1 + h]
};

struct DiagnosticsReport {
    std::vector<LevelDiagnostics> levels;
    bool boundaries_nonincreasing = false; ///< reported, never asserted
};

DiagnosticsReport diagnostics(const SolveResult& res);

} // namespace stopgrid
