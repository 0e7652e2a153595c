#pragma once

#include "stopgrid/grid.hpp"
#include "stopgrid/model.hpp"

namespace stopgrid {

/// Time discretization for the belief-diffusion PDE
///   u_t = (rho^2 pi^2 (1-pi)^2 / 2) u_pipi.
struct PdeConfig {
    double theta = 0.5;      ///< time weighting: 0 explicit, 1 implicit, 0.5 Crank-Nicolson
    double dt_target = 0.0;  ///< desired time step; 0 means eps/64
    int rannacher_steps = 4; ///< leading fully-implicit steps (damps kinked data)

    void validate() const {
        if (!(theta >= 0.0) || !(theta <= 1.0)) {
            throw InvalidParameter("PdeConfig: theta must lie in [0,1]");
        }
        if (!(dt_target >= 0.0)) {
            throw InvalidParameter("PdeConfig: dt_target must be >= 0");
        }
        if (rannacher_steps < 0) {
            throw InvalidParameter("PdeConfig: rannacher_steps must be >= 0");
        }
    }
};

/// Returns grid samples of pi -> E_pi[v(Pi_eps)], where Pi is the belief
/// martingale dPi = rho Pi (1-Pi) dW. Endpoints are held fixed at
/// boundary_left/boundary_right for all time steps (the diffusion coefficient
/// vanishes there, so the belief is absorbed). eps = 0 returns v unchanged.
///
/// The number of steps is ceil(eps/dt_target) with dt = eps/steps. For
/// theta < 0.5 the explicit stability bound
/// dt <= h^2 / max_i(rho^2 pi_i^2 (1-pi_i)^2) is enforced.
GridFunction diffuse_expectation(const GridFunction& v, double eps,
                                 const DerivedParams& d, const PdeConfig& cfg,
                                 double boundary_left, double boundary_right);

/// Diagnostic: diffuses v(x) = (x-pi)^2 and reads the result at pi. For small
/// eps this equals rho^2 pi^2 (1-pi)^2 eps to leading order.
double second_moment_check(double pi, double eps, const DerivedParams& d,
                           const PiGrid& grid, const PdeConfig& cfg);

} // namespace stopgrid
