#pragma once

#include "stopgrid/errors.hpp"

namespace stopgrid {

/// Two-point prior investment model: the project drift is either mu0 (bad)
/// or mu1 (good), observed through noise of volatility sigma. The investor
/// holds n_rights irreversible investment rights; each exercise advances the
/// observation clock by eps ("learning from the past").
struct ModelParams {
    double mu0 = -1.0;   ///< drift of the bad project, < 0
    double mu1 = 1.0;    ///< drift of the good project, > 0
    double sigma = 4.0;  ///< observation noise volatility, > 0
    double r = 0.1;      ///< discount rate, > 0
    int n_rights = 10;   ///< total number of investment rights N >= 1
    double eps = 0.1;    ///< learning increment per investment, >= 0

    /// Total learning N*eps.
    double total_learning() const { return n_rights * eps; }

    /// Investment level with n rights remaining: u_n = (N-n)/N.
    double u(int n) const { return static_cast<double>(n_rights - n) / n_rights; }

    /// Convenience constructor specifying eps via N*eps.
    static ModelParams with_total_learning(double mu0, double mu1, double sigma,
                                           double r, int n_rights, double total);

    /// Throws InvalidParameter naming the violated invariant.
    void validate() const;
};

/// Quantities derived from ModelParams. k is the dimensionless strike,
/// rho the signal-to-noise ratio, gamma the positive root of
/// gamma^2 - gamma - 2r/rho^2 = 0 (always > 1 for r > 0).
struct DerivedParams {
    double k;      ///< -mu0/(mu1-mu0), in (0,1)
    double rho;    ///< (mu1-mu0)/sigma, > 0
    double gamma;  ///< positive quadratic root, > 1
    double r;      ///< discount rate, carried along for convenience
};

DerivedParams derive_params(const ModelParams& p);

/// The r-harmonic function G(pi) = (1-pi)(pi/(1-pi))^gamma, vanishing at 0.
/// Defined on [0,1); pi = 0 returns 0 by continuous extension.
double G(double pi, double gamma);

/// G'(pi) = (gamma-pi)/(pi(1-pi)) * G(pi), interior pi only.
double G_prime(double pi, double gamma);

/// Closed-form single-right boundary b1 = gamma*k/(gamma+k-1), in (k,1).
double b1_closed_form(const DerivedParams& d);

/// Single-right value function: pi-k at/above b1, A1*G(pi) below, with
/// A1 = (b1-k)/G(b1). Continuous and C1 at b1 (smooth fit).
double v1_eval(double pi, const DerivedParams& d);

} // namespace stopgrid
