#pragma once

#include "stopgrid/grid.hpp"
#include "stopgrid/model.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace stopgrid {

struct McConfig {
    std::int64_t n_paths = 100000;
    double dt = 1e-3;          ///< Euler step
    double t_max = 0.0;        ///< horizon truncation; 0 means 50/r
    std::uint64_t seed = 1;
    double clamp_delta = 1e-9; ///< endpoint clamp width
    /// A path is dropped (contributes 0) once a rigorous bound on its
    /// remaining discounted value falls below this cutoff; the bound uses
    /// P(hit b) <= pi/b for the belief martingale. Folded into
    /// truncation_bound. 0 disables the early exit.
    double early_exit_cutoff = 1e-7;
    int n_threads = 1;         ///< paths evaluate concurrently; results are
                               ///< bit-identical for any thread count

    double resolved_t_max(double r) const { return t_max > 0.0 ? t_max : 50.0 / r; }
    void validate() const;
};

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t n_paths = 0;
    /// Upper bound on the bias from truncated/early-exited paths:
    /// exp(-r t_max) * payoff bound + early_exit_cutoff.
    double truncation_bound = 0.0;

    /// Signals that t_max is too small for the requested accuracy.
    bool truncation_dominates() const { return truncation_bound > std_error; }
};

/// One simulated multi-exercise path: physical investment times (recorded as
/// the remaining-rights sequence tau_N, ..., tau_1), beliefs at the shifted
/// exercise times tau_n + (N-n)eps, and the realized discounted payoff.
struct StrategyOutcome {
    std::vector<double> investment_times;
    std::vector<double> beliefs_at_exercise;
    double discounted_total = 0.0;
};

/// One Euler-Maruyama step of dPi = rho Pi (1-Pi) dW, clamped to
/// [clamp_delta, 1-clamp_delta]. The endpoints 0 and 1 are absorbing.
double step_belief(double pi, double dt, const DerivedParams& d, double noise,
                   double clamp_delta = 1e-9);

/// Discounted value of the first-hitting strategy tau = inf{t : Pi_t >= threshold}
/// with the given payoff (evaluated by linear interpolation at Pi_tau).
/// Paths exceeding t_max contribute 0, tracked in truncation_bound.
Estimate estimate_single_stop(double pi, double threshold, const GridFunction& payoff,
                              const DerivedParams& d, const McConfig& cfg);

/// Same estimator for several thresholds sharing one set of simulated paths
/// (common random numbers); results match per-threshold calls in
/// distribution and are deterministic given (seed, n_paths).
std::vector<Estimate> estimate_single_stop_multi(double pi,
                                                 std::span<const double> thresholds,
                                                 const GridFunction& payoff,
                                                 const DerivedParams& d,
                                                 const McConfig& cfg);

/// E_pi[v(Pi_eps)] by Euler paths of horizon eps.
Estimate estimate_f(double pi, const GridFunction& v, double eps,
                    const DerivedParams& d, const McConfig& cfg);

/// Full multi-exercise strategy value. boundaries[n-1] is the boundary b_n
/// used with n rights remaining (the first investment uses boundaries[N-1]).
/// On each exercise the payoff e^{-r t}(Pi - k) accrues at the physical clock
/// t, then the belief advances by eps of information time at zero physical
/// cost (the learning-from-the-past jump); several exercises may share one
/// physical instant. Pass `outcomes` to collect per-path records.
Estimate simulate_full_strategy(double pi, std::span<const double> boundaries,
                                const ModelParams& p, const McConfig& cfg,
                                std::vector<StrategyOutcome>* outcomes = nullptr);

} // namespace stopgrid
