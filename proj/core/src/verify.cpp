#include "stopgrid/verify.hpp"

#include <algorithm>
#include <cmath>

namespace stopgrid {

bool VerificationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.pass; });
}

namespace {

CheckResult bounded(std::string name, double value, double tol, std::string detail = {}) {
    return {std::move(name), value, tol, value <= tol, std::move(detail)};
}

} // namespace

VerificationReport run_verification(const SolveResult& res, const McConfig& mc,
                                    double start_pi,
                                    std::optional<std::vector<double>> boundary_override) {
    VerificationReport rep;
    const DerivedParams& d = res.derived;
    const DiagnosticsReport diag = diagnostics(res);

    double max_chain = 0.0, min_second = 0.0, max_residual = 0.0, max_endpoint = 0.0;
    bool band_ok = true;
    for (const auto& lvl : diag.levels) {
        max_chain = std::max(max_chain, lvl.max_chain_violation);
        min_second = std::min(min_second,
                              std::min(lvl.min_second_diff_v, lvl.min_second_diff_f));
        max_residual = std::max(max_residual, lvl.smooth_fit_residual);
        max_endpoint = std::max(max_endpoint, lvl.endpoint_error);
        band_ok = band_ok && lvl.b_within_band;
    }
    rep.checks.push_back(bounded("diagnostics.value_chain", max_chain, 1e-3,
                                 "max breach of n(pi-k)^+ <= V_n <= F_n <= n(1-k)pi"));
    rep.checks.push_back(bounded("diagnostics.convexity", -min_second, 1e-6,
                                 "negative part of the worst second difference"));
    rep.checks.push_back(CheckResult{"diagnostics.boundary_band", band_ok ? 1.0 : 0.0, 1.0,
                                     band_ok, "b_n in (pi0_n, b1 + h] for every level"});
    rep.checks.push_back(bounded("diagnostics.smooth_fit", max_residual, 1e-3));
    rep.checks.push_back(bounded("diagnostics.endpoints", max_endpoint, 1e-9,
                                 "V_n(0) = 0 and V_n(1) = n(1-k)"));

    // MC cross-check 1: single-stop threshold b1 vs the closed form.
    {
        const GridFunction payoff = sample(res.grid, [&](double pi) { return pi - d.k; });
        const Estimate est =
            estimate_single_stop(start_pi, res.b1_closed, payoff, d, mc);
        const double ref = v1_eval(start_pi, d);
        const double tol = 3.0 * est.std_error + est.truncation_bound;
        rep.checks.push_back(bounded("mc.single_stop_vs_closed_form",
                                     std::abs(est.mean - ref), tol,
                                     "estimate " + std::to_string(est.mean) +
                                         " vs V_1 " + std::to_string(ref)));
    }

    // MC cross-check 2: F_1 from the PDE vs direct simulation of E[V_1(Pi_eps)].
    if (res.params.eps > 0.0) {
        const GridFunction& v1 = res.levels.front().v_n;
        const GridFunction& f1 = res.levels.front().f_n;
        double worst = 0.0, worst_tol = 1e-3;
        for (double pi : {0.2, 0.5, 0.8}) {
            const Estimate est = estimate_f(pi, v1, res.params.eps, d, mc);
            const double dev = std::abs(est.mean - f1.interpolate(pi));
            const double tol = std::max(3.0 * est.std_error, 1e-3);
            if (dev - tol > worst - worst_tol) {
                worst = dev;
                worst_tol = tol;
            }
        }
        rep.checks.push_back(bounded("mc.f1_pde_vs_mc", worst, worst_tol,
                                     "worst case over pi in {0.2, 0.5, 0.8}"));
    }

    // MC cross-check 3: the full strategy against the solver's V_N.
    {
        std::vector<double> boundaries;
        for (const auto& lvl : res.levels) boundaries.push_back(lvl.b_n);
        if (boundary_override) {
            if (boundary_override->size() != boundaries.size()) {
                throw InvalidParameter("run_verification: boundary override size mismatch");
            }
            boundaries = *boundary_override;
        }
        const Estimate est =
            simulate_full_strategy(start_pi, boundaries, res.params, mc);
        const double ref = res.levels.back().v_n.interpolate(start_pi);
        const double tol = 3.0 * est.std_error + est.truncation_bound + 1e-2;
        rep.checks.push_back(bounded("mc.full_strategy_vs_value",
                                     std::abs(est.mean - ref), tol,
                                     "estimate " + std::to_string(est.mean) +
                                         " vs V_N " + std::to_string(ref)));
    }

    return rep;
}

} // namespace stopgrid
