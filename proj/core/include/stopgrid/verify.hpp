#pragma once

#include "stopgrid/monte_carlo.hpp"
#include "stopgrid/solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace stopgrid {

struct CheckResult {
    std::string name;
    double value = 0.0;     ///< observed deviation or quantity
    double tolerance = 0.0; ///< bound it must stay under
    bool pass = false;
    std::string detail;
};

struct VerificationReport {
    std::vector<CheckResult> checks;
    bool all_pass() const;
};

/// Invariant diagnostics plus the three Monte Carlo cross-checks
/// (single-stop vs closed form, F_1 PDE vs MC, full strategy vs V_N).
/// `boundary_override` replaces the solved boundaries in the strategy
/// simulation only, so a perturbed boundary set can be scored against the
/// solver's value.
VerificationReport run_verification(const SolveResult& res, const McConfig& mc,
                                    double start_pi,
                                    std::optional<std::vector<double>> boundary_override =
                                        std::nullopt);

} // namespace stopgrid
