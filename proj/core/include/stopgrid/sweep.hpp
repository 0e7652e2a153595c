#pragma once

#include "stopgrid/model.hpp"
#include "stopgrid/pde.hpp"
#include "stopgrid/solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace stopgrid {

enum class SweepAxis { sigma, r, eps_total, n_rights, mu_pair };

SweepAxis parse_axis(const std::string& name);
std::string axis_name(SweepAxis axis);

/// One point on the sweep axis; `second` is used only by mu_pair (mu0=first,
/// mu1=second). For the n_rights axis the value is rounded to an integer and
/// total learning N*eps is held fixed at the base value.
struct AxisValue {
    double first = 0.0;
    double second = 0.0;
};

struct SweepSpec {
    ModelParams base;
    SweepAxis axis = SweepAxis::sigma;
    std::vector<AxisValue> values; ///< assumed ascending for directional summaries
    int grid_m = 2001;
    PdeConfig pde;
};

struct SweepRow {
    int run_index = 0;
    AxisValue value;
    int n = 0;
    double u_n = 0.0;
    double b_n = 0.0;
    double pi0_n = 0.0;
    double a_n = 0.0;
    double smooth_fit_residual = 0.0;
    std::string status; ///< "ok" or the failure message
};

struct SweepSummary {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<SweepSummary> summaries;
    bool any_failed = false;
};

/// Applies the axis value to the base parameters.
ModelParams apply_axis(const ModelParams& base, SweepAxis axis, const AxisValue& v);

/// One solve per axis value, in order, plus directional summaries:
/// sigma and r report b_n nonincreasing across values for every shared n;
/// n_rights reports the first-investment boundary b_N nonincreasing and b_1
/// constant across runs.
SweepResult run_sweep(const SweepSpec& spec);

} // namespace stopgrid
