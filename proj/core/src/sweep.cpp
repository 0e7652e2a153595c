#include "stopgrid/sweep.hpp"

#include <cmath>
#include <map>

namespace stopgrid {

SweepAxis parse_axis(const std::string& name) {
    if (name == "sigma") return SweepAxis::sigma;
    if (name == "r") return SweepAxis::r;
    if (name == "eps_total") return SweepAxis::eps_total;
    if (name == "N") return SweepAxis::n_rights;
    if (name == "mu_pair") return SweepAxis::mu_pair;
    throw InvalidParameter("sweep: axis must be one of sigma, r, eps_total, N, mu_pair");
}

std::string axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::sigma: return "sigma";
        case SweepAxis::r: return "r";
        case SweepAxis::eps_total: return "eps_total";
        case SweepAxis::n_rights: return "N";
        case SweepAxis::mu_pair: return "mu_pair";
    }
    return "?";
}

ModelParams apply_axis(const ModelParams& base, SweepAxis axis, const AxisValue& v) {
    ModelParams p = base;
    switch (axis) {
        case SweepAxis::sigma:
            p.sigma = v.first;
            break;
        case SweepAxis::r:
            p.r = v.first;
            break;
        case SweepAxis::eps_total:
            p.eps = v.first / p.n_rights;
            break;
        case SweepAxis::n_rights: {
            const double total = base.total_learning();
            p.n_rights = static_cast<int>(std::lround(v.first));
            if (p.n_rights < 1) throw InvalidParameter("sweep: N must be >= 1");
            p.eps = total / p.n_rights;
            break;
        }
        case SweepAxis::mu_pair:
            p.mu0 = v.first;
            p.mu1 = v.second;
            break;
    }
    return p;
}

SweepResult run_sweep(const SweepSpec& spec) {
    if (spec.values.empty()) throw InvalidParameter("sweep: values must be nonempty");
    SweepResult out;
    const PiGrid grid(spec.grid_m);

    std::vector<std::optional<SolveResult>> solves;
    for (std::size_t run = 0; run < spec.values.size(); ++run) {
        const AxisValue& v = spec.values[run];
        try {
            const ModelParams p = apply_axis(spec.base, spec.axis, v);
            SolveResult res = solve_sequence(p, grid, spec.pde);
            for (const LevelResult& lvl : res.levels) {
                out.rows.push_back({static_cast<int>(run), v, lvl.n, p.u(lvl.n), lvl.b_n,
                                    lvl.pi0_n, lvl.a_n, lvl.smooth_fit_residual, "ok"});
            }
            solves.push_back(std::move(res));
        } catch (const std::exception& e) {
            out.rows.push_back({static_cast<int>(run), v, 0, 0.0, 0.0, 0.0, 0.0, 0.0,
                                std::string("failed: ") + e.what()});
            solves.emplace_back();
            out.any_failed = true;
        }
    }

    auto boundary = [&](std::size_t run, int n) -> std::optional<double> {
        if (!solves[run]) return std::nullopt;
        const auto& levels = solves[run]->levels;
        if (n < 1 || n > static_cast<int>(levels.size())) return std::nullopt;
        return levels[static_cast<std::size_t>(n - 1)].b_n;
    };

    if (spec.axis == SweepAxis::sigma || spec.axis == SweepAxis::r) {
        int shared_n = 0;
        for (const auto& s : solves) {
            if (s) shared_n = shared_n == 0 ? static_cast<int>(s->levels.size())
                                            : std::min(shared_n, static_cast<int>(s->levels.size()));
        }
        bool pass = true;
        for (int n = 1; n <= shared_n; ++n) {
            double prev = 2.0;
            for (std::size_t run = 0; run < solves.size(); ++run) {
                auto b = boundary(run, n);
                if (!b) continue;
                if (*b > prev + 1e-12) pass = false;
                prev = *b;
            }
        }
        out.summaries.push_back({"b_n_nonincreasing_in_" + axis_name(spec.axis), pass,
                                 "checked for every shared n across ascending axis values"});
    } else if (spec.axis == SweepAxis::n_rights) {
        bool first_pass = true;
        double prev_first = 2.0;
        double b1_min = 2.0, b1_max = -1.0;
        for (std::size_t run = 0; run < solves.size(); ++run) {
            if (!solves[run]) continue;
            const auto& levels = solves[run]->levels;
            const double b_first = levels.back().b_n; // b_N, first investment
            if (b_first > prev_first + 1e-12) first_pass = false;
            prev_first = b_first;
            const double b1 = levels.front().b_n;
            b1_min = std::min(b1_min, b1);
            b1_max = std::max(b1_max, b1);
        }
        out.summaries.push_back({"first_boundary_nonincreasing_in_N", first_pass,
                                 "b_N across ascending N at fixed total learning"});
        out.summaries.push_back({"b1_constant_in_N", b1_max - b1_min < 1e-6,
                                 "max spread " + std::to_string(b1_max - b1_min)});
    }
    return out;
}

} // namespace stopgrid
