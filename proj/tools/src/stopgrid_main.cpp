// stopgrid: boundaries and value functions for the multi-right investment
// problem with learning-from-the-past, plus the Monte Carlo verification
// harness and the published-figure data sets.
//
// Exit codes: 0 ok, 1 verification/summary failure, 2 bad input,
//             3 numerical failure.

#include "stopgrid/csv.hpp"
#include "stopgrid/monte_carlo.hpp"
#include "stopgrid/presets.hpp"
#include "stopgrid/rng.hpp"
#include "stopgrid/solver.hpp"
#include "stopgrid/sweep.hpp"
#include "stopgrid/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace stopgrid;

namespace {

struct ModelOpts {
    double mu0 = -1.0;
    double mu1 = 1.0;
    double sigma = 4.0;
    double r = 0.1;
    int n_rights = 10;
    double eps = 0.0;
    double total_learning = 0.0;
    bool has_eps = false;
    bool has_total = false;
    int grid_m = 2001;
    double dt_target = 0.0;
    std::string out;
};

void add_model_flags(CLI::App* cmd, ModelOpts& o) {
    cmd->add_option("--mu0", o.mu0, "Bad-project drift (< 0)")->capture_default_str();
    cmd->add_option("--mu1", o.mu1, "Good-project drift (> 0)")->capture_default_str();
    cmd->add_option("--sigma", o.sigma, "Observation noise volatility (> 0)")
        ->capture_default_str();
    cmd->add_option("--r", o.r, "Discount rate (> 0)")->capture_default_str();
    cmd->add_option("--N", o.n_rights, "Number of investment rights (>= 1)")
        ->capture_default_str();
    auto* eps_opt =
        cmd->add_option("--eps", o.eps, "Learning increment per investment (>= 0)");
    auto* total_opt = cmd->add_option("--total-learning", o.total_learning,
                                      "Total learning N*eps (>= 0)");
    eps_opt->excludes(total_opt);
    total_opt->excludes(eps_opt);
    cmd->add_option("--grid", o.grid_m, "Belief grid size m (>= 3)")->capture_default_str();
    cmd->add_option("--dt-target", o.dt_target,
                    "Diffusion time step target (0 = eps/64)")
        ->capture_default_str();
    cmd->add_option("--out", o.out,
                    "Output directory (default: $STOPGRID_OUTDIR or '.')");
    cmd->parse_complete_callback([eps_opt, total_opt, &o] {
        o.has_eps = eps_opt->count() > 0;
        o.has_total = total_opt->count() > 0;
    });
}

/// Expands "--config FILE" (or --config=FILE) into --key=value tokens read
/// from a flat key=value file, placed before the remaining arguments so
/// explicit flags win under the take-last policy.
std::vector<std::string> expand_config_args(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::vector<std::string> out;
    std::vector<std::string> from_config;
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string file;
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw InvalidParameter("--config needs a file");
            file = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            file = args[i].substr(9);
        } else {
            out.push_back(args[i]);
            continue;
        }
        std::ifstream is(file);
        if (!is) throw InvalidParameter("cannot open config file " + file);
        std::string line;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#') continue;
            const auto last = line.find_last_not_of(" \t\r");
            const std::string trimmed = line.substr(first, last - first + 1);
            const auto eq = trimmed.find('=');
            if (eq == std::string::npos || eq == 0) {
                throw InvalidParameter("config file " + file + " line " +
                                       std::to_string(lineno) + ": expected key=value");
            }
            auto strip = [](std::string s) {
                const auto a = s.find_first_not_of(" \t");
                if (a == std::string::npos) return std::string();
                const auto b = s.find_last_not_of(" \t");
                return s.substr(a, b - a + 1);
            };
            const std::string key = strip(trimmed.substr(0, eq));
            const std::string value = strip(trimmed.substr(eq + 1));
            from_config.push_back("--" + key + "=" + value);
        }
    }
    // config tokens go right after the subcommand name so explicit flags,
    // parsed later, override them
    out.insert(out.begin() + std::min<std::size_t>(1, out.size()),
               from_config.begin(), from_config.end());
    return out;
}

ModelParams make_params(const ModelOpts& o) {
    if (!o.has_eps && !o.has_total) {
        throw InvalidParameter("one of --eps or --total-learning is required");
    }
    ModelParams p;
    if (o.has_total) {
        p = ModelParams::with_total_learning(o.mu0, o.mu1, o.sigma, o.r, o.n_rights,
                                             o.total_learning);
    } else {
        p.mu0 = o.mu0;
        p.mu1 = o.mu1;
        p.sigma = o.sigma;
        p.r = o.r;
        p.n_rights = o.n_rights;
        p.eps = o.eps;
    }
    p.validate();
    return p;
}

fs::path resolve_outdir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("STOPGRID_OUTDIR"); env && *env) return env;
    return ".";
}

/// Deterministic 16-hex-digit id from the resolved run configuration.
std::string make_run_id(const ModelParams& p, int grid_m, const PdeConfig& cfg,
                        const std::string& tag) {
    std::ostringstream key;
    key << tag << ';' << fmt_g12(p.mu0) << ';' << fmt_g12(p.mu1) << ';'
        << fmt_g12(p.sigma) << ';' << fmt_g12(p.r) << ';' << p.n_rights << ';'
        << fmt_g12(p.eps) << ';' << grid_m << ';' << fmt_g12(cfg.theta) << ';'
        << fmt_g12(cfg.dt_target);
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (unsigned char c : key.str()) {
        h ^= c;
        h = splitmix64(h);
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json params_json(const ModelParams& p, const DerivedParams& d, double b1_closed) {
    return json{
        {"params",
         {{"mu0", p.mu0},
          {"mu1", p.mu1},
          {"sigma", p.sigma},
          {"r", p.r},
          {"n_rights", p.n_rights},
          {"eps", p.eps},
          {"total_learning", p.total_learning()}}},
        {"derived",
         {{"k", d.k}, {"rho", d.rho}, {"gamma", d.gamma}, {"b1_closed_form", b1_closed}}},
    };
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string());
    os << j.dump(2) << '\n';
}

void append_boundary_rows(CsvTable& table, const std::string& run_id,
                          const SolveResult& res) {
    for (const auto& lvl : res.levels) {
        table.add_row({run_id, std::to_string(lvl.n), fmt_g12(res.params.u(lvl.n)),
                       fmt_g12(lvl.b_n), fmt_g12(lvl.pi0_n), fmt_g12(lvl.a_n),
                       fmt_g12(lvl.smooth_fit_residual)});
    }
}

// ---------------------------------------------------------------------------
// solve

struct SolveOpts {
    ModelOpts model;
    int curve_stride = 10;
};

int cmd_solve(const SolveOpts& o) {
    const ModelParams p = make_params(o.model);
    const PiGrid grid(o.model.grid_m);
    PdeConfig cfg;
    cfg.dt_target = o.model.dt_target;
    const SolveResult res = solve_sequence(p, grid, cfg);
    const std::string run_id = make_run_id(p, grid.m, cfg, "solve");
    const fs::path outdir = resolve_outdir(o.model.out);
    fs::create_directories(outdir);

    CsvTable boundaries(
        {"run_id", "n", "u_n", "b_n", "pi0_n", "a_n", "smooth_fit_residual"});
    append_boundary_rows(boundaries, run_id, res);
    boundaries.write_file((outdir / "boundaries.csv").string());

    CsvTable curves({"run_id", "n", "pi", "v_n", "f_n", "g_n"});
    const int stride = std::max(1, o.curve_stride);
    for (const auto& lvl : res.levels) {
        for (int i = 0; i < grid.m; i += stride) {
            curves.add_row({run_id, std::to_string(lvl.n), fmt_g12(grid.node(i)),
                            fmt_g12(lvl.v_n.values[i]), fmt_g12(lvl.f_n.values[i]),
                            fmt_g12(lvl.g_n.values[i])});
        }
    }
    curves.write_file((outdir / "curves.csv").string());

    json manifest = params_json(p, res.derived, res.b1_closed);
    manifest["run_id"] = run_id;
    manifest["grid"] = {{"m", grid.m}, {"h", grid.h()}};
    manifest["pde"] = {{"theta", cfg.theta},
                       {"dt_target", cfg.dt_target},
                       {"rannacher_steps", cfg.rannacher_steps}};
    json blist = json::array();
    for (const auto& lvl : res.levels) {
        blist.push_back({{"n", lvl.n},
                         {"b_n", lvl.b_n},
                         {"pi0_n", lvl.pi0_n},
                         {"a_n", lvl.a_n},
                         {"smooth_fit_residual", lvl.smooth_fit_residual}});
    }
    manifest["boundaries"] = blist;
    manifest["outputs"] = {"boundaries.csv", "curves.csv"};
    write_json(outdir / "manifest.json", manifest);

    std::cout << "run " << run_id << ": N=" << p.n_rights << " eps=" << fmt_g12(p.eps)
              << " b1=" << fmt_g12(res.levels.front().b_n) << " b" << p.n_rights << "="
              << fmt_g12(res.levels.back().b_n) << "\n"
              << "wrote " << (outdir / "boundaries.csv").string() << ", curves.csv, "
              << "manifest.json\n";
    return 0;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOpts {
    ModelOpts model;
    std::int64_t paths = 100000;
    double dt = 1e-3;
    std::uint64_t seed = 1;
    double start_pi = 0.3;
    double t_max = 0.0;
    double cutoff = 1e-6;
    int threads = 1;
    std::string boundaries_file;
};

std::vector<double> read_boundaries_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InvalidParameter("cannot open boundaries file " + path);
    std::vector<double> b;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        b.push_back(std::stod(line));
    }
    if (b.empty()) throw InvalidParameter("boundaries file " + path + " is empty");
    return b;
}

int cmd_verify(const VerifyOpts& o) {
    const ModelParams p = make_params(o.model);
    if (!(o.start_pi > 0.0 && o.start_pi < 1.0)) {
        throw InvalidParameter("--start-pi must lie in (0,1)");
    }
    const PiGrid grid(o.model.grid_m);
    PdeConfig cfg;
    cfg.dt_target = o.model.dt_target;
    const SolveResult res = solve_sequence(p, grid, cfg);

    McConfig mc;
    mc.n_paths = o.paths;
    mc.dt = o.dt;
    mc.seed = o.seed;
    mc.t_max = o.t_max;
    mc.early_exit_cutoff = o.cutoff;
    mc.n_threads = o.threads;
    mc.validate();

    std::optional<std::vector<double>> override_b;
    if (!o.boundaries_file.empty()) override_b = read_boundaries_file(o.boundaries_file);

    const VerificationReport rep = run_verification(res, mc, o.start_pi, override_b);

    json jchecks = json::array();
    for (const auto& c : rep.checks) {
        std::printf("[%s] %-32s value=%.6g tol=%.6g %s\n", c.pass ? "PASS" : "FAIL",
                    c.name.c_str(), c.value, c.tolerance, c.detail.c_str());
        jchecks.push_back({{"name", c.name},
                           {"value", c.value},
                           {"tolerance", c.tolerance},
                           {"pass", c.pass},
                           {"detail", c.detail}});
    }
    json report = params_json(p, res.derived, res.b1_closed);
    report["run_id"] = make_run_id(p, grid.m, cfg, "verify");
    report["mc"] = {{"n_paths", mc.n_paths}, {"dt", mc.dt},
                    {"seed", mc.seed},       {"t_max", mc.resolved_t_max(p.r)},
                    {"start_pi", o.start_pi}};
    report["checks"] = jchecks;
    report["all_pass"] = rep.all_pass();

    const fs::path outdir = resolve_outdir(o.model.out);
    fs::create_directories(outdir);
    write_json(outdir / "verify_report.json", report);

    std::cout << (rep.all_pass() ? "all checks passed\n" : "some checks FAILED\n");
    return rep.all_pass() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOpts {
    ModelOpts model;
    std::string axis = "sigma";
    std::vector<std::string> values;
};

std::vector<AxisValue> parse_values(SweepAxis axis, const std::vector<std::string>& raw) {
    std::vector<AxisValue> out;
    for (const auto& tok : raw) {
        AxisValue v;
        if (axis == SweepAxis::mu_pair) {
            const auto colon = tok.find(':');
            if (colon == std::string::npos) {
                throw InvalidParameter("mu_pair values use the form mu0:mu1, got '" +
                                       tok + "'");
            }
            v.first = std::stod(tok.substr(0, colon));
            v.second = std::stod(tok.substr(colon + 1));
        } else {
            v.first = std::stod(tok);
        }
        out.push_back(v);
    }
    if (out.empty()) throw InvalidParameter("--values must be nonempty");
    return out;
}

std::string axis_value_str(SweepAxis axis, const AxisValue& v) {
    if (axis == SweepAxis::mu_pair) return fmt_g12(v.first) + ":" + fmt_g12(v.second);
    return fmt_g12(v.first);
}

int cmd_sweep(const SweepOpts& o) {
    SweepSpec spec;
    spec.base = make_params(o.model);
    spec.axis = parse_axis(o.axis);
    spec.values = parse_values(spec.axis, o.values);
    spec.grid_m = o.model.grid_m;
    spec.pde.dt_target = o.model.dt_target;

    const SweepResult res = run_sweep(spec);
    const fs::path outdir = resolve_outdir(o.model.out);
    fs::create_directories(outdir);

    CsvTable table({"kind", "run_index", "axis", "value", "n", "u_n", "b_n", "pi0_n",
                    "a_n", "smooth_fit_residual", "status"});
    for (const auto& row : res.rows) {
        table.add_row({"row", std::to_string(row.run_index), axis_name(spec.axis),
                       axis_value_str(spec.axis, row.value), std::to_string(row.n),
                       fmt_g12(row.u_n), fmt_g12(row.b_n), fmt_g12(row.pi0_n),
                       fmt_g12(row.a_n), fmt_g12(row.smooth_fit_residual), row.status});
    }
    bool summaries_pass = true;
    for (const auto& s : res.summaries) {
        summaries_pass = summaries_pass && s.pass;
        table.add_row({"summary", "", axis_name(spec.axis), "", "", "", "", "", "",
                       s.detail, s.name + (s.pass ? ": pass" : ": fail")});
    }
    table.write_file((outdir / "sweep.csv").string());

    json manifest;
    manifest["axis"] = axis_name(spec.axis);
    json vals = json::array();
    for (const auto& v : spec.values) vals.push_back(axis_value_str(spec.axis, v));
    manifest["values"] = vals;
    json jsum = json::array();
    for (const auto& s : res.summaries) {
        jsum.push_back({{"name", s.name}, {"pass", s.pass}, {"detail", s.detail}});
    }
    manifest["summaries"] = jsum;
    manifest["any_run_failed"] = res.any_failed;
    write_json(outdir / "sweep_manifest.json", manifest);

    for (const auto& s : res.summaries) {
        std::printf("[%s] %s %s\n", s.pass ? "PASS" : "FAIL", s.name.c_str(),
                    s.detail.c_str());
    }
    std::cout << "wrote " << (outdir / "sweep.csv").string() << "\n";
    return (res.any_failed || !summaries_pass) ? 1 : 0;
}

// ---------------------------------------------------------------------------
// figures

struct FiguresOpts {
    int figure = 0;
    bool all = false;
    std::string outdir;
    int grid_m = 2001;
    double dt_target = 0.0;
};

void emit_figure(const FigurePreset& fig, const fs::path& outdir, int grid_m,
                 double dt_target) {
    const PiGrid grid(grid_m);
    PdeConfig cfg;
    cfg.dt_target = dt_target;
    const std::string stem = "fig" + std::to_string(fig.figure);

    if (fig.kind == FigureKind::boundary_series) {
        CsvTable table({"figure", "run", "label", "k", "rho", "gamma", "b1_closed_form",
                        "n", "u_n", "b_n", "pi0_n", "a_n", "smooth_fit_residual"});
        for (std::size_t i = 0; i < fig.runs.size(); ++i) {
            const auto& run = fig.runs[i];
            const SolveResult res = solve_sequence(run.params, grid, cfg);
            for (const auto& lvl : res.levels) {
                table.add_row({std::to_string(fig.figure), std::to_string(i), run.label,
                               fmt_g12(res.derived.k), fmt_g12(res.derived.rho),
                               fmt_g12(res.derived.gamma), fmt_g12(res.b1_closed),
                               std::to_string(lvl.n), fmt_g12(run.params.u(lvl.n)),
                               fmt_g12(lvl.b_n), fmt_g12(lvl.pi0_n), fmt_g12(lvl.a_n),
                               fmt_g12(lvl.smooth_fit_residual)});
            }
        }
        table.write_file((outdir / (stem + "_boundaries.csv")).string());
        return;
    }

    // curve figures: one run each, sampled every node
    const auto& run = fig.runs.front();
    const SolveResult res = solve_sequence(run.params, grid, cfg);
    const DerivedParams& d = res.derived;
    if (fig.kind == FigureKind::value_curves) {
        CsvTable table({"pi", "v_1", "f_1", "lower_bound", "upper_bound"});
        const auto& lvl = res.levels.front();
        for (int i = 0; i < grid.m; ++i) {
            const double pi = grid.node(i);
            table.add_row({fmt_g12(pi), fmt_g12(lvl.v_n.values[i]),
                           fmt_g12(lvl.f_n.values[i]),
                           fmt_g12(std::max(pi - d.k, 0.0)), fmt_g12((1.0 - d.k) * pi)});
        }
        table.write_file((outdir / (stem + "_curves.csv")).string());
    } else {
        CsvTable table({"n", "pi", "v_n", "f_n", "g_n"});
        const int top = std::min<int>(3, static_cast<int>(res.levels.size()));
        for (int n = 1; n <= top; ++n) {
            const auto& lvl = res.levels[n - 1];
            for (int i = 0; i < grid.m; ++i) {
                table.add_row({std::to_string(n), fmt_g12(grid.node(i)),
                               fmt_g12(lvl.v_n.values[i]), fmt_g12(lvl.f_n.values[i]),
                               fmt_g12(lvl.g_n.values[i])});
            }
        }
        table.write_file((outdir / (stem + "_curves.csv")).string());
    }
}

int cmd_figures(const FiguresOpts& o) {
    if (!o.all && (o.figure < 1 || o.figure > 8)) {
        throw InvalidParameter("--figure must lie in 1..8 (or pass --all)");
    }
    const fs::path outdir = resolve_outdir(o.outdir);
    fs::create_directories(outdir);
    if (o.all) {
        for (const auto& fig : figure_presets()) {
            emit_figure(fig, outdir, o.grid_m, o.dt_target);
        }
    } else {
        emit_figure(figure_preset(o.figure), outdir, o.grid_m, o.dt_target);
    }
    std::cout << "wrote figure data to " << outdir.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stopgrid: optimal multi-investment boundaries with "
                 "learning-from-the-past"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    SolveOpts solve_opts;
    auto* solve_cmd = app.add_subcommand(
        "solve", "Solve the boundary recursion; write boundaries.csv, curves.csv, "
                 "manifest.json");
    add_model_flags(solve_cmd, solve_opts.model);
    solve_cmd->add_option("--curve-stride", solve_opts.curve_stride,
                          "Emit every k-th grid node into curves.csv")
        ->capture_default_str();

    VerifyOpts verify_opts;
    auto* verify_cmd = app.add_subcommand(
        "verify", "Run invariant diagnostics and Monte Carlo cross-checks");
    add_model_flags(verify_cmd, verify_opts.model);
    verify_cmd->add_option("--paths", verify_opts.paths, "Monte Carlo path count")
        ->capture_default_str();
    verify_cmd->add_option("--dt", verify_opts.dt, "Euler time step")
        ->capture_default_str();
    verify_cmd->add_option("--seed", verify_opts.seed, "RNG seed")->capture_default_str();
    verify_cmd->add_option("--start-pi", verify_opts.start_pi, "Initial belief")
        ->capture_default_str();
    verify_cmd->add_option("--t-max", verify_opts.t_max, "Horizon truncation (0 = 50/r)")
        ->capture_default_str();
    verify_cmd
        ->add_option("--cutoff", verify_opts.cutoff,
                     "Early-exit cutoff on the remaining-value bound")
        ->capture_default_str();
    verify_cmd->add_option("--threads", verify_opts.threads, "Worker threads")
        ->capture_default_str();
    verify_cmd->add_option("--boundaries-file", verify_opts.boundaries_file,
                           "Override boundaries (one per line, b_1 first) in the "
                           "strategy simulation");

    SweepOpts sweep_opts;
    auto* sweep_cmd = app.add_subcommand(
        "sweep", "Solve across one parameter axis; write long-format sweep.csv");
    add_model_flags(sweep_cmd, sweep_opts.model);
    sweep_cmd
        ->add_option("--axis", sweep_opts.axis,
                     "Axis: sigma | r | eps_total | N | mu_pair")
        ->capture_default_str();
    sweep_cmd
        ->add_option("--values", sweep_opts.values,
                     "Axis values (comma separated; mu_pair uses mu0:mu1)")
        ->required()
        ->delimiter(',');

    FiguresOpts fig_opts;
    auto* fig_cmd = app.add_subcommand(
        "figures", "Emit the data series behind the published figures 1-8");
    fig_cmd->add_option("--figure", fig_opts.figure, "Figure number in 1..8");
    fig_cmd->add_flag("--all", fig_opts.all, "Emit every figure");
    fig_cmd->add_option("--outdir,--out", fig_opts.outdir,
                        "Output directory (default: $STOPGRID_OUTDIR or '.')");
    fig_cmd->add_option("--grid", fig_opts.grid_m, "Belief grid size m")
        ->capture_default_str();
    fig_cmd->add_option("--dt-target", fig_opts.dt_target,
                        "Diffusion time step target (0 = eps/64)")
        ->capture_default_str();

    // --config FILE is expanded into --key=value tokens before parsing; a
    // throwaway option documents it in --help
    std::string config_doc;
    for (auto* cmd : {solve_cmd, verify_cmd, sweep_cmd, fig_cmd}) {
        cmd->add_option("--config", config_doc,
                        "Flat key=value config file (keys mirror flag names; "
                        "explicit flags win)");
    }

    try {
        std::vector<std::string> args = expand_config_args(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const InvalidParameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (solve_cmd->parsed()) return cmd_solve(solve_opts);
        if (verify_cmd->parsed()) return cmd_verify(verify_opts);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_opts);
        if (fig_cmd->parsed()) return cmd_figures(fig_opts);
    } catch (const InvalidParameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
