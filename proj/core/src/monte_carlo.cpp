#include "stopgrid/monte_carlo.hpp"

#include "stopgrid/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

namespace stopgrid {

void McConfig::validate() const {
    if (n_paths < 1) throw InvalidParameter("McConfig: n_paths must be >= 1");
    if (!(dt > 0.0)) throw InvalidParameter("McConfig: dt must be > 0");
    if (!(t_max >= 0.0)) throw InvalidParameter("McConfig: t_max must be >= 0");
    if (!(clamp_delta >= 0.0) || !(clamp_delta <= 1e-6)) {
        throw InvalidParameter("McConfig: clamp_delta must lie in [0, 1e-6]");
    }
    if (!(early_exit_cutoff >= 0.0)) {
        throw InvalidParameter("McConfig: early_exit_cutoff must be >= 0");
    }
    if (n_threads < 0) throw InvalidParameter("McConfig: n_threads must be >= 0");
}

double step_belief(double pi, double dt, const DerivedParams& d, double noise,
                   double clamp_delta) {
    if (!(pi >= 0.0) || !(pi <= 1.0)) {
        throw InvalidParameter("step_belief: belief must lie in [0,1]");
    }
    if (pi == 0.0 || pi == 1.0) return pi; // absorbing endpoints
    const double next = pi + d.rho * pi * (1.0 - pi) * std::sqrt(dt) * noise;
    return std::clamp(next, clamp_delta, 1.0 - clamp_delta);
}

namespace {

// Evaluates `fn(path_index, out)` for every path, accumulating per-output
// sums and sums of squares in fixed-size blocks combined in index order, so
// results are bit-identical for any thread count.
template <typename Fn>
void run_paths(std::int64_t n_paths, int n_outputs, int n_threads, Fn&& fn,
               std::vector<double>& sum, std::vector<double>& sumsq) {
    constexpr std::int64_t kBlock = 4096;
    const std::int64_t n_blocks = (n_paths + kBlock - 1) / kBlock;
    std::vector<double> block_sum(static_cast<std::size_t>(n_blocks) * n_outputs, 0.0);
    std::vector<double> block_sumsq(static_cast<std::size_t>(n_blocks) * n_outputs, 0.0);

    auto do_block = [&](std::int64_t b) {
        std::vector<double> out(static_cast<std::size_t>(n_outputs));
        double* bs = &block_sum[static_cast<std::size_t>(b) * n_outputs];
        double* bq = &block_sumsq[static_cast<std::size_t>(b) * n_outputs];
        const std::int64_t lo = b * kBlock;
        const std::int64_t hi = std::min(lo + kBlock, n_paths);
        for (std::int64_t path = lo; path < hi; ++path) {
            fn(path, out.data());
            for (int j = 0; j < n_outputs; ++j) {
                bs[j] += out[static_cast<std::size_t>(j)];
                bq[j] += out[static_cast<std::size_t>(j)] * out[static_cast<std::size_t>(j)];
            }
        }
    };

    int threads = n_threads > 0 ? n_threads
                                : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, threads);
    if (threads == 1 || n_blocks == 1) {
        for (std::int64_t b = 0; b < n_blocks; ++b) do_block(b);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (std::int64_t b = t; b < n_blocks; b += threads) do_block(b);
            });
        }
        for (auto& th : pool) th.join();
    }

    sum.assign(static_cast<std::size_t>(n_outputs), 0.0);
    sumsq.assign(static_cast<std::size_t>(n_outputs), 0.0);
    for (std::int64_t b = 0; b < n_blocks; ++b) {
        for (int j = 0; j < n_outputs; ++j) {
            sum[static_cast<std::size_t>(j)] += block_sum[static_cast<std::size_t>(b) * n_outputs + j];
            sumsq[static_cast<std::size_t>(j)] += block_sumsq[static_cast<std::size_t>(b) * n_outputs + j];
        }
    }
}

Estimate make_estimate(double sum, double sumsq, std::int64_t n, double trunc_bound) {
    Estimate e;
    e.n_paths = n;
    e.mean = sum / static_cast<double>(n);
    e.truncation_bound = trunc_bound;
    if (n > 1) {
        const double var =
            std::max(0.0, (sumsq - static_cast<double>(n) * e.mean * e.mean) /
                              static_cast<double>(n - 1));
        e.std_error = std::sqrt(var / static_cast<double>(n));
    }
    return e;
}

double max_abs(const GridFunction& g) {
    double b = 0.0;
    for (double v : g.values) b = std::max(b, std::abs(v));
    return b;
}

} // namespace

std::vector<Estimate> estimate_single_stop_multi(double pi,
                                                 std::span<const double> thresholds,
                                                 const GridFunction& payoff,
                                                 const DerivedParams& d,
                                                 const McConfig& cfg) {
    cfg.validate();
    if (!(pi >= 0.0) || !(pi <= 1.0)) {
        throw InvalidParameter("estimate_single_stop: belief must lie in [0,1]");
    }
    const int n_th = static_cast<int>(thresholds.size());
    if (n_th == 0) throw InvalidParameter("estimate_single_stop: no thresholds");
    for (double th : thresholds) {
        if (!(th > 0.0) || !(th < 1.0)) {
            throw InvalidParameter("estimate_single_stop: threshold must be interior");
        }
    }
    // Ascending order; each path services thresholds as the belief climbs.
    std::vector<int> order(static_cast<std::size_t>(n_th));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return thresholds[static_cast<std::size_t>(a)] <
                                         thresholds[static_cast<std::size_t>(b)]; });
    std::vector<double> th_sorted(static_cast<std::size_t>(n_th));
    for (int j = 0; j < n_th; ++j) th_sorted[static_cast<std::size_t>(j)] = thresholds[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])];

    const double pay_bound = max_abs(payoff);
    const double t_max = cfg.resolved_t_max(d.r);
    const double sqrt_dt = std::sqrt(cfg.dt);
    const double disc_step = std::exp(-d.r * cfg.dt);
    // pi*disc below exit_level[j] certifies that threshold j (and everything
    // above it) contributes less than the cutoff.
    std::vector<double> exit_level(static_cast<std::size_t>(n_th), 0.0);
    if (cfg.early_exit_cutoff > 0.0 && pay_bound > 0.0) {
        for (int j = 0; j < n_th; ++j) {
            exit_level[static_cast<std::size_t>(j)] =
                cfg.early_exit_cutoff * th_sorted[static_cast<std::size_t>(j)] / pay_bound;
        }
    }
    const ZigguratNormal normal;

    auto path_fn = [&](std::int64_t path, double* out) {
        Xoshiro256pp rng(cfg.seed, static_cast<std::uint64_t>(path));
        double x = pi;
        double t = 0.0;
        double disc = 1.0;
        int idx = 0;
        while (idx < n_th && x >= th_sorted[static_cast<std::size_t>(idx)]) {
            out[order[static_cast<std::size_t>(idx)]] = payoff.interpolate(x);
            ++idx;
        }
        while (idx < n_th) {
            if (t >= t_max) break; // truncated: remaining thresholds contribute 0
            if (cfg.early_exit_cutoff > 0.0 &&
                x * disc < exit_level[static_cast<std::size_t>(idx)]) {
                break; // remaining contribution provably below the cutoff
            }
            const double z = normal(rng);
            x = x + d.rho * x * (1.0 - x) * sqrt_dt * z;
            x = std::clamp(x, cfg.clamp_delta, 1.0 - cfg.clamp_delta);
            t += cfg.dt;
            disc *= disc_step;
            while (idx < n_th && x >= th_sorted[static_cast<std::size_t>(idx)]) {
                out[order[static_cast<std::size_t>(idx)]] = disc * payoff.interpolate(x);
                ++idx;
            }
        }
        for (int j = idx; j < n_th; ++j) out[order[static_cast<std::size_t>(j)]] = 0.0;
    };

    std::vector<double> sum, sumsq;
    run_paths(cfg.n_paths, n_th, cfg.n_threads, path_fn, sum, sumsq);

    const double trunc = std::exp(-d.r * t_max) * pay_bound + cfg.early_exit_cutoff;
    std::vector<Estimate> ests;
    ests.reserve(static_cast<std::size_t>(n_th));
    for (int j = 0; j < n_th; ++j) {
        ests.push_back(make_estimate(sum[static_cast<std::size_t>(j)],
                                     sumsq[static_cast<std::size_t>(j)], cfg.n_paths, trunc));
    }
    return ests;
}

Estimate estimate_single_stop(double pi, double threshold, const GridFunction& payoff,
                              const DerivedParams& d, const McConfig& cfg) {
    const double th[1] = {threshold};
    return estimate_single_stop_multi(pi, th, payoff, d, cfg).front();
}

Estimate estimate_f(double pi, const GridFunction& v, double eps,
                    const DerivedParams& d, const McConfig& cfg) {
    cfg.validate();
    if (!(pi >= 0.0) || !(pi <= 1.0)) {
        throw InvalidParameter("estimate_f: belief must lie in [0,1]");
    }
    if (!(eps >= 0.0)) throw InvalidParameter("estimate_f: eps must be >= 0");
    if (eps == 0.0) {
        Estimate e;
        e.mean = v.interpolate(pi);
        e.n_paths = cfg.n_paths;
        return e;
    }
    const int steps = static_cast<int>(std::ceil(eps / cfg.dt));
    const double dt = eps / steps;
    const double sqrt_dt = std::sqrt(dt);
    const ZigguratNormal normal;

    auto path_fn = [&](std::int64_t path, double* out) {
        Xoshiro256pp rng(cfg.seed, static_cast<std::uint64_t>(path));
        double x = pi;
        for (int s = 0; s < steps; ++s) {
            if (x <= 0.0 || x >= 1.0) break;
            const double z = normal(rng);
            x = x + d.rho * x * (1.0 - x) * sqrt_dt * z;
            x = std::clamp(x, cfg.clamp_delta, 1.0 - cfg.clamp_delta);
        }
        out[0] = v.interpolate(x);
    };

    std::vector<double> sum, sumsq;
    run_paths(cfg.n_paths, 1, cfg.n_threads, path_fn, sum, sumsq);
    return make_estimate(sum[0], sumsq[0], cfg.n_paths, 0.0);
}

Estimate simulate_full_strategy(double pi, std::span<const double> boundaries,
                                const ModelParams& p, const McConfig& cfg,
                                std::vector<StrategyOutcome>* outcomes) {
    cfg.validate();
    p.validate();
    const DerivedParams d = derive_params(p);
    const int n_rights = p.n_rights;
    if (static_cast<int>(boundaries.size()) != n_rights) {
        throw InvalidParameter("simulate_full_strategy: need one boundary per right");
    }
    for (double b : boundaries) {
        if (!(b > 0.0) || !(b < 1.0)) {
            throw InvalidParameter("simulate_full_strategy: boundaries must be interior");
        }
    }
    if (!(pi >= 0.0) || !(pi <= 1.0)) {
        throw InvalidParameter("simulate_full_strategy: belief must lie in [0,1]");
    }

    // prefix_min[n-1] = min boundary among levels n, n-1, ..., 1; used in the
    // P(hit) <= pi/b early-exit bound while n rights remain.
    std::vector<double> prefix_min(boundaries.begin(), boundaries.end());
    for (int i = 1; i < n_rights; ++i) {
        prefix_min[static_cast<std::size_t>(i)] =
            std::min(prefix_min[static_cast<std::size_t>(i)], prefix_min[static_cast<std::size_t>(i - 1)]);
    }

    const double per_right_bound = std::max(d.k, 1.0 - d.k);
    const double t_max = cfg.resolved_t_max(d.r);
    const double sqrt_dt = std::sqrt(cfg.dt);
    const double disc_step = std::exp(-d.r * cfg.dt);
    const int jump_steps =
        p.eps > 0.0 ? static_cast<int>(std::ceil(p.eps / cfg.dt)) : 0;
    const double jump_dt = jump_steps > 0 ? p.eps / jump_steps : 0.0;
    const double jump_sqrt_dt = std::sqrt(jump_dt);
    const ZigguratNormal normal;

    if (outcomes) {
        outcomes->assign(static_cast<std::size_t>(cfg.n_paths), StrategyOutcome{});
    }

    auto path_fn = [&](std::int64_t path, double* out) {
        Xoshiro256pp rng(cfg.seed, static_cast<std::uint64_t>(path));
        double x = pi;
        double t = 0.0;
        double disc = 1.0;
        double total = 0.0;
        int n = n_rights;
        StrategyOutcome* rec =
            outcomes ? &(*outcomes)[static_cast<std::size_t>(path)] : nullptr;
        while (n >= 1) {
            if (x >= boundaries[static_cast<std::size_t>(n - 1)]) {
                total += disc * (x - d.k);
                if (rec) {
                    rec->investment_times.push_back(t);
                    rec->beliefs_at_exercise.push_back(x);
                }
                // learning-from-the-past: eps of information time, zero
                // physical time
                for (int s = 0; s < jump_steps; ++s) {
                    if (x <= 0.0 || x >= 1.0) break;
                    const double z = normal(rng);
                    x = x + d.rho * x * (1.0 - x) * jump_sqrt_dt * z;
                    x = std::clamp(x, cfg.clamp_delta, 1.0 - cfg.clamp_delta);
                }
                --n;
                continue;
            }
            if (t >= t_max) break;
            if (cfg.early_exit_cutoff > 0.0) {
                const double hit_prob =
                    std::min(1.0, x / prefix_min[static_cast<std::size_t>(n - 1)]);
                if (disc * n * per_right_bound * hit_prob < cfg.early_exit_cutoff) break;
            }
            const double z = normal(rng);
            x = x + d.rho * x * (1.0 - x) * sqrt_dt * z;
            x = std::clamp(x, cfg.clamp_delta, 1.0 - cfg.clamp_delta);
            t += cfg.dt;
            disc *= disc_step;
        }
        if (rec) rec->discounted_total = total;
        out[0] = total;
    };

    std::vector<double> sum, sumsq;
    run_paths(cfg.n_paths, 1, cfg.n_threads, path_fn, sum, sumsq);
    const double trunc =
        std::exp(-d.r * t_max) * n_rights * per_right_bound + cfg.early_exit_cutoff;
    return make_estimate(sum[0], sumsq[0], cfg.n_paths, trunc);
}

} // namespace stopgrid
