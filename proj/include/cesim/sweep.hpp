#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "metrics.hpp"
#include "random.hpp"
#include "slicing.hpp"
#include "strategies.hpp"
#include "workload.hpp"

namespace cesim {

// All strategies except RR, the comparison set used for request-count sweeps.
inline const std::vector<Strategy>& default_sweep_strategies() {
    static const std::vector<Strategy> v{Strategy::FCFS, Strategy::P_FCFS,
                                         Strategy::MAXMIN, Strategy::FACES,
                                         Strategy::NFACES};
    return v;
}

struct SweepSpec {
    GenConfig config;
    std::vector<long long> n_list{1, 5, 10, 15, 20, 25, 30};
    long long trials = 20;
    uint64_t seed = 42;
    std::vector<Strategy> strategies = default_sweep_strategies();
    long long quantum = 10;
    int jobs = 0;  // 0: hardware concurrency
};

struct SweepRow {
    Strategy strategy;
    long long n = 0;
    long long trial = 0;
    MetricsReport report;
};

// Trial t of every sweep point shares one scenario seed; the request-count
// override only changes how many request draws follow the service draws, so
// larger n extends rather than reshuffles the workload.
inline uint64_t trial_seed(uint64_t base_seed, long long trial) {
    return mix_seed(base_seed, uint64_t(trial));
}

// Runs trials in a worker pool and reduces in fixed (strategy, n, trial)
// order, so the output is byte-stable for a given seed at any job count.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    validate_config(spec.config);
    size_t n_points = spec.n_list.size();
    size_t n_trials = size_t(spec.trials < 0 ? 0 : spec.trials);
    size_t n_strats = spec.strategies.size();
    size_t n_jobs = n_points * n_trials;

    // grid[(point * trials + trial) * strategies + strat]
    std::vector<MetricsReport> grid(n_jobs * n_strats);

    auto work = [&](size_t job) {
        size_t pi = job / n_trials;
        size_t trial = job % n_trials;
        GenConfig cfg = spec.config;
        cfg.n_requests = spec.n_list[pi];
        Scenario sc = generate_scenario(cfg, trial_seed(spec.seed, (long long)trial));
        Timeline tl = slice(sc);
        for (size_t si = 0; si < n_strats; ++si) {
            AllocationPlan plan = allocate(sc, tl, spec.strategies[si], spec.quantum);
            grid[job * n_strats + si] = compute_report(sc, tl, plan);
        }
    };

    unsigned pool = spec.jobs > 0 ? unsigned(spec.jobs)
                                  : std::max(1u, std::thread::hardware_concurrency());
    if (pool <= 1 || n_jobs <= 1) {
        for (size_t j = 0; j < n_jobs; ++j) work(j);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> workers;
        for (unsigned w = 0; w < pool && w < n_jobs; ++w)
            workers.emplace_back([&] {
                for (size_t j = next.fetch_add(1); j < n_jobs; j = next.fetch_add(1))
                    work(j);
            });
        for (auto& t : workers) t.join();
    }

    std::vector<SweepRow> rows;
    rows.reserve(n_jobs * n_strats);
    for (size_t si = 0; si < n_strats; ++si)
        for (size_t pi = 0; pi < n_points; ++pi)
            for (size_t t = 0; t < n_trials; ++t)
                rows.push_back({spec.strategies[si], spec.n_list[pi], (long long)t,
                                grid[(pi * n_trials + t) * n_strats + si]});
    return rows;
}

inline constexpr const char* kSweepCsvHeader =
    "strategy,n_requests,trial,n_services,agg_e,total_alloc,mean_sf,std_sf,"
    "entropy_fp,sigma_unfairness,wastage_pct,utilization";

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = kSweepCsvHeader;
    out += "\n";
    for (const auto& row : rows) {
        const MetricsReport& r = row.report;
        out += strategy_name(row.strategy);
        out += "," + std::to_string(row.n);
        out += "," + std::to_string(row.trial);
        out += "," + std::to_string(r.n_services);
        for (double v : {r.agg_e, r.total_alloc, r.mean_sf, r.std_sf, r.entropy_fp,
                         r.sigma_unfairness, r.wastage_pct, r.utilization})
            out += "," + fmt_g9(v);
        out += "\n";
    }
    return out;
}

// Trial-averaged value of one metric at every (strategy, n) sweep point.
template <class Getter>
inline std::vector<std::vector<double>> averaged_curves(const std::vector<SweepRow>& rows,
                                                        const SweepSpec& spec,
                                                        Getter get) {
    std::vector<std::vector<double>> out(spec.strategies.size(),
                                         std::vector<double>(spec.n_list.size(), 0.0));
    std::vector<std::vector<long long>> cnt(spec.strategies.size(),
                                            std::vector<long long>(spec.n_list.size(), 0));
    for (const auto& row : rows) {
        size_t si = 0, pi = 0;
        while (spec.strategies[si] != row.strategy) ++si;
        while (spec.n_list[pi] != row.n) ++pi;
        out[si][pi] += get(row.report);
        ++cnt[si][pi];
    }
    for (size_t si = 0; si < out.size(); ++si)
        for (size_t pi = 0; pi < out[si].size(); ++pi)
            if (cnt[si][pi]) out[si][pi] /= double(cnt[si][pi]);
    return out;
}

}  // namespace cesim
