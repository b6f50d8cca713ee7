#include <cstdio>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cesim/cesim.hpp"

namespace {

using namespace cesim;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Strategy need_strategy(const std::string& name) {
    auto s = parse_strategy(name);
    if (!s) throw UsageError("unknown strategy \"" + name + "\"");
    return *s;
}

std::vector<Strategy> pick_strategies(const std::string& name, bool all,
                                      const std::vector<Strategy>& fallback) {
    if (all && !name.empty()) throw UsageError("--strategy and --all are exclusive");
    if (all) return all_strategies();
    if (!name.empty()) return {need_strategy(name)};
    return fallback;
}

std::vector<long long> parse_n_list(const std::string& text) {
    std::vector<long long> out;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) return;
        size_t pos = 0;
        long long v = 0;
        try {
            v = std::stoll(cur, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != cur.size() || v < 0) throw UsageError("bad --n-requests entry \"" + cur + "\"");
        out.push_back(v);
        cur.clear();
    };
    for (char c : text) {
        if (c == ',') flush();
        else if (!std::isspace(static_cast<unsigned char>(c))) cur.push_back(c);
    }
    flush();
    if (out.empty()) throw UsageError("--n-requests list is empty");
    return out;
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::fputs(content.c_str(), stdout);
    else
        write_file(out_path, content);
}

int cmd_run(const std::string& scenario_path, const std::string& strategy, bool all,
            long long quantum, const std::string& out_path, const std::string& plan_path) {
    Scenario sc = load_scenario(scenario_path);
    Timeline tl = slice(sc);
    auto strategies = pick_strategies(strategy, all, {});
    if (strategies.empty()) throw UsageError("run needs --strategy NAME or --all");

    std::printf("%-8s %12s %10s %8s   %s\n", "strategy", "total_mAh", "waste_pct",
                "sigma", "fulfillment_pct");
    std::string csv = std::string(kMetricsCsvHeader) + "\n";
    nlohmann::ordered_json plans = nlohmann::ordered_json::object();
    for (Strategy st : strategies) {
        AllocationPlan plan = allocate(sc, tl, st, quantum);
        MetricsReport rep = compute_report(sc, tl, plan);
        std::string fuls;
        for (const auto& r : sc.requests) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.1f", 100.0 * rep.fulfillment[r.id]);
            if (!fuls.empty()) fuls += " ";
            fuls += buf;
        }
        std::printf("%-8s %12.2f %9.2f%% %8.2f   %s\n", rep.strategy.c_str(),
                    rep.total_alloc, 100.0 * rep.wastage_pct, rep.sigma_unfairness,
                    fuls.c_str());
        csv += metrics_csv_row(rep) + "\n";
        if (!plan_path.empty()) {
            nlohmann::ordered_json jp = nlohmann::ordered_json::object();
            for (const auto& [rid, v] : plan.per_request) jp[rid] = v;
            nlohmann::ordered_json jc = nlohmann::ordered_json::array();
            for (const auto& [key, v] : plan.per_cell)
                jc.push_back({{"request", key.first}, {"chunk", key.second}, {"mah", v}});
            plans[rep.strategy] = {{"per_request", jp}, {"per_cell", jc}};
        }
    }
    if (!out_path.empty()) write_file(out_path, csv);
    if (!plan_path.empty()) write_file(plan_path, plans.dump(2) + "\n");
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& n_list_text,
              long long trials, std::optional<uint64_t> seed, const std::string& strategy,
              bool all, long long quantum, int jobs, const std::string& out_path) {
    SweepSpec spec;
    if (!config_path.empty()) spec.config = load_gen_config(config_path);
    spec.n_list = parse_n_list(n_list_text);
    if (trials < 1) throw UsageError("--trials must be >= 1");
    spec.trials = trials;
    spec.seed = seed ? *seed : spec.config.seed;
    spec.strategies = pick_strategies(strategy, all, default_sweep_strategies());
    spec.quantum = quantum;
    spec.jobs = jobs;
    emit(out_path, sweep_csv(run_sweep(spec)));
    return 0;
}

int cmd_generate(const std::string& config_path, std::optional<uint64_t> seed,
                 std::optional<long long> n_requests, const std::string& out_path) {
    GenConfig cfg;
    if (!config_path.empty()) cfg = load_gen_config(config_path);
    if (n_requests) cfg.n_requests = *n_requests;
    Scenario sc = generate_scenario(cfg, seed ? *seed : cfg.seed);
    emit(out_path, scenario_to_json(sc));
    return 0;
}

int cmd_oracle(const std::string& scenario_path, long long quantum) {
    Scenario sc = load_scenario(scenario_path);
    Timeline tl = slice(sc);
    auto [optimum, witness] = max_utilization(sc, tl);
    std::printf("supply (agg_e):    %.6f mAh\n", tl.agg_e);
    std::printf("max-flow optimum:  %.6f mAh\n", optimum);
    AllocationPlan fair = maxmin_optimal(sc, tl);
    std::printf("max-min floors:\n");
    for (const auto& r : sc.requests)
        std::printf("  %-8s %.6f of %.6f\n", r.id.c_str(), fair.per_request[r.id], r.re);
    std::printf("strategy totals vs optimum:\n");
    bool ok = true;
    for (Strategy st : all_strategies()) {
        AllocationPlan plan = allocate(sc, tl, st, quantum);
        double tot = plan.total();
        bool fine = tot <= optimum + 1e-6;
        ok = ok && fine;
        std::printf("  %-8s %12.6f  %s\n", strategy_name(st).c_str(), tot,
                    fine ? "ok" : "EXCEEDS OPTIMUM");
    }
    (void)witness;
    return ok ? 0 : 1;
}

int cmd_verify(long long trials, uint64_t seed, long long quantum, bool inject,
               const std::string& out_path) {
    if (trials < 1) throw UsageError("--trials must be >= 1");
    if (inject) {
        Xoshiro256StarStar rng(mix_seed(seed, 0xFACE));
        Scenario sc;
        do {
            sc = fuzz_scenario(rng);
        } while (sc.requests.empty() || sc.services.empty());
        Timeline tl = slice(sc);
        AllocationPlan bad = inject_overalloc(allocate(sc, tl, Strategy::FACES, quantum));
        if (verify_scenario(sc, quantum, &bad).empty()) {
            std::fprintf(stderr, "self-test FAILED: corrupted plan not flagged\n");
            return 1;
        }
        std::printf("self-test ok: corrupted plan flagged\n");
    }
    for (long long t = 0; t < trials; ++t) {
        Xoshiro256StarStar rng(mix_seed(seed, uint64_t(t)));
        Scenario sc = fuzz_scenario(rng, t % 3 == 0);
        auto violations = verify_scenario(sc, quantum);
        if (!violations.empty()) {
            std::fprintf(stderr, "violation at trial %lld:\n", t);
            for (const auto& v : violations) std::fprintf(stderr, "  %s\n", v.c_str());
            Scenario small = minimize_repro(sc, [&](const Scenario& cand) {
                return !verify_scenario(cand, quantum).empty();
            });
            std::string path = out_path.empty() ? "cesim-repro.json" : out_path;
            save_scenario(small, path);
            std::fprintf(stderr, "minimized repro written to %s\n", path.c_str());
            return 1;
        }
    }
    std::printf("%lld scenarios verified, no violations\n", trials);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"crowdsourced energy service allocation simulator"};
    app.require_subcommand(1);

    std::string scenario_path, config_path, out_path, plan_path, strategy;
    std::string n_list_text = "1,5,10,15,20,25,30";
    bool all = false, inject = false;
    long long quantum = 10, trials_sweep = 20, trials_verify = 200;
    int jobs = 0;
    uint64_t seed_val = 0;
    std::optional<long long> n_single;
    long long n_single_val = 0;

    auto* run = app.add_subcommand("run", "allocate one scenario and print metrics");
    run->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--strategy", strategy, "FCFS, P_FCFS, RR, MAXMIN, FACES or NFACES");
    run->add_flag("--all", all, "run every strategy");
    run->add_option("--quantum", quantum, "round-robin slot length, minutes");
    run->add_option("--out", out_path, "write metrics CSV here");
    run->add_option("--plan-out", plan_path, "write allocation breakdown JSON here");

    auto* sweep = app.add_subcommand("sweep", "averaged metrics across request counts");
    sweep->add_option("--config", config_path, "generator config JSON");
    sweep->add_option("--n-requests", n_list_text, "comma-separated request counts");
    sweep->add_option("--trials", trials_sweep, "seeded trials per count");
    auto* sweep_seed = sweep->add_option("--seed", seed_val, "base seed");
    sweep->add_option("--strategy", strategy, "single strategy");
    sweep->add_flag("--all", all, "include RR as well");
    sweep->add_option("--quantum", quantum, "round-robin slot length, minutes");
    sweep->add_option("--jobs", jobs, "worker threads, 0 = auto");
    sweep->add_option("--out", out_path, "write CSV here instead of stdout");

    auto* gen = app.add_subcommand("generate", "write one synthetic scenario");
    gen->add_option("--config", config_path, "generator config JSON");
    auto* gen_seed = gen->add_option("--seed", seed_val, "scenario seed");
    auto* gen_n = gen->add_option("--n-requests", n_single_val, "fixed request count");
    gen->add_option("--out", out_path, "write scenario here instead of stdout");

    auto* oracle = app.add_subcommand("oracle", "exact bounds for one scenario");
    oracle->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    oracle->add_option("--quantum", quantum, "round-robin slot length, minutes");

    auto* verify = app.add_subcommand("verify", "fuzz invariants on random scenarios");
    verify->add_option("--trials", trials_verify, "fuzz iterations");
    verify->add_option("--seed", seed_val, "fuzz seed");
    verify->add_option("--quantum", quantum, "round-robin slot length, minutes");
    verify->add_flag("--inject-overalloc", inject, "self-test the invariant checker");
    verify->add_option("--out", out_path, "repro file path on failure");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        std::optional<uint64_t> seed_opt;
        if (run->parsed())
            return cmd_run(scenario_path, strategy, all, quantum, out_path, plan_path);
        if (sweep->parsed()) {
            if (sweep_seed->count()) seed_opt = seed_val;
            return cmd_sweep(config_path, n_list_text, trials_sweep, seed_opt, strategy,
                             all, quantum, jobs, out_path);
        }
        if (gen->parsed()) {
            if (gen_seed->count()) seed_opt = seed_val;
            if (gen_n->count()) n_single = n_single_val;
            return cmd_generate(config_path, seed_opt, n_single, out_path);
        }
        if (oracle->parsed()) return cmd_oracle(scenario_path, quantum);
        if (verify->parsed())
            return cmd_verify(trials_verify, seed_val, quantum, inject, out_path);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
