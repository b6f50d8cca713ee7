#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "metrics.hpp"
#include "model.hpp"
#include "oracle.hpp"
#include "plan.hpp"
#include "random.hpp"
#include "slicing.hpp"
#include "strategies.hpp"

namespace cesim {

// Small adversarial scenario for fuzzing: a handful of entities with arbitrary
// overlaps. With integer_magnitudes, per-minute power and demands are whole
// numbers so every chunk supply is an exact integer.
inline Scenario fuzz_scenario(Xoshiro256StarStar& rng, bool integer_magnitudes = false) {
    Scenario sc;
    sc.window_start = 0;
    sc.window_end = rng.uniform_int(8, 60);
    long long w = sc.window_end;
    long long ns = rng.uniform_int(0, 4);
    long long nr = rng.uniform_int(0, 5);
    for (long long i = 0; i < ns; ++i) {
        EnergyService s;
        s.id = "S" + std::to_string(i + 1);
        s.start = rng.uniform_int(0, w - 1);
        long long len = rng.uniform_int(1, w);
        s.end = std::min(s.start + len, w);
        double span = double(s.end - s.start);
        s.dec = integer_magnitudes ? double(rng.uniform_int(1, 3)) * span
                                   : rng.uniform_real(5.0, 150.0);
        sc.services.push_back(std::move(s));
    }
    for (long long i = 0; i < nr; ++i) {
        EnergyRequest r;
        r.id = "R" + std::to_string(i + 1);
        r.start = rng.uniform_int(0, w - 1);
        long long len = rng.uniform_int(1, w);
        r.end = std::min(r.start + len, w);
        r.re = integer_magnitudes ? double(rng.uniform_int(1, 12))
                                  : rng.uniform_real(10.0, 300.0);
        sc.requests.push_back(std::move(r));
    }
    validate_and_clip(sc);
    return sc;
}

// Full invariant audit of one scenario: slicing conserves supply, every
// strategy's plan is feasible and bounded by the max-flow optimum, metric
// identities hold, and the max-min oracle plan is itself feasible.
inline std::vector<std::string> verify_scenario(const Scenario& sc, long long quantum = 10,
                                                const AllocationPlan* injected = nullptr) {
    std::vector<std::string> out;
    Timeline tl = slice(sc);

    double dec_sum = total_dec(sc);
    if (std::fabs(tl.agg_e - dec_sum) > 1e-9 * (1.0 + dec_sum))
        out.push_back("slicing loses supply: chunks " + std::to_string(tl.agg_e) +
                      " vs services " + std::to_string(dec_sum));

    double optimum = max_utilization(sc, tl).first;

    auto audit = [&](const AllocationPlan& plan) {
        for (auto& v : plan_violations(sc, tl, plan, 1e-9))
            out.push_back(plan.strategy + ": " + v);
        double tot = plan.total();
        if (tot > optimum + 1e-6)
            out.push_back(plan.strategy + ": total " + std::to_string(tot) +
                          " exceeds max-flow optimum " + std::to_string(optimum));
        MetricsReport rep = compute_report(sc, tl, plan);
        if (tl.agg_e > 0.0 &&
            std::fabs(rep.utilization + rep.wastage_pct - 1.0) > 1e-9)
            out.push_back(plan.strategy + ": utilization + wastage_pct != 1");
        if (rep.entropy_fp < -1e-12)
            out.push_back(plan.strategy + ": negative entropy score");
        for (const auto& [rid, sf] : rep.satisfaction)
            if (sf < -1e-12 || sf > 1.0 + 1e-12)
                out.push_back(plan.strategy + ": satisfaction of " + rid +
                              " outside [0,1]");
    };

    for (Strategy st : all_strategies()) audit(allocate(sc, tl, st, quantum));
    audit(maxmin_optimal(sc, tl));
    if (injected) audit(*injected);
    return out;
}

// Corrupts a plan by inflating its largest allocation; used as a self-test
// that the audit actually fires.
inline AllocationPlan inject_overalloc(AllocationPlan plan) {
    std::string worst;
    double most = -1.0;
    for (const auto& [rid, v] : plan.per_request)
        if (v > most) {
            most = v;
            worst = rid;
        }
    if (worst.empty()) {
        plan.per_request["R?"] = 1.0;
        return plan;
    }
    double bump = most * 0.5 + 1.0;
    plan.per_request[worst] += bump;
    bool bumped_cell = false;
    for (auto& [key, v] : plan.per_cell) {
        if (key.first == worst) {
            v += bump;
            bumped_cell = true;
            break;
        }
    }
    if (!bumped_cell) plan.per_cell[{worst, 0}] += bump;
    return plan;
}

// Greedy shrink of a failing scenario: drop entities one at a time while the
// predicate keeps failing. Predicate returns true when the scenario is bad.
inline Scenario minimize_repro(Scenario sc,
                               const std::function<bool(const Scenario&)>& still_bad) {
    bool shrunk = true;
    while (shrunk) {
        shrunk = false;
        for (size_t i = 0; i < sc.services.size(); ++i) {
            Scenario cand = sc;
            cand.services.erase(cand.services.begin() + long(i));
            validate_and_clip(cand);
            if (still_bad(cand)) {
                sc = std::move(cand);
                shrunk = true;
                break;
            }
        }
        if (shrunk) continue;
        for (size_t i = 0; i < sc.requests.size(); ++i) {
            Scenario cand = sc;
            cand.requests.erase(cand.requests.begin() + long(i));
            validate_and_clip(cand);
            if (still_bad(cand)) {
                sc = std::move(cand);
                shrunk = true;
                break;
            }
        }
    }
    return sc;
}

}  // namespace cesim
