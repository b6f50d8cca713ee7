#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "cesim/cesim.hpp"

using namespace cesim;

namespace {

Scenario split_services_at_midpoint(const Scenario& sc) {
    Scenario out = sc;
    out.services.clear();
    for (const auto& s : sc.services) {
        if (s.end - s.start < 2) {
            out.services.push_back(s);
            continue;
        }
        long long mid = (s.start + s.end) / 2;
        double len = double(s.end - s.start);
        EnergyService a = s, b = s;
        a.id = s.id + "a";
        a.end = mid;
        a.dec = s.dec * double(mid - s.start) / len;
        b.id = s.id + "b";
        b.start = mid;
        b.dec = s.dec * double(s.end - mid) / len;
        out.services.push_back(a);
        out.services.push_back(b);
    }
    validate_and_clip(out);
    return out;
}

}  // namespace

TEST_CASE("every strategy emits a feasible plan bounded by the max-flow optimum") {
    Xoshiro256StarStar rng(mix_seed(777, 1));
    for (int t = 0; t < 120; ++t) {
        Scenario sc = fuzz_scenario(rng, t % 4 == 0);
        Timeline tl = slice(sc);
        double optimum = max_utilization(sc, tl).first;
        for (Strategy st : all_strategies()) {
            AllocationPlan plan = allocate(sc, tl, st);
            auto bad = plan_violations(sc, tl, plan);
            CAPTURE(t, strategy_name(st), bad);
            REQUIRE(bad.empty());
            REQUIRE(plan.total() <= optimum + 1e-6);
        }
    }
}

TEST_CASE("allocation is deterministic for a fixed scenario") {
    Xoshiro256StarStar rng(mix_seed(777, 2));
    Scenario sc = fuzz_scenario(rng);
    Timeline tl = slice(sc);
    for (Strategy st : all_strategies()) {
        AllocationPlan a = allocate(sc, tl, st);
        AllocationPlan b = allocate(sc, tl, st);
        REQUIRE(a.per_request == b.per_request);
        REQUIRE(a.per_cell == b.per_cell);
    }
}

TEST_CASE("splitting a service into equal-power halves never changes group strategies") {
    // The active request sets are untouched by extra service boundaries, so the
    // merged groups and their pooled supply are identical.
    Xoshiro256StarStar rng(mix_seed(777, 3));
    const Strategy kStable[] = {Strategy::P_FCFS, Strategy::MAXMIN, Strategy::FACES,
                                Strategy::NFACES};
    int compared = 0;
    for (int t = 0; t < 60; ++t) {
        Scenario sc = fuzz_scenario(rng);
        if (sc.services.empty() || sc.requests.empty()) continue;
        Scenario fine = split_services_at_midpoint(sc);
        Timeline tl = slice(sc);
        Timeline tl2 = slice(fine);
        REQUIRE_THAT(tl2.agg_e, Catch::Matchers::WithinAbs(tl.agg_e, 1e-9));
        for (Strategy st : kStable) {
            auto a = allocate(sc, tl, st).per_request;
            auto b = allocate(fine, tl2, st).per_request;
            REQUIRE(a.size() == b.size());
            for (const auto& [rid, v] : a) {
                CAPTURE(t, strategy_name(st), rid);
                REQUIRE_THAT(b.at(rid), Catch::Matchers::WithinAbs(v, 1e-9));
            }
        }
        ++compared;
    }
    REQUIRE(compared >= 20);
}

TEST_CASE("needs-first pass strands energy in a group only when everyone there is full") {
    Xoshiro256StarStar rng(mix_seed(777, 4));
    int groups_seen = 0;
    for (int t = 0; t < 80; ++t) {
        Scenario sc = fuzz_scenario(rng);
        Timeline tl = slice(sc);
        AllocationPlan plan = allocate(sc, tl, Strategy::NFACES);
        auto groups = merged_groups(tl);
        for (const auto& g : groups) {
            if (g.active.empty()) continue;
            ++groups_seen;
            std::set<int> members(g.chunk_indices.begin(), g.chunk_indices.end());
            double used = 0.0;
            for (const auto& [key, v] : plan.per_cell)
                if (members.count(key.second)) used += v;
            if (g.avail - used <= 1e-6) continue;
            for (int ri : g.active) {
                const auto& r = sc.requests[size_t(ri)];
                CAPTURE(t, r.id, g.avail, used);
                REQUIRE(plan.per_request.at(r.id) >= r.re - 1e-6);
            }
        }
    }
    REQUIRE(groups_seen >= 100);
}

TEST_CASE("adding a service never lowers the total for non-FCFS strategies") {
    Xoshiro256StarStar rng(mix_seed(777, 5));
    const Strategy kMono[] = {Strategy::P_FCFS, Strategy::RR, Strategy::MAXMIN,
                              Strategy::FACES, Strategy::NFACES};
    for (int t = 0; t < 60; ++t) {
        Scenario base = fuzz_scenario(rng);
        Scenario grown = base;
        EnergyService extra;
        extra.id = "SX";
        extra.start = rng.uniform_int(0, base.window_end - 1);
        extra.end = std::min(extra.start + rng.uniform_int(1, base.window_end),
                             base.window_end);
        extra.dec = rng.uniform_real(5.0, 120.0);
        grown.services.push_back(extra);
        validate_and_clip(grown);
        Timeline tl = slice(base);
        Timeline tl2 = slice(grown);
        for (Strategy st : kMono) {
            double before = allocate(base, tl, st).total();
            double after = allocate(grown, tl2, st).total();
            CAPTURE(t, strategy_name(st));
            REQUIRE(after >= before - 1e-9);
        }
    }
}

TEST_CASE("owner and meta fields do not steer allocation") {
    Xoshiro256StarStar rng(mix_seed(777, 6));
    Scenario sc = fuzz_scenario(rng);
    Scenario tagged = sc;
    for (auto& s : tagged.services) {
        s.owner = "op-" + s.id;
        s.meta = "{\"note\":\"decorated\"}";
    }
    Timeline tl = slice(sc);
    Timeline tl2 = slice(tagged);
    for (Strategy st : all_strategies())
        REQUIRE(allocate(sc, tl, st).per_request == allocate(tagged, tl2, st).per_request);
}

TEST_CASE("scenario audit passes on clean fuzz inputs") {
    Xoshiro256StarStar rng(mix_seed(777, 7));
    for (int t = 0; t < 25; ++t) {
        Scenario sc = fuzz_scenario(rng, t % 3 == 0);
        auto bad = verify_scenario(sc);
        CAPTURE(t, bad);
        REQUIRE(bad.empty());
    }
}

TEST_CASE("audit flags an inflated plan and the repro shrinker keeps it failing") {
    Xoshiro256StarStar rng(mix_seed(777, 8));
    Scenario sc;
    do {
        sc = fuzz_scenario(rng);
    } while (sc.requests.empty() || sc.services.empty());
    Timeline tl = slice(sc);
    AllocationPlan bad = inject_overalloc(allocate(sc, tl, Strategy::FACES));
    auto found = verify_scenario(sc, 10, &bad);
    REQUIRE_FALSE(found.empty());

    auto still_bad = [&](const Scenario& cand) {
        Timeline ctl = slice(cand);
        AllocationPlan cbad = inject_overalloc(allocate(cand, ctl, Strategy::FACES));
        return !verify_scenario(cand, 10, &cbad).empty();
    };
    Scenario small = minimize_repro(sc, still_bad);
    REQUIRE(still_bad(small));
    REQUIRE(small.services.size() + small.requests.size() <=
            sc.services.size() + sc.requests.size());
}

TEST_CASE("corrupting an empty plan still trips the audit") {
    Scenario sc;
    sc.window_start = 0;
    sc.window_end = 10;
    sc.services.push_back({"S1", "", 0, 10, 50.0, ""});
    sc.requests.push_back({"R1", 0, 10, 60.0, 0});
    validate_and_clip(sc);
    Timeline tl = slice(sc);
    AllocationPlan empty;
    empty.strategy = "EMPTY";
    AllocationPlan bad = inject_overalloc(empty);
    REQUIRE_FALSE(verify_scenario(sc, 10, &bad).empty());
}
