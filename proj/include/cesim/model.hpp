#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace cesim {

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Time is integer minutes, energy is mAh. Intervals are half-open [start, end).

struct EnergyService {
    std::string id;
    std::string owner;
    long long start = 0;
    long long end = 0;
    double dec = 0.0;          // deliverable energy over [start, end), uniform power
    std::string meta;          // opaque JSON payload, preserved on round-trip
};

struct EnergyRequest {
    std::string id;
    long long start = 0;
    long long end = 0;
    double re = 0.0;           // required energy
    int arrival_rank = 0;      // 1-based position in file order, tie-break key
};

struct Scenario {
    long long window_start = 0;
    long long window_end = 0;
    std::vector<EnergyService> services;
    std::vector<EnergyRequest> requests;
};

// Clips every entity to the window. Service energy is prorated to the surviving
// fraction of its interval (uniform power); request demand is kept as declared.
// Throws ScenarioError on malformed input, naming the offending entity.
inline void validate_and_clip(Scenario& sc) {
    if (sc.window_start >= sc.window_end)
        throw ScenarioError("window start must precede window end");

    std::unordered_set<std::string> seen;
    for (auto& s : sc.services) {
        if (s.id.empty()) throw ScenarioError("service with empty id");
        if (!seen.insert(s.id).second)
            throw ScenarioError("duplicate service id: " + s.id);
        if (s.start >= s.end)
            throw ScenarioError("service " + s.id + ": start must precede end");
        if (!(s.dec > 0.0))
            throw ScenarioError("service " + s.id + ": dec must be positive");
        long long lo = std::max(s.start, sc.window_start);
        long long hi = std::min(s.end, sc.window_end);
        if (hi <= lo)
            throw ScenarioError("service " + s.id + ": empty after clipping to window");
        if (lo != s.start || hi != s.end) {
            s.dec = s.dec * double(hi - lo) / double(s.end - s.start);
            s.start = lo;
            s.end = hi;
        }
    }

    seen.clear();
    int rank = 0;
    for (auto& r : sc.requests) {
        if (r.id.empty()) throw ScenarioError("request with empty id");
        if (!seen.insert(r.id).second)
            throw ScenarioError("duplicate request id: " + r.id);
        if (r.start >= r.end)
            throw ScenarioError("request " + r.id + ": start must precede end");
        if (!(r.re > 0.0))
            throw ScenarioError("request " + r.id + ": re must be positive");
        long long lo = std::max(r.start, sc.window_start);
        long long hi = std::min(r.end, sc.window_end);
        if (hi <= lo)
            throw ScenarioError("request " + r.id + ": empty after clipping to window");
        r.start = lo;
        r.end = hi;
        r.arrival_rank = ++rank;
    }
}

inline double total_dec(const Scenario& sc) {
    double d = 0.0;
    for (const auto& s : sc.services) d += s.dec;
    return d;
}

}  // namespace cesim
