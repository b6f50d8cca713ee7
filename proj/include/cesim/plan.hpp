#pragma once

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "model.hpp"
#include "slicing.hpp"

namespace cesim {

// Result of one strategy run. per_cell refines per_request down to
// (request, chunk) grain; the two views agree within tolerance.
struct AllocationPlan {
    std::string strategy;
    std::map<std::string, double> per_request;
    std::map<std::pair<std::string, int>, double> per_cell;

    double total() const {
        double t = 0.0;
        for (const auto& [id, v] : per_request) t += v;
        return t;
    }
};

// Feasibility audit: non-negative cells, chunk supply respected, demand
// respected, breakdown consistent with totals, energy only drawn while the
// request is active. Returns human-readable violations, empty when clean.
inline std::vector<std::string> plan_violations(const Scenario& sc, const Timeline& tl,
                                                const AllocationPlan& plan,
                                                double tol = 1e-9) {
    std::vector<std::string> out;
    std::map<std::string, const EnergyRequest*> by_id;
    for (const auto& r : sc.requests) by_id[r.id] = &r;

    std::vector<double> chunk_used(tl.chunks.size(), 0.0);
    std::map<std::string, double> cell_sum;
    for (const auto& [key, v] : plan.per_cell) {
        const auto& [rid, ci] = key;
        if (v < -tol) out.push_back("negative cell for " + rid);
        if (ci < 0 || ci >= int(tl.chunks.size())) {
            out.push_back("cell outside timeline for " + rid);
            continue;
        }
        auto it = by_id.find(rid);
        if (it == by_id.end()) {
            out.push_back("cell for unknown request " + rid);
            continue;
        }
        const Chunk& c = tl.chunks[ci];
        bool active = it->second->start < c.end && it->second->end > c.start;
        if (!active && v > tol)
            out.push_back(rid + " allocated in chunk " + std::to_string(ci) +
                          " outside its interval");
        chunk_used[ci] += v;
        cell_sum[rid] += v;
    }
    for (size_t ci = 0; ci < tl.chunks.size(); ++ci) {
        if (chunk_used[ci] > tl.chunks[ci].avail + tol)
            out.push_back("chunk " + std::to_string(ci) + " oversubscribed: " +
                          std::to_string(chunk_used[ci]) + " > " +
                          std::to_string(tl.chunks[ci].avail));
    }
    for (const auto& [rid, v] : plan.per_request) {
        if (v < -tol) out.push_back("negative allocation for " + rid);
        auto it = by_id.find(rid);
        if (it == by_id.end()) {
            out.push_back("allocation for unknown request " + rid);
            continue;
        }
        if (v > it->second->re + tol)
            out.push_back(rid + " overfilled: " + std::to_string(v) + " > " +
                          std::to_string(it->second->re));
        double cs = cell_sum.count(rid) ? cell_sum[rid] : 0.0;
        if (std::fabs(cs - v) > tol * (1.0 + std::fabs(v)) + tol)
            out.push_back(rid + " breakdown mismatch: cells sum " + std::to_string(cs) +
                          " vs total " + std::to_string(v));
    }
    return out;
}

}  // namespace cesim
