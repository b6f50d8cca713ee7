#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "model.hpp"

namespace cesim {

// One slice of the window between two consecutive event boundaries.
struct Chunk {
    long long start = 0;
    long long end = 0;
    double avail = 0.0;                                        // total supply in the slice
    std::vector<std::pair<int, double>> contributing;          // (service index, energy share)
    std::vector<int> active;                                   // request indices, arrival order
};

struct Timeline {
    std::vector<Chunk> chunks;
    double agg_e = 0.0;
};

// Cuts the window at every service and request endpoint. Supply inside a chunk
// is the time-prorated share of each overlapping service.
inline Timeline slice(const Scenario& sc) {
    std::vector<long long> bounds{sc.window_start, sc.window_end};
    for (const auto& s : sc.services) {
        bounds.push_back(std::clamp(s.start, sc.window_start, sc.window_end));
        bounds.push_back(std::clamp(s.end, sc.window_start, sc.window_end));
    }
    for (const auto& r : sc.requests) {
        bounds.push_back(std::clamp(r.start, sc.window_start, sc.window_end));
        bounds.push_back(std::clamp(r.end, sc.window_start, sc.window_end));
    }
    std::sort(bounds.begin(), bounds.end());
    bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());

    Timeline tl;
    for (size_t b = 0; b + 1 < bounds.size(); ++b) {
        Chunk c;
        c.start = bounds[b];
        c.end = bounds[b + 1];
        for (size_t si = 0; si < sc.services.size(); ++si) {
            const auto& s = sc.services[si];
            long long lo = std::max(s.start, c.start);
            long long hi = std::min(s.end, c.end);
            if (hi > lo) {
                double share = s.dec * double(hi - lo) / double(s.end - s.start);
                c.avail += share;
                c.contributing.emplace_back(int(si), share);
            }
        }
        for (size_t ri = 0; ri < sc.requests.size(); ++ri) {
            const auto& r = sc.requests[ri];
            if (r.start < c.end && r.end > c.start) c.active.push_back(int(ri));
        }
        tl.agg_e += c.avail;
        tl.chunks.push_back(std::move(c));
    }
    return tl;
}

// Maximal runs of adjacent chunks whose active request sets coincide. The
// per-chunk strategies operate on these, which reproduces the coarser
// request-endpoint-only segmentation regardless of how service endpoints
// happen to subdivide it.
struct MergedGroup {
    std::vector<int> active;
    std::vector<int> chunk_indices;
    double avail = 0.0;
};

inline std::vector<MergedGroup> merged_groups(const Timeline& tl) {
    std::vector<MergedGroup> out;
    for (size_t ci = 0; ci < tl.chunks.size(); ++ci) {
        const Chunk& c = tl.chunks[ci];
        if (!out.empty() && out.back().active == c.active) {
            out.back().chunk_indices.push_back(int(ci));
        } else {
            MergedGroup g;
            g.active = c.active;
            g.chunk_indices.push_back(int(ci));
            out.push_back(std::move(g));
        }
    }
    for (auto& g : out) {
        double a = 0.0;
        for (int ci : g.chunk_indices) a += tl.chunks[ci].avail;
        g.avail = a;
    }
    return out;
}

}  // namespace cesim
