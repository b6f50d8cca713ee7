#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "model.hpp"
#include "plan.hpp"
#include "slicing.hpp"

namespace cesim {

enum class Strategy { FCFS, P_FCFS, RR, MAXMIN, FACES, NFACES };

inline const std::vector<Strategy>& all_strategies() {
    static const std::vector<Strategy> v{Strategy::FCFS,   Strategy::P_FCFS,
                                         Strategy::RR,     Strategy::MAXMIN,
                                         Strategy::FACES,  Strategy::NFACES};
    return v;
}

inline std::string strategy_name(Strategy s) {
    switch (s) {
        case Strategy::FCFS: return "FCFS";
        case Strategy::P_FCFS: return "P_FCFS";
        case Strategy::RR: return "RR";
        case Strategy::MAXMIN: return "MAXMIN";
        case Strategy::FACES: return "FACES";
        case Strategy::NFACES: return "NFACES";
    }
    return "?";
}

// Case-insensitive, '-' accepted for '_'.
inline std::optional<Strategy> parse_strategy(std::string name) {
    for (auto& ch : name) {
        if (ch == '-') ch = '_';
        ch = char(std::toupper(static_cast<unsigned char>(ch)));
    }
    for (Strategy s : all_strategies())
        if (name == strategy_name(s)) return s;
    return std::nullopt;
}

namespace detail {

constexpr double kEps = 1e-12;

// Distributes a group-level take back onto the group's raw chunks,
// proportional to each chunk's share of the group supply.
inline void spread_over_group(AllocationPlan& plan, const Timeline& tl,
                              const MergedGroup& g, const std::string& rid, double take) {
    if (take <= 0.0 || g.avail <= 0.0) return;
    for (int ci : g.chunk_indices) {
        double part = take * (tl.chunks[ci].avail / g.avail);
        if (part > 0.0) plan.per_cell[{rid, ci}] += part;
    }
}

inline AllocationPlan alloc_fcfs(const Scenario& sc, const Timeline& tl) {
    AllocationPlan plan;
    plan.strategy = "FCFS";
    for (const auto& r : sc.requests) plan.per_request[r.id] = 0.0;

    std::vector<int> svs(sc.services.size());
    for (size_t i = 0; i < svs.size(); ++i) svs[i] = int(i);
    std::sort(svs.begin(), svs.end(), [&](int a, int b) {
        const auto& sa = sc.services[a];
        const auto& sb = sc.services[b];
        if (sa.start != sb.start) return sa.start < sb.start;
        return sa.id < sb.id;
    });

    std::vector<char> reserved(sc.services.size(), 0);
    for (const auto& r : sc.requests) {
        double rem = r.re;
        for (int si : svs) {
            if (rem <= kEps) break;
            if (reserved[si]) continue;
            const auto& s = sc.services[si];
            long long lo = std::max(s.start, r.start);
            long long hi = std::min(s.end, r.end);
            if (hi <= lo) continue;
            reserved[si] = 1;
            double overlap_e = s.dec * double(hi - lo) / double(s.end - s.start);
            double take = std::min(rem, overlap_e);
            plan.per_request[r.id] += take;
            rem -= take;
            // breakdown: walk the overlap chunk by chunk until the take is spent
            double left = take;
            for (size_t ci = 0; ci < tl.chunks.size() && left > 0.0; ++ci) {
                const Chunk& c = tl.chunks[ci];
                long long a = std::max(c.start, lo);
                long long b = std::min(c.end, hi);
                if (b <= a) continue;
                double portion = s.dec * double(b - a) / double(s.end - s.start);
                double cell = std::min(left, portion);
                if (cell > 0.0) plan.per_cell[{r.id, int(ci)}] += cell;
                left -= cell;
            }
        }
    }
    return plan;
}

inline AllocationPlan alloc_pfcfs(const Scenario& sc, const Timeline& tl,
                                  const std::vector<MergedGroup>& groups) {
    AllocationPlan plan;
    plan.strategy = "P_FCFS";
    std::vector<double> rem(sc.requests.size());
    for (size_t i = 0; i < sc.requests.size(); ++i) {
        plan.per_request[sc.requests[i].id] = 0.0;
        rem[i] = sc.requests[i].re;
    }
    for (const auto& g : groups) {
        double e = g.avail;
        for (int i : g.active) {
            double take = std::min(rem[i], e);
            if (take > 0.0) {
                plan.per_request[sc.requests[i].id] += take;
                spread_over_group(plan, tl, g, sc.requests[i].id, take);
            }
            rem[i] -= take;
            e -= take;
            if (e <= kEps) break;
        }
    }
    return plan;
}

inline AllocationPlan alloc_rr(const Scenario& sc, const Timeline& tl, long long quantum) {
    AllocationPlan plan;
    plan.strategy = "RR";
    std::vector<double> rem(sc.requests.size());
    for (size_t i = 0; i < sc.requests.size(); ++i) {
        plan.per_request[sc.requests[i].id] = 0.0;
        rem[i] = sc.requests[i].re;
    }
    size_t n = sc.requests.size();
    if (n == 0) return plan;

    size_t cursor = 0;
    for (long long t = sc.window_start; t < sc.window_end;) {
        long long t2 = std::min(t + quantum, sc.window_end);
        // requests alive somewhere in the slot and still unmet
        std::vector<char> cand(n, 0);
        bool any = false;
        for (size_t i = 0; i < n; ++i) {
            const auto& r = sc.requests[i];
            if (r.start < t2 && r.end > t && rem[i] > kEps) {
                cand[i] = 1;
                any = true;
            }
        }
        if (any) {
            size_t pick = cursor;
            for (size_t off = 0; off < n; ++off) {
                size_t pos = (cursor + off) % n;
                if (cand[pos]) {
                    pick = pos;
                    break;
                }
            }
            const auto& r = sc.requests[pick];
            for (size_t ci = 0; ci < tl.chunks.size(); ++ci) {
                const Chunk& c = tl.chunks[ci];
                long long lo = std::max(c.start, t);
                long long hi = std::min(c.end, t2);
                if (hi <= lo) continue;
                if (!(r.start < c.end && r.end > c.start)) continue;
                double part = c.avail * double(hi - lo) / double(c.end - c.start);
                double take = std::min(rem[pick], part);
                if (take > 0.0) plan.per_cell[{r.id, int(ci)}] += take;
                plan.per_request[r.id] += take;
                rem[pick] -= take;
            }
            cursor = (pick + 1) % n;
        }
        t = t2;
    }
    return plan;
}

// water-filling with in-chunk redistribution of capped shares
inline AllocationPlan alloc_maxmin(const Scenario& sc, const Timeline& tl,
                                   const std::vector<MergedGroup>& groups) {
    AllocationPlan plan;
    plan.strategy = "MAXMIN";
    std::vector<double> rem(sc.requests.size());
    for (size_t i = 0; i < sc.requests.size(); ++i) {
        plan.per_request[sc.requests[i].id] = 0.0;
        rem[i] = sc.requests[i].re;
    }
    for (const auto& g : groups) {
        std::vector<std::pair<int, double>> left;
        for (int i : g.active)
            if (rem[i] > kEps) left.emplace_back(i, rem[i]);
        std::vector<double> got(sc.requests.size(), 0.0);
        double e = g.avail;
        while (!left.empty() && e > kEps) {
            double share = e / double(left.size());
            bool any_capped = false;
            for (const auto& [i, d] : left)
                if (d <= share) any_capped = true;
            if (!any_capped) {
                for (const auto& [i, d] : left) {
                    got[i] += share;
                    rem[i] -= share;
                }
                e = 0.0;
                break;
            }
            std::vector<std::pair<int, double>> next;
            for (const auto& [i, d] : left) {
                if (d <= share) {
                    got[i] += d;
                    rem[i] = 0.0;
                    e -= d;
                } else {
                    next.emplace_back(i, d);
                }
            }
            left = std::move(next);
        }
        for (int i : g.active) {
            if (got[i] > 0.0) {
                plan.per_request[sc.requests[i].id] += got[i];
                spread_over_group(plan, tl, g, sc.requests[i].id, got[i]);
            }
        }
    }
    return plan;
}

// Pass 1 gives sole-occupant chunks to their request; pass 2 splits contested
// chunks equally among unmet requests, capped at demand, capped surplus wasted.
inline AllocationPlan alloc_faces(const Scenario& sc, const Timeline& tl,
                                  const std::vector<MergedGroup>& groups) {
    AllocationPlan plan;
    plan.strategy = "FACES";
    std::vector<double> rem(sc.requests.size());
    for (size_t i = 0; i < sc.requests.size(); ++i) {
        plan.per_request[sc.requests[i].id] = 0.0;
        rem[i] = sc.requests[i].re;
    }
    for (const auto& g : groups) {
        if (g.active.size() != 1) continue;
        int i = g.active[0];
        double take = std::min(rem[i], g.avail);
        if (take > 0.0) {
            plan.per_request[sc.requests[i].id] += take;
            spread_over_group(plan, tl, g, sc.requests[i].id, take);
        }
        rem[i] -= take;
    }
    for (const auto& g : groups) {
        if (g.active.size() < 2) continue;
        std::vector<int> unmet;
        for (int i : g.active)
            if (rem[i] > kEps) unmet.push_back(i);
        if (unmet.empty()) continue;
        double share = g.avail / double(unmet.size());
        for (int i : unmet) {
            double take = std::min(rem[i], share);
            if (take > 0.0) {
                plan.per_request[sc.requests[i].id] += take;
                spread_over_group(plan, tl, g, sc.requests[i].id, take);
            }
            rem[i] -= take;
        }
    }
    return plan;
}

// Like FACES but contested chunks go greedily to the largest remaining
// demand first, so big partial requests are topped up before small ones.
inline AllocationPlan alloc_nfaces(const Scenario& sc, const Timeline& tl,
                                   const std::vector<MergedGroup>& groups) {
    AllocationPlan plan;
    plan.strategy = "NFACES";
    std::vector<double> rem(sc.requests.size());
    for (size_t i = 0; i < sc.requests.size(); ++i) {
        plan.per_request[sc.requests[i].id] = 0.0;
        rem[i] = sc.requests[i].re;
    }
    for (const auto& g : groups) {
        if (g.active.size() != 1) continue;
        int i = g.active[0];
        double take = std::min(rem[i], g.avail);
        if (take > 0.0) {
            plan.per_request[sc.requests[i].id] += take;
            spread_over_group(plan, tl, g, sc.requests[i].id, take);
        }
        rem[i] -= take;
    }
    for (const auto& g : groups) {
        if (g.active.size() < 2) continue;
        std::vector<int> unmet;
        for (int i : g.active)
            if (rem[i] > kEps) unmet.push_back(i);
        if (unmet.empty()) continue;
        std::sort(unmet.begin(), unmet.end(), [&](int a, int b) {
            if (rem[a] != rem[b]) return rem[a] > rem[b];
            return sc.requests[a].arrival_rank < sc.requests[b].arrival_rank;
        });
        double e = g.avail;
        for (int i : unmet) {
            double take = std::min(rem[i], e);
            if (take > 0.0) {
                plan.per_request[sc.requests[i].id] += take;
                spread_over_group(plan, tl, g, sc.requests[i].id, take);
            }
            rem[i] -= take;
            e -= take;
            if (e <= kEps) break;
        }
    }
    return plan;
}

}  // namespace detail

inline AllocationPlan allocate(const Scenario& sc, const Timeline& tl, Strategy strat,
                               long long quantum = 10) {
    switch (strat) {
        case Strategy::FCFS: return detail::alloc_fcfs(sc, tl);
        case Strategy::RR: return detail::alloc_rr(sc, tl, quantum);
        default: break;
    }
    auto groups = merged_groups(tl);
    switch (strat) {
        case Strategy::P_FCFS: return detail::alloc_pfcfs(sc, tl, groups);
        case Strategy::MAXMIN: return detail::alloc_maxmin(sc, tl, groups);
        case Strategy::FACES: return detail::alloc_faces(sc, tl, groups);
        case Strategy::NFACES: return detail::alloc_nfaces(sc, tl, groups);
        default: break;
    }
    return {};
}

}  // namespace cesim
