#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "model.hpp"
#include "plan.hpp"
#include "slicing.hpp"

namespace cesim {

// Max-flow over source -> chunk -> request -> sink with BFS augmenting paths
// and a 1e-9 residual threshold.
class FlowNetwork {
  public:
    explicit FlowNetwork(int nodes) : adj_(nodes) {}

    int add_edge(int u, int v, double cap) {
        int id = int(edges_.size());
        adj_[u].push_back(id);
        edges_.push_back({v, cap});
        adj_[v].push_back(id + 1);
        edges_.push_back({u, 0.0});
        return id;
    }

    double max_flow(int s, int t) {
        double total = 0.0;
        const double eps = 1e-9;
        std::vector<int> par(adj_.size());
        while (true) {
            std::fill(par.begin(), par.end(), -1);
            par[s] = -2;
            std::deque<int> q{s};
            while (!q.empty()) {
                int u = q.front();
                q.pop_front();
                for (int ei : adj_[u]) {
                    const Edge& e = edges_[ei];
                    if (e.cap > eps && par[e.to] == -1) {
                        par[e.to] = ei;
                        q.push_back(e.to);
                    }
                }
            }
            if (par[t] == -1) return total;
            double aug = std::numeric_limits<double>::infinity();
            for (int v = t; v != s;) {
                int ei = par[v];
                aug = std::min(aug, edges_[ei].cap);
                v = edges_[ei ^ 1].to;
            }
            for (int v = t; v != s;) {
                int ei = par[v];
                edges_[ei].cap -= aug;
                edges_[ei ^ 1].cap += aug;
                v = edges_[ei ^ 1].to;
            }
            total += aug;
        }
    }

    // net flow pushed through a forward edge
    double flow_on(int edge_id) const { return edges_[edge_id + 1].cap; }

  private:
    struct Edge {
        int to;
        double cap;
    };
    std::vector<std::vector<int>> adj_;
    std::vector<Edge> edges_;
};

namespace detail {

struct BuiltNetwork {
    FlowNetwork net;
    int source;
    int sink;
    std::vector<std::tuple<int, int, int>> cell_edges;  // (chunk idx, request idx, edge id)
};

inline BuiltNetwork build_network(const Scenario& sc, const Timeline& tl,
                                  const std::vector<double>& request_caps) {
    int c = int(tl.chunks.size());
    int r = int(sc.requests.size());
    BuiltNetwork b{FlowNetwork(c + r + 2), 0, c + r + 1, {}};
    double inf = std::numeric_limits<double>::infinity();
    for (int ci = 0; ci < c; ++ci) {
        b.net.add_edge(b.source, 1 + ci, tl.chunks[ci].avail);
        for (int ri : tl.chunks[ci].active)
            b.cell_edges.emplace_back(ci, ri, b.net.add_edge(1 + ci, 1 + c + ri, inf));
    }
    for (int ri = 0; ri < r; ++ri)
        b.net.add_edge(1 + c + ri, b.sink, request_caps[ri]);
    return b;
}

inline AllocationPlan witness_plan(const Scenario& sc, BuiltNetwork& b,
                                   const std::string& name) {
    AllocationPlan plan;
    plan.strategy = name;
    for (const auto& r : sc.requests) plan.per_request[r.id] = 0.0;
    for (const auto& [ci, ri, eid] : b.cell_edges) {
        double f = b.net.flow_on(eid);
        if (f > 1e-12) {
            plan.per_cell[{sc.requests[ri].id, ci}] += f;
            plan.per_request[sc.requests[ri].id] += f;
        }
    }
    return plan;
}

inline double flow_with_caps(const Scenario& sc, const Timeline& tl,
                             const std::vector<double>& caps) {
    auto b = build_network(sc, tl, caps);
    return b.net.max_flow(b.source, b.sink);
}

}  // namespace detail

// Highest achievable total allocation, with a plan attaining it.
inline std::pair<double, AllocationPlan> max_utilization(const Scenario& sc,
                                                         const Timeline& tl) {
    std::vector<double> caps;
    caps.reserve(sc.requests.size());
    for (const auto& r : sc.requests) caps.push_back(r.re);
    auto b = detail::build_network(sc, tl, caps);
    double value = b.net.max_flow(b.source, b.sink);
    return {value, detail::witness_plan(sc, b, "MAX_FLOW")};
}

// Whether the given per-request totals (indexed like sc.requests) can all be
// met at once from the sliced supply.
inline bool targets_feasible(const Scenario& sc, const Timeline& tl,
                             const std::vector<double>& targets, double tol = 1e-9) {
    double want = 0.0;
    for (double x : targets) want += x;
    return detail::flow_with_caps(sc, tl, targets) >= want - tol;
}

// Lexicographically max-min allocation by progressive filling: binary-search a
// common floor, freeze requests pinned by demand or by a saturated cut, repeat.
inline AllocationPlan maxmin_optimal(const Scenario& sc, const Timeline& tl,
                                     double tol = 1e-6) {
    size_t n = sc.requests.size();
    std::vector<double> frozen(n, -1.0);
    size_t n_frozen = 0;
    double supply = tl.agg_e;

    auto floors_at = [&](double lam) {
        std::vector<double> f(n);
        for (size_t i = 0; i < n; ++i)
            f[i] = frozen[i] >= 0.0 ? frozen[i] : std::min(lam, sc.requests[i].re);
        return f;
    };
    auto feasible = [&](const std::vector<double>& floors) {
        double want = 0.0;
        for (double x : floors) want += x;
        return detail::flow_with_caps(sc, tl, floors) >= want - 1e-9;
    };
    // The bisection can overshoot the deliverable level by up to the
    // feasibility slack. Frozen floors are nudged strictly below what was
    // proven, so later probes never sit on the solver's tolerance boundary.
    auto backoff = [](double v) {
        return std::max(0.0, v - 2e-9 * (1.0 + std::fabs(v)));
    };

    while (n_frozen < n) {
        double lo = 0.0, hi = supply + 1.0;
        for (int it = 0; it < 60; ++it) {
            double mid = (lo + hi) / 2.0;
            if (feasible(floors_at(mid)))
                lo = mid;
            else
                hi = mid;
        }
        double lam = lo;
        size_t newly = 0;
        auto with_demands = floors_at(lam);
        for (size_t i = 0; i < n; ++i) {
            if (frozen[i] >= 0.0) continue;
            double re = sc.requests[i].re;
            if (lam < re - tol) continue;
            auto cand = with_demands;
            cand[i] = re;
            if (lam >= re || feasible(cand)) {
                with_demands = cand;
                frozen[i] = backoff(re);
                ++n_frozen;
                ++newly;
            }
        }
        if (newly == 0) {
            // nudge each candidate; the ones that cannot rise sit on a saturated cut
            for (size_t i = 0; i < n; ++i) {
                if (frozen[i] >= 0.0) continue;
                auto probe = floors_at(lam);
                double bump = std::max(10.0 * tol, lam * 1e-9 + tol);
                probe[i] = std::min(lam + bump, sc.requests[i].re);
                if (!feasible(probe)) {
                    frozen[i] = backoff(lam);
                    ++n_frozen;
                    ++newly;
                }
            }
        }
        if (newly == 0) {
            for (size_t i = 0; i < n; ++i)
                if (frozen[i] < 0.0) {
                    frozen[i] = backoff(lam);
                    ++n_frozen;
                }
            break;
        }
    }

    auto b = detail::build_network(sc, tl, frozen);
    b.net.max_flow(b.source, b.sink);
    return detail::witness_plan(sc, b, "MAXMIN_OPT");
}

// Exhaustive grid search over per-request totals; returns the Pareto frontier
// of (total allocated, min fulfillment), feasibility checked by max-flow.
inline std::vector<std::pair<double, double>> brute_force(const Scenario& sc,
                                                          const Timeline& tl,
                                                          double grid,
                                                          double max_combos = 1e7) {
    if (grid <= 0.0) throw std::invalid_argument("grid step must be positive");
    size_t n = sc.requests.size();
    std::vector<long long> levels(n);
    double combos = 1.0;
    for (size_t i = 0; i < n; ++i) {
        double cap = std::min(sc.requests[i].re, tl.agg_e);
        levels[i] = (long long)(std::floor(cap / grid + 1e-9)) + 1;
        combos *= double(levels[i]);
        if (combos > max_combos)
            throw std::runtime_error("brute_force: instance too large");
    }

    std::vector<std::pair<double, double>> pts;
    std::vector<long long> idx(n, 0);
    std::vector<double> caps(n, 0.0);
    while (true) {
        double total = 0.0;
        double minf = n ? std::numeric_limits<double>::infinity() : 0.0;
        for (size_t i = 0; i < n; ++i) {
            caps[i] = double(idx[i]) * grid;
            total += caps[i];
            minf = std::min(minf, caps[i] / sc.requests[i].re);
        }
        if (detail::flow_with_caps(sc, tl, caps) >= total - 1e-9)
            pts.emplace_back(total, minf);
        size_t k = 0;
        for (; k < n; ++k) {
            if (++idx[k] < levels[k]) break;
            idx[k] = 0;
        }
        if (k == n) break;
    }
    if (pts.empty()) pts.emplace_back(0.0, 0.0);

    // Pareto filter, maximizing both coordinates
    std::vector<std::pair<double, double>> frontier;
    for (const auto& p : pts) {
        bool dominated = false;
        for (const auto& q : pts) {
            if (q.first >= p.first + 1e-12 && q.second >= p.second - 1e-12) dominated = true;
            if (q.first >= p.first - 1e-12 && q.second >= p.second + 1e-12) dominated = true;
            if (dominated) break;
        }
        if (!dominated) frontier.push_back(p);
    }
    std::sort(frontier.begin(), frontier.end());
    frontier.erase(std::unique(frontier.begin(), frontier.end(),
                               [](const auto& a, const auto& b) {
                                   return std::fabs(a.first - b.first) < 1e-9 &&
                                          std::fabs(a.second - b.second) < 1e-9;
                               }),
                   frontier.end());
    return frontier;
}

// Independent exact optimum for integer instances: enumerate every way to split
// each chunk's integer supply among its active requests (no flow machinery).
// Returns nothing when the combination count exceeds the bound.
inline std::optional<double> integer_enumeration_optimum(const Scenario& sc,
                                                         const Timeline& tl,
                                                         double max_combos = 1e6) {
    size_t n_chunks = tl.chunks.size();
    std::vector<long long> avail(n_chunks);
    double combos = 1.0;
    for (size_t ci = 0; ci < n_chunks; ++ci) {
        double a = tl.chunks[ci].avail;
        long long ia = llround(a);
        if (std::fabs(a - double(ia)) > 1e-9)
            throw std::invalid_argument("integer_enumeration_optimum needs integer supplies");
        avail[ci] = ia;
        size_t k = tl.chunks[ci].active.size();
        if (k >= 1) {
            // C(ia + k - 1, k - 1) splits
            double ways = 1.0;
            for (size_t j = 1; j < k; ++j) ways = ways * double(ia + j) / double(j);
            combos *= ways;
        }
        if (combos > max_combos) return std::nullopt;
    }

    std::vector<double> received(sc.requests.size(), 0.0);
    double best = 0.0;
    auto score = [&]() {
        double t = 0.0;
        for (size_t i = 0; i < sc.requests.size(); ++i)
            t += std::min(received[i], sc.requests[i].re);
        best = std::max(best, t);
    };
    // recurse chunk by chunk, then position by position inside a chunk
    std::function<void(size_t)> go_chunk = [&](size_t ci) {
        if (ci == n_chunks) {
            score();
            return;
        }
        const auto& act = tl.chunks[ci].active;
        if (act.empty()) {
            go_chunk(ci + 1);
            return;
        }
        std::function<void(size_t, long long)> go_pos = [&](size_t pos, long long left) {
            if (pos + 1 == act.size()) {
                received[act[pos]] += double(left);
                go_chunk(ci + 1);
                received[act[pos]] -= double(left);
                return;
            }
            for (long long x = 0; x <= left; ++x) {
                received[act[pos]] += double(x);
                go_pos(pos + 1, left - x);
                received[act[pos]] -= double(x);
            }
        };
        go_pos(0, avail[ci]);
    };
    go_chunk(0);
    return best;
}

}  // namespace cesim
