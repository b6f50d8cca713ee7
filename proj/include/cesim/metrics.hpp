#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "model.hpp"
#include "plan.hpp"
#include "slicing.hpp"

namespace cesim {

struct MetricsReport {
    std::string strategy;
    int n_requests = 0;
    int n_services = 0;
    double agg_e = 0.0;
    double total_alloc = 0.0;
    std::map<std::string, double> satisfaction;   // Sf_i in [0, 1]
    std::map<std::string, double> fulfillment;    // Al_i / RE_i in [0, 1]
    double mean_sf = 0.0;
    double std_sf = 0.0;
    double entropy_fp = 0.0;
    double sigma_unfairness = 0.0;                // population stddev of fulfillment %
    double wastage_abs = 0.0;
    double wastage_pct = 0.0;                     // fraction of agg_e
    double utilization = 0.0;
};

// Sf_i = (Al_i / RE_i) * (total allocated / total supply capacity), i.e. the
// fulfillment ratio weighted by how much of the offered capacity the plan
// actually moves. Full satisfaction is clamped to 1.
inline std::map<std::string, double> satisfaction_scores(const Scenario& sc,
                                                         const AllocationPlan& plan) {
    double tot = 0.0;
    for (const auto& r : sc.requests) {
        auto it = plan.per_request.find(r.id);
        tot += it == plan.per_request.end() ? 0.0 : it->second;
    }
    double denom = total_dec(sc);
    std::map<std::string, double> out;
    for (const auto& r : sc.requests) {
        auto it = plan.per_request.find(r.id);
        double al = it == plan.per_request.end() ? 0.0 : it->second;
        double sf = denom > 0.0 ? (al / r.re) * (tot / denom) : 0.0;
        if (al > r.re) sf = 1.0;
        out[r.id] = sf;
    }
    return out;
}

// Fp = -sum sf * log2(sf), zero terms contribute zero.
inline double entropy_fairness(const std::vector<double>& sfs) {
    double fp = 0.0;
    for (double x : sfs)
        if (x > 0.0) fp -= x * std::log2(x);
    return fp;
}

// Population standard deviation of fulfillment percentages.
inline double sigma_unfairness(const std::vector<double>& fulfillment_pcts) {
    if (fulfillment_pcts.empty())
        throw std::invalid_argument("sigma_unfairness of empty vector");
    double mu = 0.0;
    for (double x : fulfillment_pcts) mu += x;
    mu /= double(fulfillment_pcts.size());
    double acc = 0.0;
    for (double x : fulfillment_pcts) acc += (x - mu) * (x - mu);
    return std::sqrt(acc / double(fulfillment_pcts.size()));
}

inline std::pair<double, double> wastage(double agg_e, double total_alloc) {
    double abs = agg_e - total_alloc;
    return {abs, agg_e > 0.0 ? abs / agg_e : 0.0};
}

inline double utilization(double agg_e, double total_alloc) {
    return agg_e > 0.0 ? total_alloc / agg_e : 0.0;
}

inline MetricsReport compute_report(const Scenario& sc, const Timeline& tl,
                                    const AllocationPlan& plan) {
    MetricsReport rep;
    rep.strategy = plan.strategy;
    rep.n_requests = int(sc.requests.size());
    rep.n_services = int(sc.services.size());
    rep.agg_e = tl.agg_e;

    double tot = 0.0;
    for (const auto& r : sc.requests) {
        auto it = plan.per_request.find(r.id);
        tot += it == plan.per_request.end() ? 0.0 : it->second;
    }
    rep.total_alloc = tot;

    double denom = total_dec(sc);
    std::vector<double> sfs, fuls;
    for (const auto& r : sc.requests) {
        auto it = plan.per_request.find(r.id);
        double al = it == plan.per_request.end() ? 0.0 : it->second;
        double f = al / r.re;
        fuls.push_back(100.0 * f);
        double sf = denom > 0.0 ? f * (tot / denom) : 0.0;
        if (al > r.re) sf = 1.0;
        sfs.push_back(sf);
        rep.satisfaction[r.id] = sf;
        rep.fulfillment[r.id] = f;
    }

    size_t n = sfs.size();
    double nan = std::numeric_limits<double>::quiet_NaN();
    if (n > 0) {
        double mean = 0.0;
        for (double x : sfs) mean += x;
        mean /= double(n);
        double var = 0.0;
        for (double x : sfs) var += (x - mean) * (x - mean);
        rep.mean_sf = mean;
        rep.std_sf = std::sqrt(var / double(n));
        rep.sigma_unfairness = sigma_unfairness(fuls);
    } else {
        rep.mean_sf = nan;
        rep.std_sf = nan;
        rep.sigma_unfairness = nan;
    }
    rep.entropy_fp = entropy_fairness(sfs);
    auto [wabs, wpct] = wastage(tl.agg_e, tot);
    rep.wastage_abs = wabs;
    rep.wastage_pct = wpct;
    rep.utilization = utilization(tl.agg_e, tot);
    return rep;
}

// 9 significant digits, the precision contract for every CSV numeric field.
inline std::string fmt_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline constexpr const char* kMetricsCsvHeader =
    "strategy,n_requests,n_services,agg_e,total_alloc,mean_sf,std_sf,"
    "entropy_fp,sigma_unfairness,wastage_pct,utilization";

inline std::string metrics_csv_row(const MetricsReport& r) {
    std::string row = r.strategy;
    row += "," + std::to_string(r.n_requests);
    row += "," + std::to_string(r.n_services);
    for (double v : {r.agg_e, r.total_alloc, r.mean_sf, r.std_sf, r.entropy_fp,
                     r.sigma_unfairness, r.wastage_pct, r.utilization})
        row += "," + fmt_g9(v);
    return row;
}

}  // namespace cesim
