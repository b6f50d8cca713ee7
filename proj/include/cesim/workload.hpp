#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "model.hpp"
#include "random.hpp"

namespace cesim {

// Synthetic microcell workload: Poisson arrivals per hourly rate bucket, or a
// fixed entity count; uniform stay lengths and uniform energy magnitudes.
struct GenConfig {
    uint64_t seed = 42;
    long long window = 48;                              // minutes, [0, window)
    std::vector<double> provider_hourly_rates{2.0};
    std::vector<double> consumer_hourly_rates{8.0};
    long long stay_min = 14;
    long long stay_max = 32;
    double dec_min = 20.0;
    double dec_max = 60.0;
    double re_min = 80.0;
    double re_max = 400.0;
    std::optional<long long> n_services = 3;            // overrides provider rates
    std::optional<long long> n_requests;                // overrides consumer rates
};

inline void validate_config(const GenConfig& cfg) {
    if (cfg.window < 1) throw std::invalid_argument("config: window must be >= 1 minute");
    if (cfg.stay_min < 1 || cfg.stay_min > cfg.stay_max)
        throw std::invalid_argument("config: bad stay range");
    if (!(cfg.dec_min > 0.0) || cfg.dec_min > cfg.dec_max)
        throw std::invalid_argument("config: bad dec range");
    if (!(cfg.re_min > 0.0) || cfg.re_min > cfg.re_max)
        throw std::invalid_argument("config: bad re range");
    if (!cfg.n_services && cfg.provider_hourly_rates.empty())
        throw std::invalid_argument("config: provider_hourly_rates empty with no n_services");
    if (!cfg.n_requests && cfg.consumer_hourly_rates.empty())
        throw std::invalid_argument("config: consumer_hourly_rates empty with no n_requests");
    for (double r : cfg.provider_hourly_rates)
        if (r < 0.0) throw std::invalid_argument("config: negative provider rate");
    for (double r : cfg.consumer_hourly_rates)
        if (r < 0.0) throw std::invalid_argument("config: negative consumer rate");
    if ((cfg.n_services && *cfg.n_services < 0) || (cfg.n_requests && *cfg.n_requests < 0))
        throw std::invalid_argument("config: negative entity count");
}

namespace detail {

// One arrival minute per entity. With a count override, every arrival is
// uniform over the window; otherwise each (possibly short) hour bucket draws
// a Poisson count at its rate, scaled to the bucket length.
inline std::vector<long long> draw_arrivals(Xoshiro256StarStar& rng, long long w0,
                                            long long w1,
                                            const std::vector<double>& rates,
                                            std::optional<long long> count_override) {
    std::vector<long long> arr;
    if (count_override) {
        for (long long k = 0; k < *count_override; ++k)
            arr.push_back(rng.uniform_int(w0, w1 - 1));
        return arr;
    }
    size_t h = 0;
    for (long long t = w0; t < w1;) {
        long long seg = std::min<long long>(60, w1 - t);
        double lam = rates[h % rates.size()] * double(seg) / 60.0;
        long long count = rng.poisson(lam);
        for (long long k = 0; k < count; ++k)
            arr.push_back(t + rng.uniform_int(0, seg - 1));
        t += seg;
        ++h;
    }
    return arr;
}

}  // namespace detail

inline Scenario generate_scenario(const GenConfig& cfg, uint64_t seed) {
    validate_config(cfg);
    Xoshiro256StarStar rng(seed);
    long long w0 = 0, w1 = cfg.window;
    Scenario sc;
    sc.window_start = w0;
    sc.window_end = w1;

    struct Draft {
        long long start, end;
        double mag;
    };
    std::vector<Draft> svc;
    for (long long a : detail::draw_arrivals(rng, w0, w1, cfg.provider_hourly_rates,
                                             cfg.n_services)) {
        long long stay = rng.uniform_int(cfg.stay_min, cfg.stay_max);
        double dec = rng.uniform_real(cfg.dec_min, cfg.dec_max);
        svc.push_back({a, std::min(a + stay, w1), dec});
    }
    std::stable_sort(svc.begin(), svc.end(),
                     [](const Draft& a, const Draft& b) { return a.start < b.start; });
    for (size_t i = 0; i < svc.size(); ++i)
        sc.services.push_back({"S" + std::to_string(i + 1), "", svc[i].start, svc[i].end,
                               svc[i].mag, ""});

    std::vector<Draft> req;
    for (long long a : detail::draw_arrivals(rng, w0, w1, cfg.consumer_hourly_rates,
                                             cfg.n_requests)) {
        long long stay = rng.uniform_int(cfg.stay_min, cfg.stay_max);
        double re = rng.uniform_real(cfg.re_min, cfg.re_max);
        req.push_back({a, std::min(a + stay, w1), re});
    }
    std::stable_sort(req.begin(), req.end(),
                     [](const Draft& a, const Draft& b) { return a.start < b.start; });
    for (size_t i = 0; i < req.size(); ++i)
        sc.requests.push_back({"R" + std::to_string(i + 1), req[i].start, req[i].end,
                               req[i].mag, int(i + 1)});

    validate_and_clip(sc);
    return sc;
}

}  // namespace cesim
