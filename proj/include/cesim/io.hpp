#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "model.hpp"
#include "workload.hpp"

namespace cesim {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

inline Scenario scenario_from_json(const std::string& text) {
    using nlohmann::json;
    Scenario sc;
    try {
        json j = json::parse(text);
        const auto& w = j.at("window");
        sc.window_start = w.at("start").get<long long>();
        sc.window_end = w.at("end").get<long long>();
        for (const auto& js : j.value("services", json::array())) {
            EnergyService s;
            s.id = js.at("id").get<std::string>();
            s.owner = js.value("owner", std::string{});
            s.start = js.at("start").get<long long>();
            s.end = js.at("end").get<long long>();
            s.dec = js.at("dec").get<double>();
            if (js.contains("meta")) s.meta = js.at("meta").dump();
            sc.services.push_back(std::move(s));
        }
        for (const auto& jr : j.value("requests", json::array())) {
            EnergyRequest r;
            r.id = jr.at("id").get<std::string>();
            r.start = jr.at("start").get<long long>();
            r.end = jr.at("end").get<long long>();
            r.re = jr.at("re").get<double>();
            sc.requests.push_back(std::move(r));
        }
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("scenario parse: ") + e.what());
    }
    validate_and_clip(sc);
    return sc;
}

inline std::string scenario_to_json(const Scenario& sc) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["window"] = {{"start", sc.window_start}, {"end", sc.window_end}};
    j["services"] = ordered_json::array();
    for (const auto& s : sc.services) {
        ordered_json js;
        js["id"] = s.id;
        js["owner"] = s.owner;
        js["start"] = s.start;
        js["end"] = s.end;
        js["dec"] = s.dec;
        if (!s.meta.empty()) js["meta"] = ordered_json::parse(s.meta);
        j["services"].push_back(std::move(js));
    }
    j["requests"] = ordered_json::array();
    for (const auto& r : sc.requests) {
        ordered_json jr;
        jr["id"] = r.id;
        jr["start"] = r.start;
        jr["end"] = r.end;
        jr["re"] = r.re;
        j["requests"].push_back(std::move(jr));
    }
    return j.dump(2) + "\n";
}

inline Scenario load_scenario(const std::string& path) {
    return scenario_from_json(read_file(path));
}

inline void save_scenario(const Scenario& sc, const std::string& path) {
    write_file(path, scenario_to_json(sc));
}

inline GenConfig gen_config_from_json(const std::string& text) {
    using nlohmann::json;
    GenConfig cfg;
    try {
        json j = json::parse(text);
        for (const auto& [key, val] : j.items()) {
            if (key == "seed") cfg.seed = val.get<uint64_t>();
            else if (key == "window") cfg.window = val.get<long long>();
            else if (key == "provider_hourly_rates")
                cfg.provider_hourly_rates = val.get<std::vector<double>>();
            else if (key == "consumer_hourly_rates")
                cfg.consumer_hourly_rates = val.get<std::vector<double>>();
            else if (key == "stay") {
                cfg.stay_min = val.at("min").get<long long>();
                cfg.stay_max = val.at("max").get<long long>();
            } else if (key == "dec") {
                cfg.dec_min = val.at("min").get<double>();
                cfg.dec_max = val.at("max").get<double>();
            } else if (key == "re") {
                cfg.re_min = val.at("min").get<double>();
                cfg.re_max = val.at("max").get<double>();
            } else if (key == "n_services") {
                if (val.is_null()) cfg.n_services.reset();
                else cfg.n_services = val.get<long long>();
            } else if (key == "n_requests") {
                if (val.is_null()) cfg.n_requests.reset();
                else cfg.n_requests = val.get<long long>();
            } else {
                throw std::invalid_argument("config: unknown key \"" + key + "\"");
            }
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config parse: ") + e.what());
    }
    validate_config(cfg);
    return cfg;
}

inline GenConfig load_gen_config(const std::string& path) {
    return gen_config_from_json(read_file(path));
}

}  // namespace cesim
