#include <sys/wait.h>

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "cesim/cesim.hpp"

using namespace cesim;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

const std::string kFixture = std::string(CESIM_DATA_DIR) + "/microcell_fixture.json";

const std::string& tmp_dir() {
    static std::string dir = [] {
        char tmpl[] = "/tmp/cesim_cli_XXXXXX";
        if (!mkdtemp(tmpl)) throw std::runtime_error("mkdtemp failed");
        return std::string(tmpl);
    }();
    return dir;
}

std::string tmp_path(const std::string& name) { return tmp_dir() + "/" + name; }

struct CmdResult {
    int code = -1;
    std::string out;
    std::string err;
};

CmdResult run_cli(const std::string& args) {
    static int serial = 0;
    std::string so = tmp_path("stdout_" + std::to_string(serial));
    std::string se = tmp_path("stderr_" + std::to_string(serial));
    ++serial;
    std::string cmd = std::string("\"") + CESIM_CLI_PATH + "\" " + args + " > " + so +
                      " 2> " + se;
    int rc = std::system(cmd.c_str());
    CmdResult r;
    r.code = (rc >= 0 && WIFEXITED(rc)) ? WEXITSTATUS(rc) : -1;
    r.out = read_file(so);
    r.err = read_file(se);
    return r;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

TEST_CASE("run prints a table row per strategy and writes the metrics CSV") {
    std::string csv_path = tmp_path("metrics.csv");
    auto r = run_cli("run --scenario \"" + kFixture + "\" --all --out " + csv_path);
    REQUIRE(r.code == 0);
    for (const char* name : {"FCFS", "P_FCFS", "RR", "MAXMIN", "FACES", "NFACES"})
        REQUIRE_THAT(r.out, ContainsSubstring(name));
    REQUIRE_THAT(r.out, ContainsSubstring("total_mAh"));

    auto lines = split_lines(read_file(csv_path));
    REQUIRE(lines.size() == 7);
    REQUIRE(lines[0] == kMetricsCsvHeader);
    bool found_faces = false;
    for (const auto& line : lines) {
        auto f = split_fields(line);
        REQUIRE(f.size() == 11);
        if (f[0] == "FACES") {
            found_faces = true;
            REQUIRE_THAT(std::stod(f[9]), WithinAbs(0.1, 1e-9));   // wastage_pct
            REQUIRE_THAT(std::stod(f[10]), WithinAbs(0.9, 1e-9));  // utilization
        }
    }
    REQUIRE(found_faces);
}

TEST_CASE("run writes an allocation breakdown JSON on request") {
    std::string plan_path = tmp_path("plans.json");
    auto r = run_cli("run --scenario \"" + kFixture + "\" --strategy faces --plan-out " +
                     plan_path);
    REQUIRE(r.code == 0);
    auto js = nlohmann::json::parse(read_file(plan_path));
    REQUIRE(js.contains("FACES"));
    REQUIRE(js["FACES"].contains("per_request"));
    REQUIRE(js["FACES"]["per_request"].contains("R1"));
    double sum = 0.0;
    for (const auto& cell : js["FACES"]["per_cell"]) sum += cell.at("mah").get<double>();
    REQUIRE_THAT(sum, WithinAbs(js["FACES"]["per_request"]["R1"].get<double>() +
                                    js["FACES"]["per_request"]["R2"].get<double>() +
                                    js["FACES"]["per_request"]["R3"].get<double>() +
                                    js["FACES"]["per_request"]["R4"].get<double>(),
                                1e-9));
}

TEST_CASE("run rejects bad invocations with the usage exit code") {
    REQUIRE(run_cli("run --scenario \"" + kFixture + "\" --strategy bogus").code == 2);
    REQUIRE(run_cli("run --scenario \"" + kFixture + "\" --strategy faces --all").code == 2);
    REQUIRE(run_cli("run --scenario \"" + kFixture + "\"").code == 2);
    REQUIRE(run_cli("").code == 2);
}

TEST_CASE("run distinguishes I/O failures from usage failures") {
    REQUIRE(run_cli("run --scenario /nonexistent/nope.json --all").code == 1);
    std::string broken = tmp_path("broken.json");
    write_file(broken, "{not json");
    REQUIRE(run_cli("run --scenario " + broken + " --all").code == 1);
}

TEST_CASE("help exits cleanly") {
    REQUIRE(run_cli("--help").code == 0);
    auto r = run_cli("run --help");
    REQUIRE(r.code == 0);
    REQUIRE_THAT(r.out, ContainsSubstring("--scenario"));
}

TEST_CASE("generate reproduces the frozen reference workload through the CLI") {
    std::string g1 = tmp_path("g1.json"), g2 = tmp_path("g2.json"), g3 = tmp_path("g3.json");
    std::string seed = std::to_string(mix_seed(42, 0));
    auto base = " --n-requests 6 --seed ";
    REQUIRE(run_cli("generate" + std::string(base) + seed + " --out " + g1).code == 0);
    REQUIRE(run_cli("generate" + std::string(base) + seed + " --out " + g2).code == 0);
    REQUIRE(run_cli("generate" + std::string(base) + "99 --out " + g3).code == 0);

    REQUIRE(read_file(g1) == read_file(g2));
    REQUIRE(read_file(g1) != read_file(g3));

    Scenario sc = load_scenario(g1);
    REQUIRE(sc.services.size() == 3);
    REQUIRE(sc.requests.size() == 6);
    REQUIRE(sc.services[0].start == 21);
    REQUIRE(sc.services[0].end == 37);
    REQUIRE_THAT(sc.services[0].dec, WithinAbs(47.09833403764021, 1e-12));
    REQUIRE_THAT(sc.requests[5].re, WithinAbs(263.4253401436996, 1e-12));
}

TEST_CASE("generate writes the scenario to stdout by default") {
    auto r = run_cli("generate --n-requests 2 --seed 5");
    REQUIRE(r.code == 0);
    Scenario sc = scenario_from_json(r.out);
    REQUIRE(sc.requests.size() == 2);
}

TEST_CASE("sweep output is byte-identical at any job count") {
    std::string a = tmp_path("a.csv"), b = tmp_path("b.csv"), c = tmp_path("c.csv");
    std::string common = "sweep --n-requests 1,2 --trials 2 --seed 11 --out ";
    REQUIRE(run_cli(common + a + " --jobs 1").code == 0);
    REQUIRE(run_cli(common + b + " --jobs 3").code == 0);
    REQUIRE(run_cli(common + c + " --jobs 3").code == 0);
    std::string text = read_file(a);
    REQUIRE(text == read_file(b));
    REQUIRE(text == read_file(c));

    auto lines = split_lines(text);
    REQUIRE(lines.size() == 1 + 5 * 2 * 2);
    REQUIRE(lines[0] == kSweepCsvHeader);
}

TEST_CASE("sweep strategy selection controls the row set") {
    auto all = run_cli("sweep --n-requests 2 --trials 1 --seed 4 --all");
    REQUIRE(all.code == 0);
    REQUIRE(split_lines(all.out).size() == 1 + 6);
    REQUIRE_THAT(all.out, ContainsSubstring("RR,2,0,"));

    auto one = run_cli("sweep --n-requests 2 --trials 1 --seed 4 --strategy rr");
    REQUIRE(one.code == 0);
    auto lines = split_lines(one.out);
    REQUIRE(lines.size() == 2);
    REQUIRE(lines[1].rfind("RR,2,0,", 0) == 0);
}

TEST_CASE("sweep rejects bad invocations with the usage exit code") {
    REQUIRE(run_cli("sweep --trials 0").code == 2);
    REQUIRE(run_cli("sweep --n-requests 5,x --trials 1").code == 2);
    REQUIRE(run_cli("sweep --strategy faces --all --trials 1").code == 2);
}

TEST_CASE("oracle reports the exact bounds for the reference microcell") {
    auto r = run_cli("oracle --scenario \"" + kFixture + "\"");
    REQUIRE(r.code == 0);
    REQUIRE_THAT(r.out, ContainsSubstring("max-flow optimum"));
    REQUIRE_THAT(r.out, ContainsSubstring("780.000000"));
    REQUIRE_THAT(r.out, ContainsSubstring("max-min floors"));
    REQUIRE_THAT(r.out, ContainsSubstring("ok"));
    REQUIRE_THAT(r.out, !ContainsSubstring("EXCEEDS"));
}

TEST_CASE("verify fuzzes cleanly and the corrupted-plan self-test fires") {
    auto r = run_cli("verify --trials 12 --seed 3");
    REQUIRE(r.code == 0);
    REQUIRE_THAT(r.out, ContainsSubstring("no violations"));

    auto st = run_cli("verify --trials 1 --seed 5 --inject-overalloc");
    REQUIRE(st.code == 0);
    REQUIRE_THAT(st.out, ContainsSubstring("self-test ok"));

    REQUIRE(run_cli("verify --trials 0").code == 2);
}
