#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>

#include "pointlim/json_io.hpp"

using Json = nlohmann::ordered_json;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(POINTLIM_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

std::string write_config(const std::string& name, const std::string& text) {
    std::string path = std::string("/tmp/pointlim_test_") + name + ".json";
    std::ofstream f(path);
    f << text;
    return path;
}

}  // namespace

TEST_CASE("classify fixtures end to end") {
    RunResult r = run("classify --fixture \"pseudo_hamiltonian alpha=1\"");
    CHECK(r.exit_code == 0);
    Json j = Json::parse(r.out);
    CHECK(j["case"] == "B3");
    CHECK(j["kind"] == "separated");
    CHECK(j["schema_version"] == 1);

    RunResult r2 = run("classify --fixture a2_fixture");
    Json j2 = Json::parse(r2.out);
    CHECK(j2["case"] == "A2");
    CHECK(std::abs(j2["phase"].get<double>() - M_PI) < 1e-9);

    // emitted JSON re-parses into an equal in-memory structure
    pointlim::LimitInteraction li = pointlim::interaction_from_json(j2);
    Json j3 = pointlim::to_json(li);
    CHECK(j3["case"] == j2["case"]);
    CHECK(j3["matrix"] == j2["matrix"]);
    CHECK(j3["phase"] == j2["phase"]);
}

TEST_CASE("classify a custom triple from a config file") {
    std::string path = write_config("triple", R"({
      "triple": {
        "f": {"const": "1/2"},
        "g": {"poly": [0, 1]},
        "q": {"const": 1}
      }
    })");
    RunResult r = run("classify --input " + path);
    CHECK(r.exit_code == 0);
    Json j = Json::parse(r.out);
    CHECK(j["case"] == "B3");
}

TEST_CASE("malformed input exits with code 1") {
    std::string path = write_config("bad", R"({"triple": {"f": {"pieces": [{"lo": 0}]}, "g": 1}})");
    CHECK(run("classify --input " + path).exit_code == 1);
    CHECK(run("classify --input /nonexistent.json").exit_code == 1);
    std::string badnum = write_config("badnum", R"({"triple": {"f": {"const": "1/0"}, "g": 1}})");
    CHECK(run("classify --input " + badnum).exit_code == 1);
}

TEST_CASE("strict mode surfaces unstable classifications with exit 2") {
    std::string path = write_config("unstable", R"({
      "triple": {"f": {"const": 1}, "g": {"poly": ["7.500000044", "7.500000044"]}, "q": {"const": 0}}
    })");
    RunResult permissive = run("classify --input " + path);
    CHECK(permissive.exit_code == 0);
    CHECK(Json::parse(permissive.out)["unstable"] == true);
    CHECK(run("classify --input " + path + " --strict").exit_code == 2);
}

TEST_CASE("scatter emits the sentinel row and per-row status") {
    RunResult r = run("scatter --fixture free_line --k 1,2 --eps \"0.5:0.125:3\"");
    CHECK(r.exit_code == 0);
    std::istringstream ss(r.out);
    std::string line;
    std::getline(ss, line);
    CHECK(line ==
          "eps,k,re_t,im_t,re_r_left,im_r_left,re_r_right,im_r_right,unitarity_defect,status");
    int rows = 0, sentinels = 0;
    while (std::getline(ss, line)) {
        ++rows;
        if (line.rfind("0,", 0) == 0) ++sentinels;
        CHECK(line.find("ok") != std::string::npos);
        // free line transmits perfectly: third column is Re t
        size_t c1 = line.find(','), c2 = line.find(',', c1 + 1);
        double re_t = std::stod(line.substr(c2 + 1));
        CHECK(std::abs(re_t - 1.0) < 1e-9);
    }
    CHECK(rows == 8);       // (1 sentinel + 3 eps) x 2 wavenumbers
    CHECK(sentinels == 2);
    CHECK(run("scatter --fixture free_line --k 1 --eps \"\"").exit_code == 1);
}

TEST_CASE("converge passes on a fixture and fails on a wrong target") {
    RunResult ok = run("converge --fixture a3_fixture --k 1 --eps \"0.125:0.015625:4\"");
    CHECK(ok.exit_code == 0);
    Json j = Json::parse(ok.out);
    CHECK(j["pass"] == true);
    CHECK(j["slope"].get<double>() >= 0.45);

    RunResult bad = run(
        "converge --fixture a3_fixture --k 1 --eps \"0.125:0.015625:4\" "
        "--override-limit "
        "'{\"case\":\"A3\",\"kind\":\"connected\",\"phase\":0,\"matrix\":[[1,0],[5,1]]}'");
    CHECK(bad.exit_code == 3);
    CHECK(Json::parse(bad.out)["pass"] == false);

    // resolvent metric without zeta is an input error
    std::string path = write_config("noz", R"({
      "triple": {"fixture": "a2_fixture"},
      "h": {"pieces": [{"lo": 1, "hi": 2, "coeffs": [[1, 0]]}]}
    })");
    CHECK(run("converge --input " + path + " --metric resolvent --eps \"0.25:0.125:2\"").exit_code ==
          1);
}

TEST_CASE("resonance dumps invariants with the det A cross-check") {
    RunResult r = run("resonance --fixture a1_fixture");
    CHECK(r.exit_code == 0);
    Json j = Json::parse(r.out);
    CHECK(j["half_bound_states"]["kind"] == "Double");
    CHECK(j["half_bound_states"]["states"].size() == 2);
    CHECK(j["half_bound_states"]["residual"].get<double>() < 1e-8);
    CHECK(j["det_A_minus_lambda"].get<double>() < 1e-10);
    CHECK(j["invariants"]["zero_mean"] == true);

    // q omitted defaults to zero with a note
    std::string path = write_config("noq", R"({
      "triple": {"f": {"const": "1/2"}, "g": {"poly": [0, 1]}}
    })");
    RunResult r2 = run("resonance --input " + path);
    CHECK(r2.exit_code == 0);
    Json j2 = Json::parse(r2.out);
    CHECK(j2["note"].get<std::string>().find("q omitted") != std::string::npos);
    CHECK(j2["half_bound_states"]["kind"] == "None");
}

TEST_CASE("configured background potential is rejected") {
    std::string path = write_config("withv", R"({
      "triple": {"fixture": "a3_fixture"}, "V": 0.5
    })");
    CHECK(run("scatter --input " + path + " --k 1 --eps \"0.25:0.125:2\"").exit_code == 1);
}

TEST_CASE("wide supports are rescaled and the factor is reported") {
    std::string path = write_config("wide", R"({
      "triple": {
        "f": {"pieces": [{"lo": -2, "hi": 2, "coeffs": ["1/2"]}]},
        "g": {"pieces": [{"lo": -2, "hi": 2, "coeffs": [[0, 0], [1, 0]]}]},
        "q": {"const": 0}
      }
    })");
    RunResult r = run("classify --input " + path);
    CHECK(r.exit_code == 0);
    Json j = Json::parse(r.out);
    CHECK(j["support_rescale_factor"].get<double>() == 2.0);
    CHECK(j["case"] == "B3");
}

TEST_CASE("scatter sentinel rows carry the delta-limit coefficients per k") {
    RunResult r = run("scatter --fixture a3_fixture --k 0.5,1,2 --eps \"0.25:0.125:2\" --format json");
    CHECK(r.exit_code == 0);
    Json j = Json::parse(r.out);
    int sentinels = 0;
    for (const auto& row : j["rows"]) {
        if (row["eps"].get<double>() != 0.0) continue;
        ++sentinels;
        double k = row["k"].get<double>();
        std::complex<double> ik{0.0, k};
        std::complex<double> expect = 2.0 * ik / (2.0 * ik - 2.0);
        CHECK(std::abs(row["t"][0].get<double>() - expect.real()) < 1e-12);
        CHECK(std::abs(row["t"][1].get<double>() - expect.imag()) < 1e-12);
    }
    CHECK(sentinels == 3);
}
