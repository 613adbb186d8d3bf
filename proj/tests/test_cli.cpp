#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

namespace {

using Json = nlohmann::json;

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(ATIYAH4_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

const char* kCollinear = R"({"points": [[0,0,-0.6],[0,0,-0.2],[0,0,0.2],[0,0,0.6]]})";

}  // namespace

TEST_CASE("verify accepts the collinear closed form") {
    const RunResult r = run_cli(std::string("verify --no-meta --input '") + kCollinear + "'");
    CHECK(r.exit_code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["verified"].get<bool>());
    CHECK(std::abs(j["measure"].get<double>() - 1.0) < 1e-12);
}

TEST_CASE("invalid inputs exit with code 3") {
    const RunResult bad_norm =
        run_cli(R"(verify --no-meta --input '{"points": [[1.5,0,0],[0,0,0.1],[0,0.2,0],[0.3,0,0]]}')");
    CHECK(bad_norm.exit_code == 3);

    const RunResult bad_json = run_cli("verify --no-meta --input '{\"points\": oops'");
    CHECK(bad_json.exit_code == 3);

    const RunResult missing = run_cli("verify --no-meta --input /nonexistent/file.json");
    CHECK(missing.exit_code == 3);

    const RunResult unknown_flag = run_cli("verify --frobnicate 1");
    CHECK(unknown_flag.exit_code == 3);

    const RunResult coincident =
        run_cli(R"(verify --no-meta --input '{"points": [[0.1,0,0],[0.1,0,0],[0,0.2,0],[0.3,0,0]]}')");
    CHECK(coincident.exit_code == 3);
}

TEST_CASE("endpoints prints the chart convention") {
    const RunResult r = run_cli(
        R"(endpoints --no-meta --input '{"points": [[0,0,0],[0.3,0,0],[0,0.3,0],[0,0,0.3]]}')");
    CHECK(r.exit_code == 0);
    const Json j = Json::parse(r.out);
    bool found = false;
    for (const auto& e : j["endpoints"]) {
        if (e["i"] == 1 && e["j"] == 2) {
            found = true;
            CHECK(std::abs(e["t"][0].get<double>() - 1.0) < 1e-12);
            CHECK(std::abs(e["t"][1].get<double>()) < 1e-12);
        }
    }
    CHECK(found);
}

TEST_CASE("matrix reports determinant and residual") {
    const RunResult r = run_cli(std::string("matrix --no-meta --input '") + kCollinear + "'");
    CHECK(r.exit_code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["matrix"]["entries"].size() == 4);
    CHECK(std::abs(std::abs(j["determinant"][0].get<double>()) - 1.0) < 1e-12);
    CHECK(j["residual"].get<double>() > 0.9);
}

TEST_CASE("classify and certify run on a tetrahedron") {
    const char* tetra =
        R"({"points": [[0.28,0.28,0.28],[0.28,-0.28,-0.28],[-0.28,0.28,-0.28],[-0.28,-0.28,0.28]]})";
    const RunResult c = run_cli(std::string("classify --no-meta --input '") + tetra + "'");
    CHECK(c.exit_code == 0);
    const Json cj = Json::parse(c.out);
    CHECK(cj["incidence"]["all_ok"].get<bool>());
    CHECK(cj["signature"]["applicable"].get<bool>());

    const RunResult f = run_cli(std::string("certify --no-meta --input '") + tetra + "'");
    CHECK(f.exit_code == 0);
    const Json fj = Json::parse(f.out);
    CHECK(fj["certificate"]["covered_case"].get<bool>());
    CHECK_FALSE(fj["certificate"]["singular"].get<bool>());

    const RunResult planted = run_cli(std::string("certify --no-meta --input '") + tetra +
                                      "' --relation '[[1,0],[0,0],[0,0],[0,0]]'");
    CHECK(planted.exit_code == 0);
    const Json pj = Json::parse(planted.out);
    CHECK(pj["certificate"]["relation_planted"].get<bool>());
    CHECK(pj["certificate"]["scenario"] == "triple_root");
}

TEST_CASE("batch and sample are reproducible byte for byte") {
    const std::string args = "batch --no-meta --seed 5 --count 40 --case any --format jsonl";
    const RunResult a = run_cli(args);
    const RunResult b = run_cli(args);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);

    const RunResult threaded = run_cli(args + " --threads 4");
    CHECK(threaded.out == a.out);

    const RunResult s1 = run_cli("sample --no-meta --seed 12 --count 5 --case coplanar-hull");
    const RunResult s2 = run_cli("sample --no-meta --seed 12 --count 5 --case coplanar-hull");
    CHECK(s1.exit_code == 0);
    CHECK(s1.out == s2.out);
}

TEST_CASE("batch csv emits the histogram") {
    const RunResult r = run_cli("batch --no-meta --seed 5 --count 25 --format csv --no-certificates");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("bin_lo,bin_hi,count", 0) == 0);
}

TEST_CASE("minimize is reproducible and trace-monotone") {
    const std::string args = "minimize --no-meta --seed 3 --restarts 2 --iterations 40";
    const RunResult a = run_cli(args);
    const RunResult b = run_cli(args);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    const Json j = Json::parse(a.out);
    CHECK(j["search"]["best_measure"].get<double>() > 1e-9);
    const auto& trace = j["search"]["trace"];
    for (std::size_t k = 1; k < trace.size(); ++k)
        CHECK(trace[k].get<double>() <= trace[k - 1].get<double>() + 1e-15);
}

TEST_CASE("oracle cross-check") {
    const RunResult random_pairs = run_cli("oracle --no-meta --seed 2 --count 500");
    CHECK(random_pairs.exit_code == 0);
    const Json j = Json::parse(random_pairs.out);
    CHECK(j["agree"].get<bool>());
    CHECK(j["max_deviation"].get<double>() < 1e-9);

    const RunResult on_config = run_cli(std::string("oracle --no-meta --input '") + kCollinear + "'");
    CHECK(on_config.exit_code == 0);

    // An absurdly tight tolerance forces the consistency exit code.
    const RunResult strict = run_cli("oracle --no-meta --seed 2 --count 50 --tol-oracle 1e-18");
    CHECK(strict.exit_code == 4);
}

TEST_CASE("output file and stdin input") {
    const std::string path = "/tmp/atiyah4_cli_out.json";
    std::remove(path.c_str());
    const RunResult r =
        run_cli(std::string("verify --no-meta --output ") + path + " --input '" + kCollinear + "'");
    CHECK(r.exit_code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    REQUIRE(in.good());
    const Json j = Json::parse(in);
    CHECK(j["verified"].get<bool>());
    std::remove(path.c_str());

    const std::string cmd = std::string("echo '") + kCollinear + "' | " + ATIYAH4_CLI_PATH +
                            " verify --no-meta --input - 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    const int status = pclose(pipe);
    CHECK(WEXITSTATUS(status) == 0);
    CHECK(Json::parse(out)["verified"].get<bool>());
}

TEST_CASE("tolerances are echoed in the meta block") {
    const RunResult r = run_cli(std::string("verify --no-meta --tol-measure 1e-9 --input '") +
                                kCollinear + "'");
    CHECK(r.exit_code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["meta"]["tolerances"]["singular_measure"].get<double>() == 1e-9);
    CHECK_FALSE(j["meta"].contains("timestamp"));

    const RunResult with_meta = run_cli(std::string("verify --input '") + kCollinear + "'");
    CHECK(Json::parse(with_meta.out)["meta"].contains("timestamp"));
}
