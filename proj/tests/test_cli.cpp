#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "wclt/report.hpp"

using namespace wclt;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(WCLT_BIN) + " " + args + " > cli_stdout.txt 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

}  // namespace

TEST_CASE("enumerate prints cycle notation") {
    REQUIRE(run_cli("enumerate --ncp 3") == 0);
    const std::string out = slurp("cli_stdout.txt");
    // 5 partitions, one per line
    CHECK(std::count(out.begin(), out.end(), '\n') == 5);
    CHECK(out.find("(1 2 3)") != std::string::npos);
}

TEST_CASE("predict-cov with an empty beta chain returns zero") {
    write_file("alpha.json",
               R"({"n":8,"links":[{"z":{"re":0.0,"im":1.0},"matrix":{"kind":"identity"}}]})");
    write_file("beta_empty.json", R"({"n":8,"links":[]})");
    REQUIRE(run_cli("predict-cov --alpha alpha.json --beta beta_empty.json --kappa4 -1 "
                    "--out cov0.json") == 0);
    Json j;
    std::ifstream in("cov0.json");
    in >> j;
    CHECK(j["total"]["re"].get<double>() == 0.0);
    CHECK(j["total"]["im"].get<double>() == 0.0);
}

TEST_CASE("malformed config exits with code 1") {
    write_file("broken.json", "{ not json");
    CHECK(run_cli("predict-mean --chain broken.json --out x.json") == 1);
    write_file("realz.json",
               R"({"n":8,"links":[{"z":{"re":0.5,"im":0.0},"matrix":{"kind":"identity"}}]})");
    CHECK(run_cli("predict-mean --chain realz.json --out x.json") == 1);
}

TEST_CASE("byte-identical outputs for identical invocations") {
    write_file("a1.json",
               R"({"n":8,"links":[{"z":{"re":0.2,"im":0.9},"matrix":{"kind":"traceless_diag_pm1","seed":3}},{"z":{"re":-0.4,"im":-1.1},"matrix":{"kind":"traceless_diag_pm1","seed":3}}]})");
    REQUIRE(run_cli("predict-mean --chain a1.json --N 512 --kappa4 -1 --out r1.json") == 0);
    const std::string first = slurp("r1.json");
    REQUIRE(run_cli("predict-mean --chain a1.json --N 512 --kappa4 -1 --out r1.json") == 0);
    CHECK(first == slurp("r1.json"));
    CHECK(!first.empty());
    // the value itself is nonzero for this chain
    Json j;
    std::ifstream in("r1.json");
    in >> j;
    CHECK(std::abs(complex_from_json(j["leading"])) > 1e-6);
}

TEST_CASE("mc-verify gates: correct prediction passes, perturbed prediction exits 2") {
    // small, fast configuration
    write_file("mc.json", R"({
      "ensemble": {"n": 96, "law": "gue", "seed": 11, "samples": 240},
      "modes": [
        {"name": "g1", "chain": {"n": 96, "links": [
           {"z": {"re": 0.0, "im": 1.0}, "matrix": {"kind": "identity"}}]}}
      ]})");
    // prediction for the mean of <G(i)>: m(i) with a generous gate
    const cplx m = stieltjes(cplx(0.0, 1.0));
    {
        Json p;
        p["gate_sigma"] = 4.0;
        p["comparisons"] = Json::array();
        Json c;
        c["type"] = "mean";
        c["mode"] = "g1";
        c["predicted"] = json_complex(m);
        p["comparisons"].push_back(c);
        std::ofstream out("pred_ok.json");
        out << p.dump();
    }
    CHECK(run_cli("mc-verify --config mc.json --predictions pred_ok.json --out v1.json") == 0);
    {
        Json p;
        p["gate_sigma"] = 3.0;
        p["comparisons"] = Json::array();
        Json c;
        c["type"] = "mean";
        c["mode"] = "g1";
        c["predicted"] = json_complex(m + cplx(0.05, 0.0));  // ~10+ SE off at M=240
        p["comparisons"].push_back(c);
        std::ofstream out("pred_bad.json");
        out << p.dump();
    }
    CHECK(run_cli("mc-verify --config mc.json --predictions pred_bad.json --out v2.json") == 2);
}

TEST_CASE("selftest runs clean") { CHECK(run_cli("selftest") == 0); }
