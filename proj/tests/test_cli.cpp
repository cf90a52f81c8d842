#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "doctest.h"
#include "json.hpp"

#ifndef SCENARIO_CLI_PATH
#error "SCENARIO_CLI_PATH must name the scenario_cli executable"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Sandbox {
    fs::path dir;
    Sandbox() : dir(fs::temp_directory_path() / ("scenario_cli_test_" + std::to_string(::getpid()))) {
        fs::create_directories(dir);
    }
    ~Sandbox() { fs::remove_all(dir); }
    fs::path operator/(const std::string& name) const { return dir / name; }
};

int run(const std::string& args) {
    const std::string cmd = std::string("\"") + SCENARIO_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

void write(const fs::path& p, const std::string& body) { std::ofstream(p, std::ios::binary) << body; }

}  // namespace

TEST_CASE("solve writes JSON with the ramp witness value") {
    Sandbox box;
    const fs::path out = box / "solve.json";
    REQUIRE(run("solve --problem ramp_gaussian --samples 1,10,1000 --seed 3 --out " + out.string()) == 0);
    const json doc = json::parse(slurp(out));
    REQUIRE(doc["solutions"].size() == 3);
    for (const json& s : doc["solutions"]) CHECK(s["value"].get<double>() == -1.0);
}

TEST_CASE("experiment CSV is byte-identical across runs and worker counts") {
    Sandbox box;
    const std::string args = "experiment --problem infnorm_cube --dim 1,5 --samples 10,100 --replicates 6 --seed 42";
    REQUIRE(run(args + " --threads 1 --out " + (box / "a.csv").string()) == 0);
    REQUIRE(run(args + " --threads 4 --out " + (box / "b.csv").string()) == 0);
    REQUIRE(run(args + " --threads 4 --out " + (box / "c.csv").string()) == 0);
    const std::string a = slurp(box / "a.csv");
    CHECK(a.rfind("d,N,mean_error,std_error,replicates,seed\n", 0) == 0);
    CHECK(a == slurp(box / "b.csv"));
    CHECK(a == slurp(box / "c.csv"));
}

TEST_CASE("experiment writes a plot on request") {
    Sandbox box;
    REQUIRE(run("experiment --dim 2 --samples 10,100 --replicates 3 --out " + (box / "e.csv").string() + " --plot " +
                (box / "e.svg").string()) == 0);
    CHECK(slurp(box / "e.svg").find("<svg") != std::string::npos);
}

TEST_CASE("flags override config values and config fills the rest") {
    Sandbox box;
    write(box / "cfg.json", R"({"problem": "infnorm_cube", "dim": [1, 2], "samples": [5, 50], "replicates": 7, "seed": 9})");
    REQUIRE(run("experiment --config " + (box / "cfg.json").string() + " --replicates 3 --out " + (box / "o.csv").string()) == 0);
    std::istringstream csv(slurp(box / "o.csv"));
    std::string line;
    std::getline(csv, line);
    int rows = 0;
    while (std::getline(csv, line)) {
        ++rows;
        CHECK(line.find(",3,") != std::string::npos);
    }
    CHECK(rows == 4);

    write(box / "bad.json", R"({"no_such_flag": 1})");
    CHECK(run("experiment --config " + (box / "bad.json").string()) == 2);
    write(box / "broken.json", "{");
    CHECK(run("experiment --config " + (box / "broken.json").string()) == 2);
    CHECK(run("experiment --config " + (box / "missing.json").string()) == 4);
}

TEST_CASE("exit codes") {
    Sandbox box;
    CHECK(run("plan --family generic --tau 0.5 --log-covering 1 --beta 0.1") == 0);
    CHECK(run("plan --family generic --tau 0 --log-covering 1 --beta 0.1") == 3);
    CHECK(run("plan --family convex --tau-wc 0 --beta 0.1") == 3);
    CHECK(run("plan --family generic --tau 0.5 --beta 1.5") == 2);
    CHECK(run("solve --problem nope") == 2);
    CHECK(run("solve --samples 10,5") == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(run("solve --bogus") == 2);
    CHECK(run("experiment --dim 1 --samples 10 --replicates 2 --out " + (box / "no_dir" / "x.csv").string()) == 4);
}

TEST_CASE("large sample sizes need the full-scale flag") {
    CHECK(run("solve --problem infnorm_cube --samples 200000") == 2);
    CHECK(run("experiment --dim 1 --samples 200000 --replicates 1") == 2);
    CHECK(run("solve --problem infnorm_cube --dim 1 --samples 200000 --full-scale --grid 11") == 0);
}

TEST_CASE("plan, cover, and diagnose produce parseable output") {
    Sandbox box;
    REQUIRE(run("plan --family trig --order 1 --epsilon 0.5 --beta 0.1 --tau 0.3 --out " + (box / "p.json").string()) == 0);
    const json plan = json::parse(slurp(box / "p.json"));
    CHECK(plan.dump().find("n_required") != std::string::npos);

    REQUIRE(run("cover --family smooth --epsilon 1,2 --out " + (box / "c.csv").string()) == 0);
    CHECK(!slurp(box / "c.csv").empty());

    REQUIRE(run("diagnose --problem ramp_gaussian --box-bound 2 --epsilon 1 --mc-samples 2000 --tail-grid 41 --out " +
                (box / "d.json").string()) == 0);
    const std::string diag = slurp(box / "d.json");
    CHECK(json::parse(diag).dump().find("suspected_obstruction") != std::string::npos);
}
