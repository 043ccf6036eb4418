#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "toposqt/fixtures.hpp"
#include "toposqt/io.hpp"

using namespace toposqt;

namespace {

const std::string kCli = TOPOSQT_CLI_PATH;
const std::filesystem::path kDir = "cli_scratch";

int run(const std::string& args) {
    const int status = std::system((kCli + " " + args).c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

void spit(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::string p(const std::string& name) { return (kDir / name).string(); }

struct ScratchSetup {
    ScratchSetup() {
        std::filesystem::create_directories(kDir);
        spit(p("op3.json"), matrix_to_json(fixtures::diag({1, 2, 3})).dump());
        spit(p("op2.json"), matrix_to_json(fixtures::diag({3, 1})).dump());
        spit(p("had.json"), matrix_to_json(fixtures::hadamard()).dump());
        spit(p("prop.json"), matrix_to_json(fixtures::diag({1, 0, 0})).dump());
        spit(p("state.json"),
             state_to_json(StateVector(fixtures::basis_state(3, 1), {})).dump());
    }
};

const ScratchSetup kSetup{};

}  // namespace

TEST_CASE("universe export and re-import round-trips through the CLI") {
    REQUIRE(run("universe --dim 3 --out " + p("u3.json") + " 2> /dev/null") == 0);
    const ContextUniverse uni = universe_from_json(read_json_file(p("u3.json")), {});
    CHECK(uni.size() == 4);
    CHECK(uni.dim() == 3);

    // A universe seeded from operator files.
    REQUIRE(run("universe --operator " + p("op3.json") + " --out " + p("u3b.json") +
                " 2> /dev/null") == 0);
    CHECK(slurp(p("u3.json")) == slurp(p("u3b.json")));
}

TEST_CASE("daseinise consumes exported universes") {
    REQUIRE(run("universe --dim 3 --out " + p("u3.json") + " 2> /dev/null") == 0);
    REQUIRE(run("daseinise --operator " + p("op3.json") + " --universe " + p("u3.json") +
                " --direction outer --out " + p("das.json")) == 0);
    const nlohmann::json das = read_json_file(p("das.json"));
    CHECK(das.at("direction") == "outer");
    CHECK(das.at("contexts").size() == 4);
    for (const auto& [key, value] : das.at("contexts").items()) {
        CHECK(value.contains("coefficients"));
        CHECK(value.at("context_key") == key);
    }
}

TEST_CASE("arrow export is CSV plus a clean naturality audit") {
    REQUIRE(run("arrow --operator " + p("op3.json") + " --dim 3 --mode pair --out " +
                p("arrow.csv")) == 0);
    const std::string csv = slurp(p("arrow.csv"));
    CHECK(csv.rfind("stage,character,subcontext,inner,outer", 0) == 0);
    CHECK(csv.find("# naturality: ok") != std::string::npos);
}

TEST_CASE("truth reports the frozen qutrit sieve") {
    const int code = run("truth --proposition " + p("prop.json") + " --state " +
                         p("state.json") + " --dim 3 --out " + p("truth.json"));
    REQUIRE(code == 0);
    const nlohmann::json t = read_json_file(p("truth.json"));
    const Context lump12 = context_from_operators(
        {HermitianOperator(fixtures::diag({1, 1, 2}), {})}, {});
    REQUIRE(t.at("members").size() == 1);
    CHECK(t.at("members")[0] == lump12.key());
    CHECK_FALSE(t.at("totally_true").get<bool>());
}

TEST_CASE("twist audits the covariance square") {
    REQUIRE(run("twist --unitary " + p("had.json") + " --dim 2 --operator " +
                p("op2.json") + " --out " + p("twist.json")) == 0);
    const nlohmann::json t = read_json_file(p("twist.json"));
    CHECK(t.at("twisted_iso").at("pass").get<bool>());
    CHECK(t.at("universe").at("contexts").size() == 2);
}

TEST_CASE("kvalue decomposes a function file over an exported universe") {
    const auto uni = fixtures::qutrit_universe({});
    nlohmann::json f;
    for (const auto& key : uni->keys()) {
        f[key] = key == uni->maximal_keys().front() ? 0.0 : 2.5;
    }
    spit(p("fn.json"), f.dump());
    REQUIRE(run("kvalue --function " + p("fn.json") + " --dim 3 --out " + p("kv.json")) ==
            0);
    const nlohmann::json kv = read_json_file(p("kv.json"));
    const std::string top = uni->maximal_keys().front();
    const double g = kv.at("g").at("bv").at(top).get<double>();
    const double h = kv.at("h").at("bv").at(top).get<double>();
    CHECK(g - h == 0.0);
    CHECK(kv.at("total_variation").at(top).get<double>() == 2.5);
}

TEST_CASE("check reports are byte-identical across reruns with one seed") {
    const std::string names = "--name spectral-roundtrip --name truth-sieves";
    REQUIRE(run("check " + names + " --seed 5 --json " + p("r1.json") + " > " +
                p("o1.txt")) == 0);
    REQUIRE(run("check " + names + " --seed 5 --json " + p("r2.json") + " > " +
                p("o2.txt")) == 0);
    CHECK(slurp(p("r1.json")) == slurp(p("r2.json")));
    CHECK(slurp(p("o1.txt")) == slurp(p("o2.txt")));
    CHECK(slurp(p("o1.txt")).find("all checks passed") != std::string::npos);

    const nlohmann::json report = read_json_file(p("r1.json"));
    CHECK(report.at("pass").get<bool>());
    CHECK(report.at("seed").get<std::uint64_t>() == 5);
    CHECK(report.at("checks").size() == 2);
}

TEST_CASE("check --list names every registered suite") {
    REQUIRE(run("check --list > " + p("names.txt")) == 0);
    const std::string names = slurp(p("names.txt"));
    CHECK(names.find("das-lattice-equivalence") != std::string::npos);
    CHECK(names.find("report-determinism") != std::string::npos);
}

TEST_CASE("input errors exit with code 2") {
    CHECK(run("daseinise --operator " + p("missing.json") + " --dim 3 2> /dev/null") == 2);

    spit(p("broken.json"), "{ not json");
    CHECK(run("daseinise --operator " + p("broken.json") + " --dim 3 2> /dev/null") == 2);

    spit(p("badtol.json"), "{\"no_such_tolerance\": 1.0}");
    CHECK(run("check --name spectral-roundtrip --tolerances " + p("badtol.json") +
              " 2> /dev/null > /dev/null") == 2);

    spit(p("negtol.json"), "{\"proj_tol\": -1.0}");
    CHECK(run("check --name spectral-roundtrip --tolerances " + p("negtol.json") +
              " 2> /dev/null > /dev/null") == 2);

    // No universe source given.
    CHECK(run("daseinise --operator " + p("op3.json") + " 2> /dev/null") == 2);
}

TEST_CASE("a hostile tolerance file makes checks fail with exit code 1") {
    spit(p("hugetol.json"), "{\"order_cmp_tol\": 10.0}");
    CHECK(run("check --name separating-context --seed 3 --tolerances " +
              p("hugetol.json") + " > /dev/null") == 1);
}

TEST_CASE("tampered universe files are rejected on import") {
    REQUIRE(run("universe --dim 2 --out " + p("u2.json") + " 2> /dev/null") == 0);
    nlohmann::json u = read_json_file(p("u2.json"));
    u["contexts"][0]["key"] = "d2k2-0123456789abcdef";
    spit(p("u2bad.json"), u.dump());
    CHECK(run("daseinise --operator " + p("op2.json") + " --universe " + p("u2bad.json") +
              " 2> /dev/null") == 2);
}

TEST_CASE("dot export emits a graph") {
    REQUIRE(run("export-dot --dim 4 --out " + p("u4.dot")) == 0);
    const std::string dot = slurp(p("u4.dot"));
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("V13") != std::string::npos);
}
