#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <random>

#include "cnl2asp/cli.h"
#include "support.h"

using namespace cnl2asp;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("cnl2asp_test_" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path write(const std::string& name, const std::string& text) const {
        fs::create_directories((path / name).parent_path());
        std::ofstream(path / name, std::ios::binary) << text;
        return path / name;
    }
};

int run(std::vector<std::string> args) {
    args.insert(args.begin(), "cnl2asp");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return cli::run_cli(static_cast<int>(argv.size()), argv.data());
}

const char* coloring = "A node goes from 1 to 3.\nA color is one of red, green.\n"
                       "Every node can be assigned to exactly 1 color.\n";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("normalization ignores layout, comments and generated variable numbers") {
    auto a = cli::normalize_program("% header\na(X) :- b(X,_X4),\n   c(_X4).\n:~ p(X). [1@2, X]\nn(1..3).\n");
    auto b = cli::normalize_program("a(X):-b(X,_X1),c(_X1). :~ p(X).[1@2,X] n(1..3).");
    CHECK(a == b);
    CHECK(a == std::vector<std::string>{"a(X):-b(X,_G1),c(_G1).", ":~p(X).[1@2,X]", "n(1..3)."});
    CHECK(cli::normalize_program("s(\"a b. c\").") == std::vector<std::string>{"s(\"a b. c\")."});
    CHECK(cli::normalize_program("a(X) :- b(X).") != cli::normalize_program("a(Y) :- b(Y)."));
    CHECK(cli::normalize_program("a(X) :- b(X).", true) == cli::normalize_program("a(Y) :- b(Y).", true));
    CHECK(cli::normalize_program("a(X,Y) :- b(X,Y).", true) != cli::normalize_program("a(Y,X) :- b(X,Y).", true));
}

TEST_CASE("ledger entries rewrite or move listing lines") {
    std::string listing = "a.\nb :- c >= 3.\nd.\n";
    std::vector<cli::LedgerEntry> mask{{2, ">= 3", ">= 2", "r", "s"}};
    CHECK(cli::apply_ledger(listing, mask) == "a.\nb :- c >= 2.\nd.\n");
    cli::LedgerEntry move{3, "", "", "r", "s", 1, "move"};
    CHECK(cli::apply_ledger(listing, {move}) == "d.\na.\nb :- c >= 3.\n");
    CHECK_THROWS(cli::apply_ledger(listing, {{2, "<= 9", "x", "r", "s"}}));
    CHECK_THROWS(cli::apply_ledger(listing, {{7, "a", "b", "r", "s"}}));
}

TEST_CASE("unified diff marks removed and added lines") {
    std::string d = cli::unified_diff({"a.", "b.", "c."}, {"a.", "x.", "c."});
    CHECK(d == "--- expected\n+++ actual\n  a.\n+ x.\n- b.\n  c.\n");
}

TEST_CASE("exit codes") {
    TempDir dir;
    auto good = dir.write("good.cnl", coloring);
    auto out = dir.path / "good.lp";
    CHECK(run({good.string(), "-o", out.string()}) == 0);
    CHECK(testing::read_text(out) ==
          "node(1..3).\ncolor(1,\"red\").\ncolor(2,\"green\").\n1 <= {assigned_to(_X1,_X2): color(_,_X2)} <= 1 :- node(_X1).\n");
    CHECK(run({good.string(), (dir.path / "positional.lp").string()}) == 0);
    CHECK(fs::exists(dir.path / "positional.lp"));

    CHECK(run({dir.write("parse.cnl", "A node goes from 1 to 3").string(), "-o", out.string()}) == 1);
    CHECK(run({dir.write("semantic.cnl", "A node goes from 3 to 1.").string(), "-o", out.string()}) == 2);
    CHECK(run({(dir.path / "missing.cnl").string()}) == 3);
    CHECK(run({good.string(), "-o", (dir.path / "no" / "such" / "dir" / "x.lp").string()}) == 3);
    CHECK(run({good.string(), "--frobnicate"}) == 3);
    CHECK(run({}) == 3);
}

TEST_CASE("check-only validates without writing") {
    TempDir dir;
    auto good = dir.write("good.cnl", coloring);
    auto out = dir.path / "unused.lp";
    CHECK(run({good.string(), "--check-only", "-o", out.string()}) == 0);
    CHECK_FALSE(fs::exists(out));
    CHECK(run({dir.write("bad.cnl", "A node goes from 1 to 3.\nNode 1 is connected to node X.").string(),
               "--check-only"}) == 2);
}

TEST_CASE("the binary rejects unknown flags") {
    CHECK(WEXITSTATUS(std::system((std::string(CNL2ASP_BINARY) + " --frobnicate >/dev/null 2>&1").c_str())) == 3);
}

TEST_CASE("corpus runner") {
    TempDir dir;
    dir.write("corpus/ok/input.cnl", "A node goes from 1 to 3.\n");
    dir.write("corpus/ok/expected.lp", "node(1 .. 3).\n");
    CHECK(run({"--corpus", (dir.path / "corpus").string()}) == 0);

    dir.write("corpus/wrong/input.cnl", "A node goes from 1 to 4.\n");
    dir.write("corpus/wrong/expected.lp", "node(1..3).\n");
    auto report = cli::run_corpus(dir.path / "corpus");
    REQUIRE(report.cases.size() == 2);
    CHECK(report.failed() == 1);
    CHECK(report.cases[1].name == "wrong");
    CHECK(report.cases[1].diff.find("- node(1..3).") != std::string::npos);
    CHECK(report.cases[1].diff.find("+ node(1..4).") != std::string::npos);
    CHECK(run({"--corpus", (dir.path / "corpus").string()}) == 2);

    dir.write("corpus/masked/input.cnl", "A node goes from 1 to 4.\n");
    dir.write("corpus/masked/expected.lp", "node(1..3).\n");
    dir.write("corpus/masked/ledger.json",
              R"({"exceptions": [{"line": 1, "expected": "3", "actual": "4", "reason": "r", "source": "s"}]})");
    auto masked = cli::run_case(cli::load_corpus(dir.path / "corpus")[0]);
    CHECK(masked.name == "masked");
    CHECK(masked.passed);
    CHECK(masked.notes == std::vector<std::string>{"masked line 1: '3' -> '4'"});

    dir.write("corpus/unpaired/input.cnl", "A node goes from 1 to 3.\n");
    CHECK_THROWS_WITH(cli::load_corpus(dir.path / "corpus"), doctest::Contains("MissingExpectedFile"));
    CHECK(run({"--corpus", (dir.path / "corpus").string()}) == 3);
    CHECK(run({"--corpus", (dir.path / "absent").string()}) == 3);
}

TEST_CASE("solver smoke check") {
    auto missing = cli::find_solver(std::string("/no/such/solver"));
    CHECK_FALSE(missing);
    auto skipped = cli::solver_smoke_check("a.", {}, missing);
    CHECK(skipped.status == cli::SmokeStatus::Skipped);
    CHECK(skipped.output == "SolverNotFound");

    auto solver = cli::find_solver(std::nullopt);
    if (!solver) {
        MESSAGE("no grounder available; solver checks skipped");
        return;
    }
    CHECK(cli::solver_smoke_check("a(1..3).\n:- a(X), X > n.\n", {"n"}, solver).status == cli::SmokeStatus::Passed);
    auto rejected = cli::solver_smoke_check("a(1..3).\n:- #count{X: a(X)} > .\n", {}, solver);
    CHECK(rejected.status == cli::SmokeStatus::Rejected);
    CHECK_FALSE(rejected.output.empty());
    CHECK(cli::solver_smoke_check("a(X) :- b.\n", {}, solver).status == cli::SmokeStatus::Rejected);
}

}
