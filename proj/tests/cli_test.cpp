#include <doctest.h>

#include <json.hpp>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "teamsem/kripke.hpp"

namespace {

namespace fs = std::filesystem;

struct TempDir {
  TempDir() {
    path = fs::temp_directory_path() / ("teamcheck_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& content) {
    fs::path p = path / name;
    std::ofstream(p) << content;
    return p.string();
  }
  fs::path path;
};

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = teamsem::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const char* kWitness = R"({
  "variables": ["p"],
  "worlds": ["w1", "w2"],
  "edges": [],
  "valuation": {"p": ["w1"]},
  "teams": {"both": ["w1", "w2"], "second": ["w2"]}
})";

}  // namespace

TEST_CASE("check reports SAT and UNSAT with matching exit codes") {
  TempDir dir;
  std::string model = dir.file("w.json", kWitness);

  Run sat = run_cli({"check", "--model", model, "--team", "both", "--formula", "E p"});
  CHECK(sat.code == 0);
  CHECK(sat.out == "SAT\n");

  Run unsat = run_cli({"check", "--model", model, "--team", "second", "--formula", "E p"});
  CHECK(unsat.code == 1);
  CHECK(unsat.out == "UNSAT\n");

  Run json_mode =
      run_cli({"--json", "check", "--model", model, "--team", "both", "--formula", "E p"});
  CHECK(json_mode.code == 0);
  CHECK(nlohmann::json::parse(json_mode.out).at("verdict") == "SAT");

  // global flags also work after the subcommand
  Run trailing =
      run_cli({"check", "--model", model, "--team", "both", "--formula", "E p", "--json"});
  CHECK(trailing.code == 0);
  CHECK(nlohmann::json::parse(trailing.out).at("verdict") == "SAT");
}

TEST_CASE("bisim compares the witness teams") {
  TempDir dir;
  std::string model = dir.file("w.json", kWitness);
  Run r = run_cli({"bisim", "--model-a", model, "--team-a", "both", "--model-b", model,
                   "--team-b", "second", "--k", "0"});
  CHECK(r.code == 1);
  CHECK(r.out.find("not 0-bisimilar") == 0);
  CHECK(r.out.find("separating formula") != std::string::npos);

  Run same = run_cli({"bisim", "--model-a", model, "--team-a", "both", "--model-b", model,
                      "--team-b", "both"});
  CHECK(same.code == 0);
  CHECK(same.out == "bisimilar\n");
}

TEST_CASE("hintikka and translate print formulas") {
  TempDir dir;
  std::string model = dir.file("w.json", kWitness);
  Run world = run_cli({"hintikka", "--model", model, "--world", "w1", "--k", "0"});
  CHECK(world.code == 0);
  CHECK(world.out == "p\n");

  Run team = run_cli({"hintikka", "--model", model, "--team", "both", "--k", "0"});
  CHECK(team.out == "(E p & E !p) & (p | !p)\n");

  Run st = run_cli({"translate", "--formula", "<>p"});
  CHECK(st.out == "exists y. E(x, y) & W_p(y)\n");

  Run chi = run_cli({"translate", "--chi", "--model", model, "--team", "second", "--k", "0"});
  CHECK(chi.code == 0);
  CHECK(chi.out.find("T(x)") != std::string::npos);
}

TEST_CASE("express builds the class formula") {
  TempDir dir;
  std::string model = dir.file("w.json", kWitness);
  std::string cls = dir.file("cls.json", std::string("[{\"model\": \"") + model +
                                              "\", \"team\": \"both\"}]");
  Run r = run_cli({"express", "--class", cls, "--k", "0"});
  CHECK(r.code == 0);
  CHECK(r.out == "(E p & E !p) & (p | !p)\n");

  // inline models work too
  std::string inline_cls = dir.file("cls2.json", std::string("[{\"model\": ") + kWitness +
                                                     ", \"team\": \"second\"}]");
  Run r2 = run_cli({"express", "--class", inline_cls, "--k", "0"});
  CHECK(r2.out == "E !p & !p\n");
}

TEST_CASE("equiv and properties expose the oracle") {
  Run eq = run_cli({"equiv", "--formula-a", "E p", "--formula-b", "inc(top ; p)",
                    "--max-worlds", "3", "--vars", "p"});
  CHECK(eq.code == 0);
  CHECK(eq.out.find("VERIFIED") == 0);

  Run ne = run_cli({"equiv", "--formula-a", "E p", "--formula-b", "p", "--max-worlds", "3",
                    "--vars", "p"});
  CHECK(ne.code == 1);
  CHECK(ne.out.find("FALSIFIED") == 0);

  Run flat = run_cli({"properties", "--formula", "<>p | q", "--check", "flat",
                      "--max-worlds", "2", "--vars", "p,q"});
  CHECK(flat.code == 0);

  Run kinv = run_cli({"properties", "--formula", "<>p", "--check", "k-invariant", "--k", "0",
                      "--max-worlds", "2", "--vars", "p"});
  CHECK(kinv.code == 1);

  Run json_eq = run_cli({"--json", "equiv", "--formula-a", "p", "--formula-b", "p & p",
                         "--max-worlds", "2", "--vars", "p"});
  CHECK(json_eq.code == 0);
  CHECK(nlohmann::json::parse(json_eq.out).at("verdict") == "VERIFIED");
}

TEST_CASE("random is deterministic and reloads") {
  Run a = run_cli({"random", "--seed", "11", "--worlds", "4", "--edge-prob", "0.5", "--vars",
                   "p,q"});
  Run b = run_cli({"random", "--seed", "11", "--worlds", "4", "--edge-prob", "0.5", "--vars",
                   "p,q"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(teamsem::load_model(a.out).model.world_count() == 4);
}

TEST_CASE("usage and data errors exit with two") {
  CHECK(run_cli({"nonsense"}).code != 0);
  CHECK(run_cli({"check", "--model", "/nonexistent.json", "--team", "T", "--formula", "p"})
            .code == 2);
  TempDir dir;
  std::string model = dir.file("w.json", kWitness);
  CHECK(run_cli({"check", "--model", model, "--team", "missing", "--formula", "p"}).code == 2);
  CHECK(run_cli({"check", "--model", model, "--team", "both", "--formula", "p &"}).code == 2);
  CHECK(run_cli({"check", "--model", model, "--team", "both", "--formula", "zz"}).code == 2);
}

TEST_CASE("the team cap honours the environment override") {
  TempDir dir;
  std::string model = dir.file("big.json", R"({
    "variables": ["p"],
    "worlds": ["a", "b", "c", "d"],
    "edges": [],
    "valuation": {"p": ["a", "b"]},
    "teams": {"all": ["a", "b", "c", "d"]}
  })");
  ::setenv("TEAMCHECK_MAX_TEAM", "2", 1);
  Run capped = run_cli({"check", "--model", model, "--team", "all", "--formula", "~p | ~p"});
  ::unsetenv("TEAMCHECK_MAX_TEAM");
  CHECK(capped.code == 2);
  CHECK(capped.err.find("cap") != std::string::npos);

  Run fine = run_cli({"check", "--model", model, "--team", "all", "--formula", "~p | ~p"});
  CHECK(fine.code != 2);
}

TEST_CASE("atom registry flows through the CLI") {
  TempDir dir;
  std::string model = dir.file("w.json", kWitness);
  std::string atoms = dir.file(
      "atoms.json",
      R"json([{"name": "nonempty", "arity": 1, "sentence": "exists x. A1(x)"}])json");
  Run ok = run_cli({"--atoms", atoms, "check", "--model", model, "--team", "both", "--formula",
                    "atom nonempty(p)"});
  CHECK(ok.code == 0);
  Run arity = run_cli({"--atoms", atoms, "check", "--model", model, "--team", "both",
                       "--formula", "atom nonempty(p, p)"});
  CHECK(arity.code == 2);
}

TEST_CASE("the suite runs at toy bounds") {
  Run r = run_cli({"suite", "--max-worlds", "2", "--vars", "p,q", "--exhaustive-size", "3",
                   "--samples", "20", "--sample-size", "6", "--max-k", "1"});
  CHECK(r.code == 0);
  int verified = 0;
  std::istringstream lines(r.out);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.find("VERIFIED") == 0) ++verified;
  }
  CHECK(verified == 10);
}
