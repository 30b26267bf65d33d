#include <doctest.h>

#include <map>
#include <set>

#include "teamsem/bisim.hpp"
#include "teamsem/hintikka.hpp"
#include "teamsem/oracle.hpp"
#include "teamsem/semantics.hpp"

using namespace teamsem;
using oracle::Bounds;
using oracle::CheckReport;
using oracle::Verdict;

TEST_CASE("model enumeration is deterministic and hits the orbit counts") {
  // expected counts derived with Burnside's lemma over world relabelings:
  // one variable: n=1: 4, n=2: (64+8)/2 = 36, n=3: (4096+3*128+2*16)/6 = 752
  // two variables: n=1: 8, n=2: (256+16)/2 = 136, n=3: (32768+3*512+2*32)/6 = 5728
  std::vector<std::string> first, second;
  oracle::enumerate_models(3, {"p"},
                           [&](const KripkeModel& m) { first.push_back(save_model({m, {}})); });
  oracle::enumerate_models(3, {"p"},
                           [&](const KripkeModel& m) { second.push_back(save_model({m, {}})); });
  CHECK(first == second);
  CHECK(first.size() == 4 + 36 + 752);
  CHECK(std::set<std::string>(first.begin(), first.end()).size() == first.size());

  long long two_vars = 0;
  oracle::enumerate_models(3, {"p", "q"}, [&](const KripkeModel&) { ++two_vars; });
  CHECK(two_vars == 8 + 136 + 5728);
}

TEST_CASE("team enumeration") {
  KripkeModel m = random_model(1, 3, 0.5, {"p"});
  CHECK(oracle::all_teams(m, false).size() == 7);
  CHECK(oracle::all_teams(m, true).size() == 8);
  CHECK(oracle::all_teams(m, true).front().is_empty());
}

namespace {

// independent counting recurrence for the exhaustive ML generator:
// count[s][d] = number of formulas of size s with modal depth exactly d
long long expected_ml_count(int nvars, int max_size, int max_depth) {
  std::vector<std::map<int, long long>> count(max_size + 1);
  count[1][0] = 2 + 2 * nvars;
  for (int s = 2; s <= max_size; ++s) {
    for (auto [d, n] : count[s - 1]) {
      if (d + 1 <= max_depth) count[s][d + 1] += 2 * n;  // diamond, box
    }
    for (int ls = 1; ls <= s - 2; ++ls) {
      for (auto [dl, nl] : count[ls]) {
        for (auto [dr, nr] : count[s - 1 - ls]) {
          count[s][std::max(dl, dr)] += 2 * nl * nr;  // and, split or
        }
      }
    }
  }
  long long total = 0;
  for (const auto& per_size : count) {
    for (auto [d, n] : per_size) total += n;
  }
  return total;
}

}  // namespace

TEST_CASE("exhaustive ML generator matches its counting recurrence") {
  std::vector<Formula> fs = oracle::enumerate_ml({"p", "q"}, 4, 2);
  CHECK(static_cast<long long>(fs.size()) == expected_ml_count(2, 4, 2));
  std::set<std::string> rendered;
  for (const Formula& f : fs) {
    CHECK(f.is_ml());
    CHECK(f.modal_depth() <= 2);
    CHECK(rendered.insert(render(f)).second);
  }
  std::vector<Formula> deeper = oracle::enumerate_ml({"p"}, 5, 1);
  CHECK(static_cast<long long>(deeper.size()) == expected_ml_count(1, 5, 1));
}

TEST_CASE("the sampler is deterministic and stays in its fragment") {
  oracle::FormulaSampler a(42, {"p", "q"});
  oracle::FormulaSampler b(42, {"p", "q"});
  for (int i = 0; i < 50; ++i) {
    Formula fa = a.emincl(9, 2);
    Formula fb = b.emincl(9, 2);
    CHECK(fa == fb);
    Fragment fr = fragment_of(fa);
    CHECK((fr == Fragment::ML || fr == Fragment::EMINCL));
  }
  oracle::FormulaSampler c(43, {"p", "q"});
  for (int i = 0; i < 50; ++i) {
    Fragment fr = fragment_of(c.emil_lor(9, 2));
    CHECK((fr == Fragment::ML || fr == Fragment::MLc || fr == Fragment::EMIL ||
           fr == Fragment::EMILc));
  }
}

TEST_CASE("equiv_check verifies the E-operator inclusion encoding") {
  Bounds b;
  b.vars = {"p"};
  CheckReport r = oracle::equiv_check(parse("E p"), parse("inc(top ; p)"), b);
  CHECK(r.verdict == Verdict::Verified);
  CHECK(r.instances > 0);
}

TEST_CASE("equiv_check finds the smallest separation of E p from p") {
  Bounds b;
  b.vars = {"p"};
  CheckReport r = oracle::equiv_check(parse("E p"), parse("p"), b);
  REQUIRE(r.verdict == Verdict::Falsified);
  REQUIRE(r.counterexample.has_value());

  // the counterexample replays: load it back and re-evaluate both sides
  ModelFile cex = load_model(r.counterexample->model_a);
  CHECK(cex.model.world_count() == 2);  // singletons cannot separate these
  Team t = cex.teams.at("T");
  CHECK(semantics::eval(cex.model, t, parse("E p")) !=
        semantics::eval(cex.model, t, parse("p")));
}

TEST_CASE("closure_check on stock examples") {
  Bounds b;
  b.vars = {"p", "q"};
  b.max_worlds = 2;
  CHECK(oracle::closure_check(parse("<>p | []q"), oracle::ClosureProperty::Flat, b).verdict ==
        Verdict::Verified);
  CHECK(oracle::closure_check(parse("dep(p, q)"), oracle::ClosureProperty::DownwardClosed, b)
            .verdict == Verdict::Verified);
  CHECK(oracle::closure_check(parse("inc(p ; q)"), oracle::ClosureProperty::UnionClosed, b)
            .verdict == Verdict::Verified);
  CHECK(oracle::closure_check(parse("dep(p, q) | inc(p ; q)"),
                              oracle::ClosureProperty::EmptyTeam, b)
            .verdict == Verdict::Verified);

  CheckReport flat = oracle::closure_check(parse("~p"), oracle::ClosureProperty::Flat, b);
  REQUIRE(flat.verdict == Verdict::Falsified);
  ModelFile cex = load_model(flat.counterexample->model_a);
  Team t = cex.teams.at("T");
  bool team_truth = semantics::eval(cex.model, t, parse("~p"));
  bool pointwise = true;
  for (int w = 0; w < cex.model.world_count(); ++w) {
    if (t.contains(w)) pointwise = pointwise && semantics::eval(cex.model, Team::single(w), parse("~p"));
  }
  CHECK(team_truth != pointwise);
}

TEST_CASE("invariance_check at level and radius") {
  Bounds b;
  b.vars = {"p"};
  CHECK(oracle::invariance_check(parse("E p"), oracle::KInvariance{0}, b).verdict ==
        Verdict::Verified);
  CHECK(oracle::invariance_check(parse("<>p"), oracle::KInvariance{0}, b).verdict ==
        Verdict::Falsified);
  CHECK(oracle::invariance_check(parse("<>p"), oracle::KInvariance{1}, b).verdict ==
        Verdict::Verified);
  CHECK(oracle::invariance_check(parse("E p"), oracle::DLocality{0}, b).verdict ==
        Verdict::Verified);
  CHECK(oracle::invariance_check(parse("<>p"), oracle::DLocality{0}, b).verdict ==
        Verdict::Falsified);
  CHECK(oracle::invariance_check(parse("<>p"), oracle::DLocality{1}, b).verdict ==
        Verdict::Verified);
  CHECK(oracle::invariance_check(parse("~<>p"), oracle::FullInvariance{}, b).verdict ==
        Verdict::Verified);

  // depth-k formulas are k-invariant
  oracle::FormulaSampler sampler(0x515, {"p"});
  for (int i = 0; i < 10; ++i) {
    Formula f = sampler.mtl(7, 2);
    CHECK(oracle::invariance_check(f, oracle::KInvariance{f.modal_depth()}, b).verdict ==
          Verdict::Verified);
  }
}

TEST_CASE("suite reports are byte-stable") {
  Bounds small;
  small.max_worlds = 2;
  small.vars = {"p", "q"};
  small.exhaustive_formula_size = 3;
  small.sample_count = 25;
  small.sample_formula_size = 7;
  small.max_k = 1;

  std::vector<CheckReport> first = oracle::claim_suite(small);
  std::vector<CheckReport> second = oracle::claim_suite(small);
  REQUIRE(first.size() == second.size());
  REQUIRE(first.size() == 10);
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].to_line() == second[i].to_line());
    CHECK(first[i].verdict == Verdict::Verified);
  }
}

TEST_CASE("a corrupted diamond clause is caught by the characteristic-formula claim") {
  // evaluate characteristic formulas with the fault-injection hook enabled
  // and require a disagreement with team bisimilarity to surface
  semantics::EvalConfig mutant;
  mutant.mutant_diamond_drop_forward = true;
  bool caught = false;
  oracle::enumerate_models(2, {"p"}, [&](const KripkeModel& m2) {
    if (caught) return;
    for (Team t2 : oracle::all_teams(m2, false)) {
      Formula chi = hintikka::hintikka_team(m2, t2, 1);
      oracle::enumerate_models(2, {"p"}, [&](const KripkeModel& m1) {
        if (caught) return;
        for (Team t1 : oracle::all_teams(m1, false)) {
          bool sat = semantics::eval(m1, t1, chi, mutant);
          bool bis = bisim::team_kbisim(m1, t1, m2, t2, 1);
          if (sat != bis) caught = true;
        }
      });
    }
  });
  CHECK(caught);
}
