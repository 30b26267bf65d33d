#include <doctest.h>

#include "reference_eval.hpp"
#include "teamsem/bisim.hpp"
#include "teamsem/hintikka.hpp"
#include "teamsem/oracle.hpp"
#include "teamsem/semantics.hpp"

using namespace teamsem;

namespace {

ModelFile m0() {
  return load_model(R"({
    "variables": ["p", "q"],
    "worlds": ["a", "b", "c"],
    "edges": [["a", "b"], ["a", "c"], ["b", "b"]],
    "valuation": {"p": ["a", "b"], "q": ["c"]},
    "teams": {}
  })");
}

KripkeModel two_world_witness() {
  KripkeModel m({"p"}, {"w1", "w2"});
  m.set_true(0, 0);
  return m;
}

}  // namespace

TEST_CASE("level-0 types read off the valuation") {
  ModelFile mf = m0();
  bisim::CanonicalType t = bisim::ktype(mf.model, 0, 0);
  CHECK(t.level == 0);
  CHECK(t.cell == 0b01);  // p true, q false
  CHECK(t.successors.empty());

  KripkeModel leaves({"p"}, {"u", "v"});
  leaves.set_true(0, 0);
  leaves.set_true(0, 1);
  for (int k = 0; k <= 4; ++k) {
    CHECK(bisim::ktype(leaves, 0, k) == bisim::ktype(leaves, 1, k));
  }
}

TEST_CASE("level-1 types distinguish successor structure") {
  ModelFile mf = m0();
  CHECK(bisim::ktype(mf.model, 1, 1) != bisim::ktype(mf.model, 2, 1));
  CHECK(bisim::ktype(mf.model, 1, 0) != bisim::ktype(mf.model, 2, 0));  // different cells too
  CHECK(bisim::ktype(mf.model, 0, 1).successors.size() == 2);
}

TEST_CASE("canonical type keys are injective on samples") {
  KripkeModel m = random_model(31, 6, 0.4, {"p", "q"});
  for (int k = 0; k <= 3; ++k) {
    std::vector<bisim::CanonicalType> all = bisim::ktype_all(m, k);
    for (int w = 0; w < m.world_count(); ++w) {
      for (int v = 0; v < m.world_count(); ++v) {
        CHECK((all[w] == all[v]) == (all[w].key() == all[v].key()));
      }
    }
  }
}

TEST_CASE("team k-bisimilarity matches the inductive definition") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    KripkeModel m1 = random_model(seed, 3, 0.4, {"p"});
    KripkeModel m2 = random_model(seed + 100, 3, 0.4, {"p"});
    for (int k = 0; k <= 3; ++k) {
      for (std::uint64_t t1 = 1; t1 < 8; ++t1) {
        for (std::uint64_t t2 = 1; t2 < 8; ++t2) {
          bool expected = refsem::ref_team_kbisim(m1, refsem::to_set(Team{t1}, m1), m2,
                                                  refsem::to_set(Team{t2}, m2), k);
          CHECK(bisim::team_kbisim(m1, Team{t1}, m2, Team{t2}, k) == expected);
        }
      }
    }
  }
}

TEST_CASE("teams are k-bisimilar to themselves, singletons reduce to worlds") {
  ModelFile mf = m0();
  for (int k = 0; k <= 3; ++k) {
    CHECK(bisim::team_kbisim(mf.model, Team{0b101}, mf.model, Team{0b101}, k));
  }
  KripkeModel w = two_world_witness();
  CHECK(bisim::team_kbisim(w, Team::single(0), w, Team::single(0), 2));
  CHECK_FALSE(bisim::team_kbisim(w, Team::single(0), w, Team::single(1), 0));
}

TEST_CASE("the two-world witness teams differ at level 0") {
  KripkeModel w = two_world_witness();
  Team both = Team::single(0).add(1);
  Team second = Team::single(1);
  CHECK_FALSE(bisim::team_kbisim(w, both, w, second, 0));
  CHECK_FALSE(bisim::team_full_bisim(w, both, w, second));
  CHECK(bisim::distinguishing_k(w, both, w, second, 5) == std::optional<int>(0));
}

TEST_CASE("full bisimilarity collapses cycles of equal colour") {
  KripkeModel one({"p"}, {"a"});
  one.set_true(0, 0);
  one.add_edge(0, 0);
  KripkeModel two({"p"}, {"x", "y"});
  two.set_true(0, 0);
  two.set_true(0, 1);
  two.add_edge(0, 1);
  two.add_edge(1, 0);
  CHECK(bisim::team_full_bisim(one, Team::single(0), two, Team::single(0)));
  for (int k = 0; k <= 4; ++k) {
    CHECK(bisim::team_kbisim(one, Team::single(0), two, Team::single(0), k));
  }
}

TEST_CASE("monotonicity and stabilization of team k-bisimilarity") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    KripkeModel m1 = random_model(seed + 10, 3, 0.5, {"p"});
    KripkeModel m2 = random_model(seed + 60, 3, 0.5, {"p"});
    for (std::uint64_t t1 = 1; t1 < 8; t1 += 2) {
      for (std::uint64_t t2 = 1; t2 < 8; t2 += 3) {
        for (int k = 0; k < 4; ++k) {
          if (bisim::team_kbisim(m1, Team{t1}, m2, Team{t2}, k + 1)) {
            CHECK(bisim::team_kbisim(m1, Team{t1}, m2, Team{t2}, k));
          }
        }
        int stable = m1.world_count() + m2.world_count();
        CHECK(bisim::team_kbisim(m1, Team{t1}, m2, Team{t2}, stable) ==
              bisim::team_full_bisim(m1, Team{t1}, m2, Team{t2}));
      }
    }
  }
}

TEST_CASE("distinguishing level examples") {
  KripkeModel leaf({"p"}, {"a"});
  leaf.set_true(0, 0);
  KripkeModel chain({"p"}, {"x", "y"});
  chain.set_true(0, 0);
  chain.set_true(0, 1);
  chain.add_edge(0, 1);
  CHECK(bisim::distinguishing_k(leaf, Team::single(0), chain, Team::single(0), 5) ==
        std::optional<int>(1));
  CHECK(bisim::distinguishing_k(leaf, Team::single(0), leaf, Team::single(0), 5) ==
        std::nullopt);
  CHECK_THROWS_AS(bisim::team_kbisim(leaf, Team::empty(), leaf, Team::single(0), 1), Error);
}

TEST_CASE("type equality is satisfaction of the characteristic world formula") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    KripkeModel m1 = random_model(seed + 500, 3, 0.5, {"p"});
    KripkeModel m2 = random_model(seed + 900, 3, 0.5, {"p"});
    for (int k = 0; k <= 2; ++k) {
      for (int w1 = 0; w1 < m1.world_count(); ++w1) {
        Formula phi = hintikka::hintikka_world(m1, w1, k);
        for (int w2 = 0; w2 < m2.world_count(); ++w2) {
          bool same_type = bisim::ktype(m1, w1, k) == bisim::ktype(m2, w2, k);
          CHECK(semantics::eval_pointed(m2, w2, phi) == same_type);
        }
      }
    }
  }
}

TEST_CASE("k-bisimilar teams agree on formulas of bounded depth") {
  oracle::FormulaSampler sampler(0xdead, {"p"});
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    KripkeModel m1 = random_model(seed + 21, 3, 0.5, {"p"});
    KripkeModel m2 = random_model(seed + 91, 3, 0.5, {"p"});
    for (int i = 0; i < 25; ++i) {
      Formula f = sampler.mtl(7, 2);
      int k = f.modal_depth();
      for (std::uint64_t t1 = 1; t1 < 8; ++t1) {
        for (std::uint64_t t2 = 1; t2 < 8; ++t2) {
          if (!bisim::team_kbisim(m1, Team{t1}, m2, Team{t2}, k)) continue;
          CHECK(semantics::eval(m1, Team{t1}, f) == semantics::eval(m2, Team{t2}, f));
        }
      }
    }
  }
}

TEST_CASE("compare_teams fills the verdict") {
  KripkeModel w = two_world_witness();
  bisim::BisimVerdict v =
      bisim::compare_teams(w, Team::single(0).add(1), w, Team::single(1), 0);
  CHECK_FALSE(v.bisimilar);
  CHECK(v.distinguishing_k == std::optional<int>(0));
  bisim::BisimVerdict u = bisim::compare_teams(w, Team::single(0), w, Team::single(0), {});
  CHECK(u.bisimilar);
}
