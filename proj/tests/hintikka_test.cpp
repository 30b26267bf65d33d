#include <doctest.h>

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

TEST_CASE("world formulas at level 0 are the literal conjunction") {
  ModelFile mf = m0();
  CHECK(render(hintikka::hintikka_world(mf.model, 0, 0)) == "p & !q");
  CHECK(render(hintikka::hintikka_world(mf.model, 2, 0)) == "!p & q");
}

TEST_CASE("a successor-free world gets box-bot") {
  KripkeModel m({"p"}, {"w"});
  m.set_true(0, 0);
  CHECK(render(hintikka::hintikka_world(m, 0, 1)) == "p & []bot");
}

TEST_CASE("every world satisfies its own characteristic formula") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    KripkeModel m = random_model(seed + 2025, 4, 0.4, {"p", "q"});
    for (int k = 0; k <= 2; ++k) {
      for (int w = 0; w < m.world_count(); ++w) {
        Formula phi = hintikka::hintikka_world(m, w, k);
        CHECK(phi.modal_depth() == k);
        CHECK(semantics::eval_pointed(m, w, phi));
      }
    }
  }
}

TEST_CASE("k-bisimilar worlds give byte-identical formulas") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    KripkeModel m1 = random_model(seed + 1, 3, 0.5, {"p"});
    KripkeModel m2 = random_model(seed + 71, 3, 0.5, {"p"});
    for (int k = 0; k <= 2; ++k) {
      for (int w1 = 0; w1 < m1.world_count(); ++w1) {
        for (int w2 = 0; w2 < m2.world_count(); ++w2) {
          bool same = bisim::ktype(m1, w1, k) == bisim::ktype(m2, w2, k);
          bool identical = render(hintikka::hintikka_world(m1, w1, k)) ==
                           render(hintikka::hintikka_world(m2, w2, k));
          CHECK(same == identical);
        }
      }
    }
  }
}

TEST_CASE("team sets are deduplicated and canonically ordered") {
  KripkeModel w = two_world_witness();
  Team both = Team::single(0).add(1);
  std::vector<Formula> set = hintikka::hintikka_team_set(w, both, 0);
  REQUIRE(set.size() == 2);
  CHECK(render(set[0]) == "p");
  CHECK(render(set[1]) == "!p");
  CHECK(hintikka::hintikka_team_set(w, Team::single(1), 0).size() == 1);
  CHECK(render(hintikka::hintikka_team_set(w, Team::single(1), 0)[0]) == "!p");
  CHECK_THROWS_AS(hintikka::hintikka_team_set(w, Team::empty(), 0), Error);
}

TEST_CASE("the characteristic team formula of the witness") {
  KripkeModel w = two_world_witness();
  Team both = Team::single(0).add(1);
  CHECK(render(hintikka::hintikka_team(w, both, 0)) == "(E p & E !p) & (p | !p)");
  Formula single = hintikka::hintikka_team(w, Team::single(1), 0);
  CHECK(single.kind() == Kind::And);
  CHECK(single.arg(0).kind() == Kind::Exists);
  CHECK(render(single) == "E !p & !p");
}

TEST_CASE("teams satisfy their own characteristic formula") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    KripkeModel m = random_model(seed + 11, 3, 0.4, {"p"});
    for (int k = 0; k <= 2; ++k) {
      for (std::uint64_t mask = 1; mask < 8; ++mask) {
        Formula chi = hintikka::hintikka_team(m, Team{mask}, k);
        CHECK(chi.modal_depth() == k);
        CHECK(semantics::eval(m, Team{mask}, chi));
      }
    }
  }
}

TEST_CASE("express_property on a singleton class") {
  KripkeModel w = two_world_witness();
  hintikka::PropertyClass cls;
  cls.level = 0;
  cls.members.emplace_back(w, Team::single(0));
  Formula phi = hintikka::express_property(cls);
  CHECK(render(phi) == "E p & p");

  // satisfied exactly by the nonempty all-p teams
  oracle::enumerate_models(3, {"p"}, [&](const KripkeModel& m) {
    for (Team t : oracle::all_teams(m, false)) {
      bool expected = (t.bits & ~m.valuation(0)) == 0;
      CHECK(semantics::eval(m, t, phi) == expected);
    }
  });
}

TEST_CASE("express_property deduplicates bisimilar representatives") {
  KripkeModel w = two_world_witness();
  KripkeModel w2({"p"}, {"u", "z"});
  w2.set_true(0, 1);  // same two types, listed the other way around
  hintikka::PropertyClass cls;
  cls.level = 0;
  cls.members.emplace_back(w, Team::single(0).add(1));
  cls.members.emplace_back(w2, Team::single(0).add(1));
  Formula phi = hintikka::express_property(cls);
  CHECK(phi.kind() != Kind::COr);

  hintikka::PropertyClass empty_cls;
  empty_cls.level = 0;
  CHECK_THROWS_AS(hintikka::express_property(empty_cls), Error);
  hintikka::PropertyClass bad;
  bad.level = 0;
  bad.members.emplace_back(w, Team::empty());
  CHECK_THROWS_AS(hintikka::express_property(bad), Error);
}

TEST_CASE("type counts") {
  CHECK(hintikka::count_types(1, 0) == 2);
  CHECK(hintikka::count_types(1, 1) == 8);
  CHECK(hintikka::count_types(1, 2) == 512);
  CHECK(hintikka::count_types(2, 0) == 4);
  CHECK(hintikka::count_types(2, 1) == 64);
  CHECK(hintikka::count_types(0, 1) == 2);
  CHECK_THROWS_AS(hintikka::count_types(1, 3), OverflowError);
  CHECK_THROWS_AS(hintikka::count_types(2, 2), OverflowError);
}

TEST_CASE("the abstract type universe at level one") {
  std::vector<bisim::CanonicalType> types = hintikka::all_types({"p"}, 1);
  REQUIRE(types.size() == 8);
  for (std::size_t i = 1; i < types.size(); ++i) {
    CHECK(types[i - 1] < types[i]);
  }
  for (const auto& t : types) {
    Formula phi = hintikka::formula_of_type(t, {"p"});
    CHECK(phi.modal_depth() == 1);
  }
  CHECK_THROWS_AS(hintikka::all_types({"p"}, 3), OverflowError);

  // the realized team sets never exceed the abstract count
  oracle::enumerate_models(3, {"p"}, [&](const KripkeModel& m) {
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m.world_count()); ++mask) {
      CHECK(hintikka::hintikka_team_set(m, Team{mask}, 1).size() <= 8);
    }
  });
}

TEST_CASE("separating formulas separate") {
  KripkeModel w = two_world_witness();
  Team both = Team::single(0).add(1);
  Team second = Team::single(1);
  auto sep = hintikka::separating_formula(w, both, w, second, 2);
  REQUIRE(sep.has_value());
  CHECK_FALSE(sep->holds_on_first);
  CHECK(sep->formula.is_ml());
  CHECK(semantics::eval(w, second, sep->formula));
  CHECK_FALSE(semantics::eval(w, both, sep->formula));

  CHECK_FALSE(hintikka::separating_formula(w, both, w, both, 3).has_value());

  // random pairs: when a separator exists it evaluates as promised
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    KripkeModel m1 = random_model(seed + 41, 3, 0.5, {"p"});
    KripkeModel m2 = random_model(seed + 81, 3, 0.5, {"p"});
    for (std::uint64_t t1 = 1; t1 < 8; t1 += 2) {
      for (std::uint64_t t2 = 1; t2 < 8; t2 += 3) {
        auto s = hintikka::separating_formula(m1, Team{t1}, m2, Team{t2}, 2);
        if (!s) continue;
        const KripkeModel& holds_m = s->holds_on_first ? m1 : m2;
        const KripkeModel& fails_m = s->holds_on_first ? m2 : m1;
        Team holds_t = s->holds_on_first ? Team{t1} : Team{t2};
        Team fails_t = s->holds_on_first ? Team{t2} : Team{t1};
        CHECK(semantics::eval(holds_m, holds_t, s->formula));
        CHECK_FALSE(semantics::eval(fails_m, fails_t, s->formula));
      }
    }
  }
}
