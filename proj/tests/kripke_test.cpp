#include <doctest.h>

#include <set>

#include "teamsem/bisim.hpp"
#include "teamsem/kripke.hpp"

using namespace teamsem;

namespace {

const char* kM0 = R"({
  "variables": ["p", "q"],
  "worlds": ["a", "b", "c"],
  "edges": [["a", "b"], ["a", "c"], ["b", "b"]],
  "valuation": {"p": ["a", "b"], "q": ["c"]},
  "teams": {"T0": ["a", "c"]}
})";

}  // namespace

TEST_CASE("load_model reads the example file") {
  ModelFile mf = load_model(kM0);
  const KripkeModel& m = mf.model;
  CHECK(m.world_count() == 3);
  CHECK(m.variable_count() == 2);
  CHECK(m.has_edge(0, 1));
  CHECK(m.has_edge(1, 1));
  CHECK_FALSE(m.has_edge(2, 0));
  CHECK(m.holds(0, 0));
  CHECK_FALSE(m.holds(1, 1));
  REQUIRE(mf.teams.count("T0"));
  CHECK(mf.teams.at("T0").size() == 2);
}

TEST_CASE("load_model rejects malformed files") {
  CHECK_THROWS_AS(load_model("{"), ModelError);
  CHECK_THROWS_AS(
      load_model(R"({"variables":[],"worlds":[],"edges":[],"valuation":{}})"), ModelError);
  CHECK_THROWS_AS(load_model(R"({"variables":[],"worlds":["a","a"],"edges":[],"valuation":{}})"),
                  ModelError);
  // dangling references
  CHECK_THROWS_AS(
      load_model(R"({"variables":[],"worlds":["a"],"edges":[["a","z"]],"valuation":{}})"),
      ModelError);
  CHECK_THROWS_AS(
      load_model(R"({"variables":[],"worlds":["a"],"edges":[],"valuation":{"p":["a"]}})"),
      ModelError);
  CHECK_THROWS_AS(load_model(
                      R"({"variables":[],"worlds":["a"],"edges":[],"valuation":{},"teams":{"T":["z"]}})"),
                  ModelError);
  // unknown keys
  CHECK_THROWS_AS(
      load_model(R"({"variables":[],"worlds":["a"],"edges":[],"valuation":{},"extra":1})"),
      ModelError);
  // missing keys
  CHECK_THROWS_AS(load_model(R"({"worlds":["a"]})"), ModelError);
}

TEST_CASE("save and load round trip") {
  ModelFile mf = load_model(kM0);
  ModelFile back = load_model(save_model(mf));
  CHECK(back.model == mf.model);
  CHECK(back.teams.at("T0") == mf.teams.at("T0"));

  KripkeModel bare({"p"}, {"w"});
  std::string saved = save_model(ModelFile{bare, {}});
  CHECK(saved.find("\"edges\": []") != std::string::npos);
  CHECK(load_model(saved).model == bare);
}

TEST_CASE("image") {
  ModelFile mf = load_model(kM0);
  Team a = team_from_names(mf.model, {"a"});
  CHECK(image(mf.model, a) == team_from_names(mf.model, {"b", "c"}));
  CHECK(image(mf.model, team_from_names(mf.model, {"c"})).is_empty());
  CHECK(image(mf.model, Team::empty()).is_empty());

  // image distributes over unions
  for (std::uint64_t t1 = 0; t1 < 8; ++t1) {
    for (std::uint64_t t2 = 0; t2 < 8; ++t2) {
      CHECK(image(mf.model, Team{t1 | t2}) ==
            (image(mf.model, Team{t1}) | image(mf.model, Team{t2})));
    }
  }
}

TEST_CASE("neighborhood restriction") {
  ModelFile mf = load_model(kM0);
  Team a = team_from_names(mf.model, {"a"});

  Neighborhood n0 = neighborhood(mf.model, a, 0);
  CHECK(n0.model.world_count() == 1);
  CHECK(n0.model.world_name(0) == "a");
  CHECK(n0.model.successors(0) == 0);
  CHECK(n0.team == Team::single(0));

  Neighborhood n1 = neighborhood(mf.model, a, 1);
  CHECK(n1.model.world_count() == 3);
  CHECK(n1.model.has_edge(0, 1));
  CHECK(n1.model.has_edge(1, 1));

  Neighborhood nc = neighborhood(mf.model, team_from_names(mf.model, {"c"}), 5);
  CHECK(nc.model.world_count() == 1);
  CHECK(nc.model.world_name(0) == "c");

  // monotone in d, and stable once d reaches the world count
  KripkeModel rnd = random_model(42, 6, 0.3, {"p"});
  Team t = Team::single(0);
  int prev = 0;
  for (int d = 0; d <= 7; ++d) {
    int size = neighborhood(rnd, t, d).model.world_count();
    CHECK(size >= prev);
    prev = size;
  }
  CHECK(neighborhood(rnd, t, 6).model.world_count() ==
        neighborhood(rnd, t, 20).model.world_count());

  // the undirected variant may only see more worlds
  CHECK(neighborhood(rnd, t, 2, true).model.world_count() >=
        neighborhood(rnd, t, 2).model.world_count());
}

TEST_CASE("disjoint union") {
  ModelFile mf = load_model(kM0);
  DisjointUnion u = disjoint_union(mf.model, mf.model);
  CHECK(u.model.world_count() == 6);

  // injective and jointly surjective renamings
  std::set<int> seen;
  for (int w : u.left) CHECK(seen.insert(w).second);
  for (int w : u.right) CHECK(seen.insert(w).second);
  CHECK(static_cast<int>(seen.size()) == u.model.world_count());

  // no edges across the two sides
  for (int w = 0; w < 3; ++w) {
    for (int v = 0; v < 3; ++v) {
      CHECK_FALSE(u.model.has_edge(u.left[w], u.right[v]));
      CHECK_FALSE(u.model.has_edge(u.right[w], u.left[v]));
      CHECK(u.model.has_edge(u.left[w], u.left[v]) == mf.model.has_edge(w, v));
      CHECK(u.model.has_edge(u.right[w], u.right[v]) == mf.model.has_edge(w, v));
    }
  }

  // copies keep their bisimilarity types
  for (int w = 0; w < 3; ++w) {
    for (int k = 0; k <= 3; ++k) {
      CHECK(bisim::ktype(mf.model, w, k) == bisim::ktype(u.model, u.left[w], k));
      CHECK(bisim::ktype(mf.model, w, k) == bisim::ktype(u.model, u.right[w], k));
    }
  }

  KripkeModel other({"p"}, {"x"});
  CHECK_THROWS_AS(disjoint_union(mf.model, other), ModelError);
}

TEST_CASE("random_model is deterministic") {
  KripkeModel a = random_model(123, 5, 0.5, {"p", "q"});
  KripkeModel b = random_model(123, 5, 0.5, {"p", "q"});
  CHECK(a == b);
  CHECK(!(a == random_model(124, 5, 0.5, {"p", "q"})));

  KripkeModel none = random_model(9, 4, 0.0, {"p"});
  KripkeModel full = random_model(9, 4, 1.0, {"p"});
  for (int w = 0; w < 4; ++w) {
    CHECK(none.successors(w) == 0);
    CHECK(full.successors(w) == full.all_worlds_mask());
  }
}

TEST_CASE("team helpers") {
  ModelFile mf = load_model(kM0);
  CHECK_THROWS_AS(team_from_names(mf.model, {"nope"}), ModelError);
  Team t = team_from_names(mf.model, {"c", "a"});
  CHECK(team_names(mf.model, t) == std::vector<std::string>{"a", "c"});
  CHECK(t.size() == 2);
  CHECK(t.contains(0));
  CHECK_FALSE(t.contains(1));
}
