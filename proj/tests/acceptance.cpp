// Acceptance suite: one binary, one pass/fail line per criterion.
//
//   acceptance                 runs every criterion
//   acceptance --criterion N   runs a single one
//
// Each criterion pins its own bounds and tolerances (all checks are exact);
// the process exits nonzero when any selected criterion fails.

#include <chrono>
#include <cstring>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "teamsem/bisim.hpp"
#include "teamsem/fo.hpp"
#include "teamsem/hintikka.hpp"
#include "teamsem/kripke.hpp"
#include "teamsem/oracle.hpp"
#include "teamsem/semantics.hpp"

using namespace teamsem;
using oracle::Bounds;
using oracle::CheckReport;
using oracle::Verdict;

namespace {

struct Outcome {
  bool pass = false;
  long long instances = 0;
  std::string note;
};

Bounds standard_bounds() {
  Bounds b;
  b.max_worlds = 3;
  b.vars = {"p", "q"};
  b.max_modal_depth = 2;
  b.exhaustive_formula_size = 4;
  b.sample_count = 200;
  b.sample_formula_size = 10;
  b.seed = 0x7ea35;
  b.max_k = 2;
  return b;
}

Outcome from_report(const CheckReport& r) {
  Outcome o;
  o.pass = r.verdict == Verdict::Verified;
  o.instances = r.instances;
  if (!o.pass) o.note = r.to_line();
  return o;
}

// 1. team truth of ML formulas is pointwise truth, with the evaluator run in
//    its literal clause-by-clause mode
Outcome criterion_flatness() {
  return from_report(oracle::claim_suite_flatness(standard_bounds()));
}

// 2. dep over 1..3 proposition letters is team-equivalent to its rewriting
Outcome criterion_dep_encoding() {
  return from_report(oracle::claim_suite_dep_encoding(standard_bounds()));
}

// 3. a split disjunction of characteristic formulas holds exactly when every
//    member world matches one of them
Outcome criterion_splitjunction() {
  return from_report(oracle::claim_suite_splitjunction(standard_bounds()));
}

// 4. the characteristic team formula is satisfied by exactly the k-bisimilar
//    teams, k in {0, 1, 2}
Outcome criterion_team_char() {
  return from_report(oracle::claim_suite_team_char_formula(standard_bounds()));
}

// 5. the class formula of the "some member world satisfies p" property,
//    built from its two-world representatives at level 0, agrees with the
//    property on every nonempty team of every model within bounds
Outcome criterion_express() {
  Outcome o;
  Formula target = Formula::exists(Formula::prop("p"));

  hintikka::PropertyClass cls;
  cls.level = 0;
  oracle::enumerate_models(2, {"p"}, [&](const KripkeModel& m) {
    for (Team t : oracle::all_teams(m, false)) {
      if (semantics::eval(m, t, target)) cls.members.emplace_back(m, t);
    }
  });
  Formula phi = hintikka::express_property(cls);

  o.pass = true;
  oracle::enumerate_models(3, {"p"}, [&](const KripkeModel& m) {
    if (!o.pass) return;
    semantics::BatchEvaluator direct(m, target);
    semantics::BatchEvaluator via_class(m, phi);
    for (Team t : oracle::all_teams(m, false)) {
      ++o.instances;
      if (direct.eval(t) != via_class.eval(t)) {
        o.pass = false;
        o.note = "class formula disagrees on " + save_model({m, {{"T", t}}});
        return;
      }
    }
  });
  return o;
}

// 6. the pointed standard translation and the team-level translation of
//    characteristic formulas agree with modal evaluation
Outcome criterion_translation() {
  return from_report(oracle::claim_suite_standard_translation(standard_bounds()));
}

// 7. separations: the edge-free witness with the singleton collapse of the
//    independence fragment, and the union-closure separation
Outcome criterion_separations() {
  CheckReport collapse = oracle::claim_suite_edgefree_collapse(standard_bounds());
  Bounds union_bounds = standard_bounds();
  union_bounds.sample_count = 1000;
  CheckReport unions = oracle::claim_suite_union_closure(union_bounds);
  Outcome o;
  o.pass = collapse.verdict == Verdict::Verified && unions.verdict == Verdict::Verified;
  o.instances = collapse.instances + unions.instances;
  if (!o.pass) o.note = collapse.to_line() + " / " + unions.to_line();
  return o;
}

// 8. the group-cover atom: native semantics vs its FO definition, and its
//    application to characteristic sets
Outcome criterion_group_cover() {
  return from_report(oracle::claim_suite_group_cover(standard_bounds()));
}

// 9. type counts and team-set cardinality bounds
Outcome criterion_type_counts() {
  Outcome o;
  o.pass = hintikka::count_types(1, 0) == 2 && hintikka::count_types(1, 1) == 8 &&
           hintikka::count_types(1, 2) == 512;
  o.instances = 3;
  if (!o.pass) {
    o.note = "count recurrence disagrees";
    return o;
  }
  oracle::enumerate_models(3, {"p"}, [&](const KripkeModel& m) {
    if (!o.pass) return;
    for (int k = 0; k <= 2; ++k) {
      std::uint64_t cap = hintikka::count_types(1, k);
      for (Team t : oracle::all_teams(m, false)) {
        ++o.instances;
        if (hintikka::hintikka_team_set(m, t, k).size() > cap) {
          o.pass = false;
          o.note = "team set exceeds the type count at level " + std::to_string(k);
          return;
        }
      }
    }
  });
  return o;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "flatness", criterion_flatness},
      {2, "dep-atom-encoding", criterion_dep_encoding},
      {3, "splitjunction", criterion_splitjunction},
      {4, "team-char-formula", criterion_team_char},
      {5, "class-formula-adequacy", criterion_express},
      {6, "standard-translation", criterion_translation},
      {7, "separations", criterion_separations},
      {8, "group-cover-atom", criterion_group_cover},
      {9, "type-counts", criterion_type_counts},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[i + 1]);
  }

  bool all_pass = true;
  for (const Criterion& c : criteria()) {
    if (only != 0 && c.id != only) continue;
    auto start = std::chrono::steady_clock::now();
    Outcome o = c.run();
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << c.id << " " << c.name
              << " (instances=" << o.instances << ", " << secs << "s)";
    if (!o.note.empty()) std::cout << "\n      " << o.note;
    std::cout << "\n";
    all_pass = all_pass && o.pass;
  }
  return all_pass ? 0 : 1;
}
