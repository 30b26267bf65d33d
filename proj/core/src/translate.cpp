#include "teamsem/fo.hpp"
#include "teamsem/hintikka.hpp"

namespace teamsem::fo {

namespace {

// x, y, z, x3, x4, ... skipping the chosen free variable
std::string depth_var(const std::string& base, int depth) {
  std::string name;
  if (depth == 0) return base;
  if (depth == 1) name = "y";
  else if (depth == 2) name = "z";
  else name = "x" + std::to_string(depth);
  if (name == base) name = "x" + std::to_string(depth) + "_";
  return name;
}

FOFormula translate(const Formula& f, const std::string& base, int depth) {
  const std::string cur = depth_var(base, depth);
  switch (f.kind()) {
    case Kind::Top: return FOFormula::truth();
    case Kind::Bot: return FOFormula::falsity();
    case Kind::Prop: return FOFormula::rel("W_" + f.name(), {cur});
    case Kind::NegProp: return FOFormula::fo_not(FOFormula::rel("W_" + f.name(), {cur}));
    case Kind::And:
      return FOFormula::fo_and(translate(f.arg(0), base, depth), translate(f.arg(1), base, depth));
    case Kind::SplitOr:
      // pointwise, split disjunction is classical disjunction
      return FOFormula::fo_or(translate(f.arg(0), base, depth), translate(f.arg(1), base, depth));
    case Kind::Diamond: {
      std::string next = depth_var(base, depth + 1);
      return FOFormula::exists(next, FOFormula::fo_and(FOFormula::rel("E", {cur, next}),
                                                       translate(f.arg(0), base, depth + 1)));
    }
    case Kind::Box: {
      std::string next = depth_var(base, depth + 1);
      return FOFormula::forall(next, FOFormula::implies(FOFormula::rel("E", {cur, next}),
                                                        translate(f.arg(0), base, depth + 1)));
    }
    default:
      throw FOError("standard translation requires an ML formula");
  }
}

}  // namespace

FOFormula standard_translation(const Formula& ml, const std::string& free_var) {
  if (!ml.is_ml()) throw FOError("standard translation requires an ML formula");
  return translate(ml, free_var, 0);
}

FOFormula chi_to_fo(const KripkeModel& m, Team t, int k) {
  if (t.is_empty()) throw FOError("chi_to_fo: team must be nonempty");
  std::vector<Formula> set = hintikka::hintikka_team_set(m, t, k);
  std::vector<FOFormula> translated;
  translated.reserve(set.size());
  for (const Formula& f : set) translated.push_back(standard_translation(f, "x"));

  // each type is witnessed inside the team ...
  std::vector<FOFormula> conjuncts;
  for (const FOFormula& g : translated) {
    conjuncts.push_back(FOFormula::exists("x", FOFormula::fo_and(FOFormula::rel("T", {"x"}), g)));
  }
  // ... and every team member realizes one of the types
  FOFormula any = translated.back();
  for (std::size_t i = translated.size() - 1; i-- > 0;) any = FOFormula::fo_or(translated[i], any);
  conjuncts.push_back(
      FOFormula::forall("x", FOFormula::implies(FOFormula::rel("T", {"x"}), any)));

  FOFormula out = conjuncts.back();
  for (std::size_t i = conjuncts.size() - 1; i-- > 0;) out = FOFormula::fo_and(conjuncts[i], out);
  return out;
}

}  // namespace teamsem::fo
