#include "teamsem/hintikka.hpp"

#include <algorithm>
#include <map>

namespace teamsem::hintikka {

using bisim::CanonicalType;

namespace {

Formula fold_conj(const std::vector<Formula>& parts) {
  if (parts.empty()) return Formula::top();
  Formula out = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) out = Formula::conj(parts[i], out);
  return out;
}

Formula fold_split_or(const std::vector<Formula>& parts) {
  if (parts.empty()) return Formula::bot();
  Formula out = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) out = Formula::split_or(parts[i], out);
  return out;
}

Formula fold_class_or(const std::vector<Formula>& parts) {
  if (parts.empty()) throw Error("classical disjunction over an empty set");
  Formula out = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) out = Formula::class_or(parts[i], out);
  return out;
}

}  // namespace

namespace {

// a falsum of the requested modal depth; keeps characteristic formulas at
// depth exactly k when a world has no successors
Formula deep_bot(int depth) {
  Formula out = Formula::bot();
  for (int i = 0; i < depth; ++i) out = Formula::conj(Formula::bot(), Formula::box(out));
  return out;
}

}  // namespace

Formula formula_of_type(const CanonicalType& type, const std::vector<std::string>& variables) {
  std::vector<Formula> parts;
  for (std::size_t x = 0; x < variables.size(); ++x) {
    parts.push_back((type.cell >> x) & 1 ? Formula::prop(variables[x])
                                         : Formula::neg_prop(variables[x]));
  }
  if (type.level > 0) {
    std::vector<Formula> succ_formulas;
    succ_formulas.reserve(type.successors.size());
    for (const CanonicalType& s : type.successors)
      succ_formulas.push_back(formula_of_type(s, variables));
    for (const Formula& f : succ_formulas) parts.push_back(Formula::diamond(f));
    parts.push_back(Formula::box(succ_formulas.empty() ? deep_bot(type.level - 1)
                                                       : fold_split_or(succ_formulas)));
  }
  return fold_conj(parts);
}

Formula hintikka_world(const KripkeModel& m, int world, int k) {
  return formula_of_type(bisim::ktype(m, world, k), m.variables());
}

std::vector<Formula> hintikka_team_set(const KripkeModel& m, Team t, int k) {
  if (t.is_empty()) throw Error("hintikka_team_set: team must be nonempty");
  std::vector<Formula> out;
  for (const CanonicalType& type : bisim::team_types(m, t, k))
    out.push_back(formula_of_type(type, m.variables()));
  return out;
}

Formula hintikka_team(const KripkeModel& m, Team t, int k) {
  std::vector<Formula> set = hintikka_team_set(m, t, k);
  std::vector<Formula> witnessed;
  witnessed.reserve(set.size());
  for (const Formula& f : set) witnessed.push_back(Formula::exists(f));
  return Formula::conj(fold_conj(witnessed), fold_split_or(set));
}

Formula express_property(const PropertyClass& cls) {
  if (cls.members.empty()) throw Error("express_property: the class has no representatives");
  const std::vector<std::string>& vars = cls.members.front().first.variables();
  // one disjunct per distinct type set, keyed canonically
  std::map<std::string, Formula> distinct;
  for (const auto& [model, team] : cls.members) {
    if (team.is_empty()) throw Error("express_property: teams must be nonempty");
    if (model.variables() != vars)
      throw Error("express_property: representatives must share one variable universe");
    std::string key;
    for (const CanonicalType& type : bisim::team_types(model, team, cls.level)) {
      key += type.key();
      key += '|';
    }
    distinct.emplace(std::move(key), hintikka_team(model, team, cls.level));
  }
  std::vector<Formula> disjuncts;
  disjuncts.reserve(distinct.size());
  for (auto& [key, f] : distinct) disjuncts.push_back(std::move(f));
  return fold_class_or(disjuncts);
}

std::uint64_t count_types(int nvars, int k) {
  if (nvars < 0 || k < 0) throw Error("count_types: arguments must be >= 0");
  if (nvars > 62) throw OverflowError("count_types: too many variables");
  std::uint64_t t = std::uint64_t{1} << nvars;
  for (int i = 0; i < k; ++i) {
    if (t >= 64 - static_cast<std::uint64_t>(nvars))
      throw OverflowError("count_types: value exceeds 64 bits at level " + std::to_string(i + 1));
    t = (std::uint64_t{1} << nvars) << t;
  }
  return t;
}

std::vector<CanonicalType> all_types(const std::vector<std::string>& variables, int k,
                                     std::uint64_t cap) {
  // refuse inputs whose type universe cannot be materialized
  std::uint64_t total = count_types(static_cast<int>(variables.size()), k);
  if (total > cap)
    throw OverflowError("all_types: " + std::to_string(total) + " types exceed the cap");

  std::vector<CanonicalType> cur;
  const std::uint64_t cells = std::uint64_t{1} << variables.size();
  for (std::uint64_t cell = 0; cell < cells; ++cell) cur.push_back(CanonicalType{0, cell, {}});
  std::sort(cur.begin(), cur.end());
  for (int level = 1; level <= k; ++level) {
    std::vector<CanonicalType> next;
    for (std::uint64_t cell = 0; cell < cells; ++cell) {
      const std::uint64_t subsets = std::uint64_t{1} << cur.size();
      for (std::uint64_t sub = 0; sub < subsets; ++sub) {
        std::vector<CanonicalType> succs;
        for (std::size_t i = 0; i < cur.size(); ++i) {
          if ((sub >> i) & 1) succs.push_back(cur[i]);
        }
        std::sort(succs.begin(), succs.end());
        next.push_back(CanonicalType{level, cell, std::move(succs)});
      }
    }
    std::sort(next.begin(), next.end());
    cur = std::move(next);
  }
  return cur;
}

std::optional<Separator> separating_formula(const KripkeModel& m1, Team t1,
                                            const KripkeModel& m2, Team t2, int k) {
  std::optional<int> level = bisim::distinguishing_k(m1, t1, m2, t2, k);
  if (!level) return std::nullopt;
  std::vector<CanonicalType> s1 = bisim::team_types(m1, t1, *level);
  std::vector<CanonicalType> s2 = bisim::team_types(m2, t2, *level);
  auto subset = [](const std::vector<CanonicalType>& a, const std::vector<CanonicalType>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  // the split disjunction over a team's own type formulas always holds on
  // that team, and fails on the other team iff some type there is unmatched
  const bool use_first = !subset(s2, s1);
  const std::vector<CanonicalType>& base = use_first ? s1 : s2;
  std::vector<Formula> fs;
  for (const CanonicalType& t : base) fs.push_back(formula_of_type(t, m1.variables()));
  return Separator{fold_split_or(fs), use_first};
}

}  // namespace teamsem::hintikka
