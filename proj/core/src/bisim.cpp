#include "teamsem/bisim.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace teamsem::bisim {

namespace {

// positive literal before negative, in declared variable order
int compare_cells(std::uint64_t a, std::uint64_t b) {
  if (a == b) return 0;
  for (int i = 0; i < 64; ++i) {
    bool ta = (a >> i) & 1;
    bool tb = (b >> i) & 1;
    if (ta != tb) return ta ? -1 : 1;
  }
  return 0;
}

int compare_types(const CanonicalType& a, const CanonicalType& b) {
  if (a.level != b.level) return a.level < b.level ? -1 : 1;
  if (int c = compare_cells(a.cell, b.cell)) return c;
  std::size_t n = std::min(a.successors.size(), b.successors.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = compare_types(a.successors[i], b.successors[i])) return c;
  }
  if (a.successors.size() != b.successors.size())
    return a.successors.size() < b.successors.size() ? -1 : 1;
  return 0;
}

}  // namespace

bool CanonicalType::operator==(const CanonicalType& o) const { return compare_types(*this, o) == 0; }
bool CanonicalType::operator<(const CanonicalType& o) const { return compare_types(*this, o) < 0; }

std::string CanonicalType::key() const {
  std::string out = std::to_string(cell);
  if (level > 0) {
    out += '[';
    for (std::size_t i = 0; i < successors.size(); ++i) {
      if (i) out += ' ';
      out += successors[i].key();
    }
    out += ']';
  }
  return out;
}

std::vector<CanonicalType> ktype_all(const KripkeModel& m, int k) {
  if (k < 0) throw Error("ktype: level must be >= 0");
  const int n = m.world_count();
  std::vector<CanonicalType> cur(n);
  for (int w = 0; w < n; ++w) {
    std::uint64_t cell = 0;
    for (int x = 0; x < m.variable_count(); ++x) {
      if (m.holds(x, w)) cell |= std::uint64_t{1} << x;
    }
    cur[w] = CanonicalType{0, cell, {}};
  }
  for (int level = 1; level <= k; ++level) {
    std::vector<CanonicalType> next(n);
    for (int w = 0; w < n; ++w) {
      std::vector<CanonicalType> succs;
      for (int v = 0; v < n; ++v) {
        if (m.has_edge(w, v)) succs.push_back(cur[v]);
      }
      std::sort(succs.begin(), succs.end());
      succs.erase(std::unique(succs.begin(), succs.end()), succs.end());
      next[w] = CanonicalType{level, cur[w].cell, std::move(succs)};
    }
    cur = std::move(next);
  }
  return cur;
}

CanonicalType ktype(const KripkeModel& m, int world, int k) {
  return ktype_all(m, k)[world];
}

std::vector<CanonicalType> team_types(const KripkeModel& m, Team t, int k) {
  std::vector<CanonicalType> all = ktype_all(m, k);
  std::vector<CanonicalType> out;
  for (int w = 0; w < m.world_count(); ++w) {
    if (t.contains(w)) out.push_back(all[w]);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

void require_nonempty(Team t1, Team t2) {
  if (t1.is_empty() || t2.is_empty()) throw Error("team bisimilarity requires nonempty teams");
}

// Successive refinement of world classes on one model; ids[level][world].
// Level j+1 distinguishes by (own class, set of successor classes), which
// matches the inductive definition of level-(j+1) bisimilarity.
std::vector<std::vector<int>> refine_levels(const KripkeModel& m, int levels) {
  const int n = m.world_count();
  std::vector<std::vector<int>> ids;
  std::vector<int> cur(n);
  {
    std::map<std::uint64_t, int> intern;
    std::vector<std::uint64_t> cells(n);
    for (int w = 0; w < n; ++w) {
      std::uint64_t cell = 0;
      for (int x = 0; x < m.variable_count(); ++x) {
        if (m.holds(x, w)) cell |= std::uint64_t{1} << x;
      }
      cells[w] = cell;
      intern.emplace(cell, 0);
    }
    int next = 0;
    for (auto& [cell, id] : intern) id = next++;
    for (int w = 0; w < n; ++w) cur[w] = intern.at(cells[w]);
  }
  ids.push_back(cur);
  for (int level = 1; level <= levels; ++level) {
    std::map<std::pair<int, std::vector<int>>, int> intern;
    std::vector<std::pair<int, std::vector<int>>> sig(n);
    for (int w = 0; w < n; ++w) {
      std::set<int> succ;
      for (int v = 0; v < n; ++v) {
        if (m.has_edge(w, v)) succ.insert(cur[v]);
      }
      sig[w] = {cur[w], std::vector<int>(succ.begin(), succ.end())};
      intern.emplace(sig[w], 0);
    }
    int next = 0;
    for (auto& [s, id] : intern) id = next++;
    std::vector<int> nxt(n);
    for (int w = 0; w < n; ++w) nxt[w] = intern.at(sig[w]);
    cur = std::move(nxt);
    ids.push_back(cur);
  }
  return ids;
}

std::set<int> team_classes(const std::vector<int>& ids, Team t, int n) {
  std::set<int> out;
  for (int w = 0; w < n; ++w) {
    if (t.contains(w)) out.insert(ids[w]);
  }
  return out;
}

}  // namespace

bool team_kbisim(const KripkeModel& m1, Team t1, const KripkeModel& m2, Team t2, int k) {
  require_nonempty(t1, t2);
  DisjointUnion u = disjoint_union(m1, m2);
  std::vector<std::vector<int>> ids = refine_levels(u.model, k);
  return team_classes(ids[k], lift_team(u.left, t1), u.model.world_count()) ==
         team_classes(ids[k], lift_team(u.right, t2), u.model.world_count());
}

bool team_full_bisim(const KripkeModel& m1, Team t1, const KripkeModel& m2, Team t2) {
  require_nonempty(t1, t2);
  DisjointUnion u = disjoint_union(m1, m2);
  // refinement stabilizes after at most |W| rounds; one extra level is
  // computed so the stable partition is detected by comparison
  const int n = u.model.world_count();
  std::vector<std::vector<int>> ids = refine_levels(u.model, n + 1);
  int stable = n + 1;
  for (int level = 1; level <= n + 1; ++level) {
    if (ids[level] == ids[level - 1]) {
      stable = level - 1;
      break;
    }
  }
  return team_classes(ids[stable], lift_team(u.left, t1), n) ==
         team_classes(ids[stable], lift_team(u.right, t2), n);
}

std::optional<int> distinguishing_k(const KripkeModel& m1, Team t1, const KripkeModel& m2,
                                    Team t2, int kmax) {
  require_nonempty(t1, t2);
  if (kmax < 0) throw Error("distinguishing_k: kmax must be >= 0");
  DisjointUnion u = disjoint_union(m1, m2);
  std::vector<std::vector<int>> ids = refine_levels(u.model, kmax);
  Team l = lift_team(u.left, t1);
  Team r = lift_team(u.right, t2);
  const int n = u.model.world_count();
  for (int k = 0; k <= kmax; ++k) {
    if (team_classes(ids[k], l, n) != team_classes(ids[k], r, n)) return k;
  }
  return std::nullopt;
}

BisimVerdict compare_teams(const KripkeModel& m1, Team t1, const KripkeModel& m2, Team t2,
                           std::optional<int> k) {
  BisimVerdict v;
  if (k) {
    v.bisimilar = team_kbisim(m1, t1, m2, t2, *k);
    if (!v.bisimilar) v.distinguishing_k = distinguishing_k(m1, t1, m2, t2, *k);
  } else {
    v.bisimilar = team_full_bisim(m1, t1, m2, t2);
    if (!v.bisimilar)
      v.distinguishing_k = distinguishing_k(m1, t1, m2, t2, m1.world_count() + m2.world_count());
  }
  return v;
}

}  // namespace teamsem::bisim
