#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "teamsem/formula.hpp"
#include "teamsem/kripke.hpp"

namespace teamsem::bisim {

/// The canonical bisimilarity type of a pointed model at a given level.
/// Two pointed models have equal types at level k exactly when they are
/// k-bisimilar. Ordering and equality are structural, so types computed on
/// different models are directly comparable.
struct CanonicalType {
  int level = 0;
  /// Truth of each declared variable at the world, bit i = variable i.
  std::uint64_t cell = 0;
  /// Distinct successor types at level-1, canonically sorted.
  std::vector<CanonicalType> successors;

  bool operator==(const CanonicalType& o) const;
  bool operator!=(const CanonicalType& o) const { return !(*this == o); }
  /// Canonical order: cell (positive literals first, in variable order),
  /// then successor lists lexicographically.
  bool operator<(const CanonicalType& o) const;

  /// Deterministic serialization; equal strings iff equal types.
  std::string key() const;
};

/// Level-k type of one world, computed bottom-up over the whole model.
CanonicalType ktype(const KripkeModel& m, int world, int k);
/// Level-k types of every world; cheaper than repeated ktype calls.
std::vector<CanonicalType> ktype_all(const KripkeModel& m, int k);

/// Distinct types of the team members at level k, canonically sorted.
std::vector<CanonicalType> team_types(const KripkeModel& m, Team t, int k);

/// Teams are k-bisimilar when they realize the same set of level-k types.
/// Both teams must be nonempty.
bool team_kbisim(const KripkeModel& m1, Team t1, const KripkeModel& m2, Team t2, int k);

/// Unbounded team bisimilarity via partition refinement to a fixed point on
/// the disjoint union. Both teams must be nonempty.
bool team_full_bisim(const KripkeModel& m1, Team t1, const KripkeModel& m2, Team t2);

/// Smallest k <= kmax at which the teams are not k-bisimilar, if any.
std::optional<int> distinguishing_k(const KripkeModel& m1, Team t1, const KripkeModel& m2,
                                    Team t2, int kmax);

struct BisimVerdict {
  bool bisimilar = false;
  /// Smallest separating level, present when not bisimilar.
  std::optional<int> distinguishing_k;
  /// ML formula holding on one team and failing on the other (filled in by
  /// the characteristic-formula layer, not here).
  std::optional<Formula> separating;
  bool separating_holds_on_first = true;
};

/// Bounded check when k is given, full bisimilarity otherwise.
BisimVerdict compare_teams(const KripkeModel& m1, Team t1, const KripkeModel& m2, Team t2,
                           std::optional<int> k);

}  // namespace teamsem::bisim
