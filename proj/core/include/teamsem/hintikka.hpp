#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "teamsem/bisim.hpp"
#include "teamsem/formula.hpp"
#include "teamsem/kripke.hpp"

namespace teamsem::hintikka {

/// ML formula of modal depth exactly equal to the type's level that holds
/// at a world iff the world has this type. Identical types yield
/// byte-identical formulas.
Formula formula_of_type(const bisim::CanonicalType& type,
                        const std::vector<std::string>& variables);

/// Characteristic formula of the pointed model (m, w) at level k: holds at
/// (m', w') exactly when (m', w') is k-bisimilar to (m, w).
Formula hintikka_world(const KripkeModel& m, int world, int k);

/// Characteristic formulas of the team's members, deduplicated and in
/// canonical type order. Its size is the number of level-k types in t.
std::vector<Formula> hintikka_team_set(const KripkeModel& m, Team t, int k);

/// Characteristic formula of (m, t) at level k: the conjunction of E f over
/// the team set with the split disjunction over the team set. Satisfied by
/// exactly the teams k-bisimilar to t. Team must be nonempty.
Formula hintikka_team(const KripkeModel& m, Team t, int k);

/// A team property given by finitely many representatives; all teams must
/// be nonempty and all models share one variable universe.
struct PropertyClass {
  std::vector<std::pair<KripkeModel, Team>> members;
  int level = 0;
};

/// The defining formula of a k-bisimulation-invariant property: the
/// classical disjunction of the distinct characteristic team formulas of
/// the representatives. A team satisfies it exactly when it is k-bisimilar
/// to some representative.
Formula express_property(const PropertyClass& cls);

/// Number of level-k types over nvars variables: t(0) = 2^nvars,
/// t(k+1) = 2^nvars * 2^t(k). Throws OverflowError instead of wrapping.
std::uint64_t count_types(int nvars, int k);

/// Every abstract level-k type over the given variables, canonically
/// sorted. Refuses universes with more than `cap` types.
std::vector<bisim::CanonicalType> all_types(const std::vector<std::string>& variables, int k,
                                            std::uint64_t cap = 1 << 20);

struct Separator {
  Formula formula;
  /// True when the formula holds on (m1, t1) and fails on (m2, t2).
  bool holds_on_first;
};

/// ML formula witnessing that the teams are not k-bisimilar, if they are
/// not: true on one team, false on the other, of the smallest separating
/// depth.
std::optional<Separator> separating_formula(const KripkeModel& m1, Team t1,
                                            const KripkeModel& m2, Team t2, int k);

}  // namespace teamsem::hintikka
