#pragma once

#include <memory>
#include <span>

#include "teamsem/formula.hpp"
#include "teamsem/kripke.hpp"

namespace teamsem::fo {
class AtomRegistry;
}

namespace teamsem::semantics {

enum class Strategy : std::uint8_t {
  /// Literal clause-by-clause evaluation; splits enumerate all covers.
  General,
  /// Maximal ML subformulas are evaluated pointwise (flatness), everything
  /// else as in General. The default.
  FlatFastpath,
};

struct EvalConfig {
  Strategy strategy = Strategy::FlatFastpath;
  bool memoize = true;
  /// Cap on the team size for cover/subteam enumeration (split disjunction,
  /// tensor, subteam implication, non-flat diamond witnesses).
  int max_split_team = 16;
  /// Needed to evaluate `atom name(...)` applications.
  const fo::AtomRegistry* atoms = nullptr;
  /// Fault-injection hook for the verification engine's self-test: drops
  /// the successor-cover requirement of the diamond clause.
  bool mutant_diamond_drop_forward = false;
};

/// Evaluates one formula against many teams of one model, sharing the
/// memo table across calls. Not thread-safe; create one per thread.
class BatchEvaluator {
 public:
  BatchEvaluator(const KripkeModel& m, Formula f, EvalConfig cfg = {});
  ~BatchEvaluator();
  BatchEvaluator(BatchEvaluator&&) noexcept;
  BatchEvaluator& operator=(BatchEvaluator&&) noexcept;

  bool eval(Team t);
  /// Classical single-world evaluation; requires the formula to be ML.
  bool eval_pointed(int world);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Team satisfaction. Every call gets a fresh memo table.
bool eval(const KripkeModel& m, Team t, const Formula& f, const EvalConfig& cfg = {});

/// Standard Kripke semantics at a single world; requires f to be ML.
bool eval_pointed(const KripkeModel& m, int world, const Formula& f);

/// Atom satisfaction predicates (arguments must be ML).
bool dep_holds(const KripkeModel& m, Team t, std::span<const Formula> args);
bool indep_holds(const KripkeModel& m, Team t, std::span<const Formula> p,
                 std::span<const Formula> r, std::span<const Formula> q);
bool incl_holds(const KripkeModel& m, Team t, std::span<const Formula> lhs,
                std::span<const Formula> rhs);
bool gen_atom_holds(const KripkeModel& m, Team t, const std::string& atom_name,
                    std::span<const Formula> args, const fo::AtomRegistry& registry);

}  // namespace teamsem::semantics
