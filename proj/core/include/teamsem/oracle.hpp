#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "teamsem/formula.hpp"
#include "teamsem/kripke.hpp"

namespace teamsem::fo {
class AtomRegistry;
}

namespace teamsem::oracle {

/// Enumeration bounds for the verification engine. Given equal bounds and
/// seed, every check enumerates instances in the same order and produces
/// byte-identical report lines.
struct Bounds {
  int max_worlds = 3;
  std::vector<std::string> vars = {"p", "q"};
  bool include_empty_team = false;
  int max_modal_depth = 2;
  /// Formulas up to this AST size are enumerated exhaustively ...
  int exhaustive_formula_size = 4;
  /// ... and this many random formulas up to sample_formula_size are added.
  int sample_count = 300;
  int sample_formula_size = 10;
  std::uint64_t seed = 0x7ea35;
  int max_k = 2;
  /// Needed when checked formulas contain `atom` applications.
  const fo::AtomRegistry* atoms = nullptr;
};

enum class Verdict : std::uint8_t { Verified, Falsified, Skipped };

std::string to_string(Verdict v);

struct Counterexample {
  std::string model_a;  // model-file JSON; the relevant team is named "T"
  std::vector<std::string> team_a;
  std::optional<std::string> model_b;
  std::vector<std::string> team_b;
  std::string formula;
  std::string note;
};

struct CheckReport {
  std::string claim;
  Verdict verdict = Verdict::Skipped;
  long long instances = 0;
  double millis = 0;
  std::string details;
  std::optional<Counterexample> counterexample;

  /// Stable one-line form (no timing); counterexamples add indented lines.
  std::string to_line() const;
  std::string to_json() const;
};

/// Enumerates every model with 1..max_worlds worlds over the given
/// variables, deduplicated up to world renaming, in a fixed order.
void enumerate_models(int max_worlds, const std::vector<std::string>& vars,
                      const std::function<void(const KripkeModel&)>& fn);

std::vector<Team> all_teams(const KripkeModel& m, bool include_empty);

/// All ML formulas over the variables with AST size <= max_size and modal
/// depth <= max_depth, in a fixed order.
std::vector<Formula> enumerate_ml(const std::vector<std::string>& vars, int max_size,
                                  int max_depth);

/// Deterministic random formula source for the fuzz-style checks.
class FormulaSampler {
 public:
  FormulaSampler(std::uint64_t seed, std::vector<std::string> vars);
  Formula ml(int max_size, int max_depth);
  /// ML + classical disjunction + independence atoms.
  Formula emil_lor(int max_size, int max_depth);
  /// ML + inclusion atoms.
  Formula emincl(int max_size, int max_depth);
  /// ML + classical negation.
  Formula mtl(int max_size, int max_depth);

 private:
  Formula gen(int budget, int depth_left, int feature_mask);
  std::uint64_t next();
  std::uint64_t state_;
  std::vector<std::string> vars_;
};

/// Do f and g agree on every model/team within bounds? Teams are nonempty
/// unless the bounds include the empty team.
CheckReport equiv_check(const Formula& f, const Formula& g, const Bounds& b);

enum class ClosureProperty : std::uint8_t { Flat, DownwardClosed, UnionClosed, EmptyTeam };

CheckReport closure_check(const Formula& f, ClosureProperty prop, const Bounds& b);

struct KInvariance {
  int k;
};
struct FullInvariance {};
struct DLocality {
  int d;
};
using InvarianceMode = std::variant<KInvariance, FullInvariance, DLocality>;

using TeamPredicate = std::function<bool(const KripkeModel&, Team)>;

CheckReport invariance_check(const TeamPredicate& pred, const std::string& name,
                             InvarianceMode mode, const Bounds& b);
CheckReport invariance_check(const Formula& f, InvarianceMode mode, const Bounds& b);

/// The individual claims of the verification battery.
CheckReport claim_suite_flatness(const Bounds& b);
CheckReport claim_suite_dep_encoding(const Bounds& b);
CheckReport claim_suite_splitjunction(const Bounds& b);
CheckReport claim_suite_team_char_formula(const Bounds& b);
CheckReport claim_suite_singleton_independence(const Bounds& b);
CheckReport claim_suite_edgefree_collapse(const Bounds& b);
CheckReport claim_suite_union_closure(const Bounds& b);
CheckReport claim_suite_e_via_inclusion(const Bounds& b);
CheckReport claim_suite_group_cover(const Bounds& b);
CheckReport claim_suite_standard_translation(const Bounds& b);

/// The full battery: flatness, the dep-atom encoding, the splitjunction
/// law, characteristic team formulas, singleton independence, the edge-free
/// collapse with its separation witness, the union-closure separation, the
/// E-operator inclusion encoding, the group-cover atom, and the standard
/// translation. Nonzero exit is signalled by any non-Verified verdict.
std::vector<CheckReport> claim_suite(const Bounds& b);

}  // namespace teamsem::oracle
