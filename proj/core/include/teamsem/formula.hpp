#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "teamsem/errors.hpp"

namespace teamsem {

/// Node kinds of the formula language. SplitOr is the team-splitting
/// disjunction `|`, COr the classical disjunction `lor`, CNeg the classical
/// (team-level) negation `~`. NegProp is the only place ordinary negation
/// may occur: formulas are kept in negation normal form.
enum class Kind : std::uint8_t {
  Top,
  Bot,
  Prop,
  NegProp,
  CNeg,
  And,
  SplitOr,
  COr,
  Diamond,
  Box,
  Exists,   // E, evaluated in the current team
  Tensor,   // otimes, dual of split disjunction
  IntImpl,  // ->, intuitionistic (subteam) implication
  Dep,      // dep(f1,..,fn), last argument determined by the others
  Indep,    // indep(P ; R ; Q)
  Incl,     // inc(lhs ; rhs)
  GenAtom,  // atom name(args), semantics from a registered FO sentence
};

/// Syntactic fragments, smallest first. Classification is purely syntactic:
/// the label is the first one whose grammar admits every node of the formula.
enum class Fragment : std::uint8_t {
  ML,
  MLc,      // ML(lor)
  MDL,      // dep atoms over proposition letters
  EMDL,     // dep atoms over ML formulas
  EMIL,     // independence atoms
  EMILc,    // independence atoms + lor
  EMINCL,   // inclusion atoms
  EMINCLc,  // inclusion atoms + lor
  MLFO,     // registered generalized atoms
  MTL,      // classical negation and its derived connectives
  MTLplus,  // MTL mixed with extended atoms
};

std::string to_string(Fragment f);

/// Immutable formula AST. Cheap to copy (shared nodes), safe to share
/// across threads, structural equality.
class Formula {
 public:
  static Formula top();
  static Formula bot();
  static Formula prop(std::string name);
  static Formula neg_prop(std::string name);
  static Formula cneg(Formula f);
  static Formula conj(Formula l, Formula r);
  static Formula split_or(Formula l, Formula r);
  static Formula class_or(Formula l, Formula r);
  static Formula diamond(Formula f);
  static Formula box(Formula f);
  static Formula exists(Formula f);
  static Formula tensor(Formula l, Formula r);
  static Formula int_impl(Formula l, Formula r);
  /// dep(f1,..,fn), n >= 1; all arguments must be ML.
  static Formula dep(std::vector<Formula> args);
  /// indep(P ; R ; Q). Argument lists are treated as sets: structural
  /// duplicates are dropped, order carries no meaning.
  static Formula indep(std::vector<Formula> p, std::vector<Formula> r, std::vector<Formula> q);
  /// inc(lhs ; rhs) with |lhs| == |rhs| >= 1.
  static Formula incl(std::vector<Formula> lhs, std::vector<Formula> rhs);
  static Formula gen_atom(std::string name, std::vector<Formula> args);

  Kind kind() const noexcept;
  /// Prop / NegProp / GenAtom only.
  const std::string& name() const;
  // spans would dangle off a temporary, hence the reference qualifiers
  std::span<const Formula> args() const& noexcept;
  std::span<const Formula> args() const&& = delete;
  const Formula& arg(std::size_t i) const;
  std::size_t arity() const noexcept;

  std::span<const Formula> indep_left() const&;   // P
  std::span<const Formula> indep_fixed() const&;  // R
  std::span<const Formula> indep_right() const&;  // Q
  std::span<const Formula> incl_lhs() const&;
  std::span<const Formula> incl_rhs() const&;
  std::span<const Formula> indep_left() const&& = delete;
  std::span<const Formula> indep_fixed() const&& = delete;
  std::span<const Formula> indep_right() const&& = delete;
  std::span<const Formula> incl_lhs() const&& = delete;
  std::span<const Formula> incl_rhs() const&& = delete;

  /// Maximal nesting of Diamond/Box, counted inside atom arguments too.
  int modal_depth() const noexcept;
  /// True iff every node is in the ML fragment.
  bool is_ml() const noexcept;
  /// Stable identity of the underlying node; used as a memoization key.
  const void* id() const noexcept;

  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }
  std::size_t hash() const noexcept;

  /// Sorted, deduplicated proposition names occurring in the formula.
  std::vector<std::string> variables() const;

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  static Formula make(Kind k, std::string name, std::vector<Formula> args,
                      std::uint32_t g1 = 0, std::uint32_t g2 = 0);
  std::shared_ptr<const Node> n_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const noexcept { return f.hash(); }
};

/// Negation normal form of "not f" for ML formulas: pointwise complement.
/// Throws Error when f is not ML.
Formula dual(const Formula& f);

struct Desugared {
  Formula result;
  /// True when Indep/Incl/GenAtom nodes were left in place (they have no
  /// rewriting into the core connectives).
  bool residual_atoms;
};

/// Rewrites E, otimes, lor, -> and dep into {top, bot, literals, ~, &, |, <>, []}.
/// Team-equivalent to the input on every model. Throws Error for E applied
/// to a non-ML operand.
Desugared desugar(const Formula& f);

/// Smallest syntactic fragment admitting f. When `atom_identity_free` is
/// given, generalized atoms whose defining sentence uses equality push the
/// label from MLFO to MTLplus.
Fragment fragment_of(const Formula& f,
                     const std::function<bool(const std::string&)>& atom_identity_free = {});

/// Precedence-aware printer; parse(render(f)) reproduces f exactly.
std::string render(const Formula& f);

struct ParseOptions {
  /// Optional arity lookup for `atom` applications; when set, mismatches are
  /// rejected at parse time.
  std::function<std::optional<int>(const std::string&)> atom_arity;
};

Formula parse(const std::string& text, const ParseOptions& opts = {});

}  // namespace teamsem
