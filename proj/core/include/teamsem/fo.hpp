#pragma once

#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "teamsem/errors.hpp"
#include "teamsem/formula.hpp"
#include "teamsem/kripke.hpp"

namespace teamsem::fo {

enum class FOKind : std::uint8_t {
  True,
  False,
  Rel,
  Eq,
  Not,
  And,
  Or,
  Implies,
  Exists,
  Forall,
};

/// First-order formulas over a relational signature, with named variables.
class FOFormula {
 public:
  static FOFormula truth();
  static FOFormula falsity();
  static FOFormula rel(std::string name, std::vector<std::string> vars);
  static FOFormula eq(std::string a, std::string b);
  static FOFormula fo_not(FOFormula f);
  static FOFormula fo_and(FOFormula l, FOFormula r);
  static FOFormula fo_or(FOFormula l, FOFormula r);
  static FOFormula implies(FOFormula l, FOFormula r);
  static FOFormula exists(std::string var, FOFormula body);
  static FOFormula forall(std::string var, FOFormula body);

  FOKind kind() const noexcept;
  const std::string& rel_name() const;                 // Rel
  const std::vector<std::string>& term_vars() const;   // Rel / Eq (two entries)
  const std::string& quant_var() const;                // Exists / Forall
  const FOFormula& child(std::size_t i) const;
  std::size_t child_count() const noexcept;

  bool uses_equality() const noexcept;
  /// Free variables, sorted.
  std::vector<std::string> free_variables() const;
  /// Relation name -> arity, as used in the formula. Throws FOError when a
  /// name occurs with two arities.
  std::map<std::string, int> relations() const;

  bool operator==(const FOFormula& other) const;
  bool operator!=(const FOFormula& other) const { return !(*this == other); }

 private:
  struct Node;
  explicit FOFormula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  static FOFormula make(FOKind k, std::string name, std::vector<std::string> terms,
                        std::vector<FOFormula> children);
  std::shared_ptr<const Node> n_;
};

/// Grammar: `forall x. f`, `exists x. f`, `f -> f`, `f | f`, `f & f`, `!f`,
/// `Name(x, y)`, `x = y`, `true`, `false`, parentheses. Quantifier bodies
/// extend as far right as possible.
FOFormula parse_fo(const std::string& text);
std::string render_fo(const FOFormula& f);

/// Finite relational structure. Elements are 0..size-1; names are optional
/// and only used in output.
class FOStructure {
 public:
  explicit FOStructure(std::size_t universe_size);

  void define(const std::string& rel, int arity);
  void add_tuple(const std::string& rel, std::vector<int> tuple);
  void set_element_name(int i, std::string name);

  std::size_t size() const { return size_; }
  bool has_relation(const std::string& rel) const;
  int arity(const std::string& rel) const;
  bool contains(const std::string& rel, const std::vector<int>& tuple) const;
  const std::string& element_name(int i) const { return names_[i]; }

 private:
  std::size_t size_;
  std::vector<std::string> names_;
  std::map<std::string, std::pair<int, std::set<std::vector<int>>>> rels_;
};

/// Tarski semantics over a finite structure; the empty universe makes every
/// `forall` true and every `exists` false.
bool eval_fo(const FOStructure& s, const FOFormula& f, std::map<std::string, int> env = {});

/// The structure induced by a model and a team: binary E for the edges,
/// unary T for the team, unary W_x per declared variable.
FOStructure to_structure(const KripkeModel& m, Team t);

struct GeneralizedAtom {
  std::string name;
  int arity = 0;
  FOFormula sentence = FOFormula::truth();
  /// False when the defining sentence mentions equality.
  bool identity_free = true;
};

/// Append-only registry of generalized dependence atoms. Defining sentences
/// may only use the unary relations A1..An of the atom's signature.
class AtomRegistry {
 public:
  const GeneralizedAtom& register_atom(std::string name, int arity, FOFormula sentence);
  const GeneralizedAtom& register_atom(std::string name, int arity, const std::string& sentence);
  const GeneralizedAtom* find(const std::string& name) const;
  std::vector<std::string> names() const;

  /// Registry file: JSON array of {"name":…, "arity":…, "sentence":…}.
  static AtomRegistry from_json(const std::string& text);

 private:
  std::map<std::string, GeneralizedAtom> atoms_;
};

/// The width-(n*m) atom over m groups of n formulas that holds when some
/// group both covers the team (every world satisfies a member) and is fully
/// witnessed (every member is satisfied somewhere in the team). Group k
/// member j is relation A{(k-1)*n+j}.
GeneralizedAtom group_cover_atom(int n, int m);

/// Native evaluation of the group-cover atom; agrees with evaluating its FO
/// definition over the induced structure.
bool group_cover_holds(const KripkeModel& m, Team t, std::span<const Formula> args, int n,
                       int groups);

/// Classical embedding of an ML formula into FO over the model signature,
/// with one free variable. standard_translation(f, x) holds at world w
/// exactly when f holds at w.
FOFormula standard_translation(const Formula& ml, const std::string& free_var = "x");

/// FO sentence equivalent to the characteristic team formula of (m, t) at
/// level k: satisfied by the structure of (m', t') exactly when (m', t')
/// satisfies hintikka_team(m, t, k).
FOFormula chi_to_fo(const KripkeModel& m, Team t, int k);

}  // namespace teamsem::fo
