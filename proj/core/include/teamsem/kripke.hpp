#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "teamsem/errors.hpp"

namespace teamsem {

/// A set of worlds of one model, stored as an index bitset. Models are
/// capped at 64 worlds so a team always fits in one word.
struct Team {
  std::uint64_t bits = 0;

  static Team empty() { return {}; }
  static Team single(int w) { return {std::uint64_t{1} << w}; }

  bool contains(int w) const { return (bits >> w) & 1; }
  Team& add(int w) {
    bits |= std::uint64_t{1} << w;
    return *this;
  }
  int size() const { return __builtin_popcountll(bits); }
  bool is_empty() const { return bits == 0; }

  friend Team operator|(Team a, Team b) { return {a.bits | b.bits}; }
  friend Team operator&(Team a, Team b) { return {a.bits & b.bits}; }
  friend bool operator==(Team a, Team b) { return a.bits == b.bits; }
  friend bool operator!=(Team a, Team b) { return a.bits != b.bits; }
};

constexpr int kMaxWorlds = 64;

/// Finite Kripke model: named worlds, directed edges, a valuation over a
/// declared variable universe. Immutable after construction.
class KripkeModel {
 public:
  KripkeModel(std::vector<std::string> variables, std::vector<std::string> worlds);

  void add_edge(int from, int to);
  void set_true(int var, int world);

  int world_count() const { return static_cast<int>(worlds_.size()); }
  int variable_count() const { return static_cast<int>(variables_.size()); }
  const std::vector<std::string>& worlds() const { return worlds_; }
  const std::vector<std::string>& variables() const { return variables_; }
  const std::string& world_name(int w) const { return worlds_[w]; }

  int world_index(const std::string& name) const;    // -1 when absent
  int variable_index(const std::string& name) const; // -1 when absent

  std::uint64_t successors(int w) const { return succ_[w]; }
  std::uint64_t predecessors(int w) const { return pred_[w]; }
  bool has_edge(int from, int to) const { return (succ_[from] >> to) & 1; }
  /// Worlds where the variable is true, as a mask.
  std::uint64_t valuation(int var) const { return val_[var]; }
  bool holds(int var, int world) const { return (val_[var] >> world) & 1; }
  /// Mask with one bit per world.
  std::uint64_t all_worlds_mask() const;

  bool operator==(const KripkeModel& other) const;

 private:
  std::vector<std::string> variables_;
  std::vector<std::string> worlds_;
  std::vector<std::uint64_t> succ_;
  std::vector<std::uint64_t> pred_;
  std::vector<std::uint64_t> val_;
  std::map<std::string, int> world_idx_;
  std::map<std::string, int> var_idx_;
};

/// A model file: the model plus its named teams.
struct ModelFile {
  KripkeModel model;
  std::map<std::string, Team> teams;
};

/// Parses the JSON model format. Unknown keys, dangling references,
/// duplicate or empty world lists are rejected.
ModelFile load_model(const std::string& json_text);
std::string save_model(const ModelFile& mf);

Team team_from_names(const KripkeModel& m, const std::vector<std::string>& names);
std::vector<std::string> team_names(const KripkeModel& m, Team t);

/// Successor image of a team: all worlds reachable in one step from a member.
Team image(const KripkeModel& m, Team t);

struct Neighborhood {
  KripkeModel model;
  Team team;
  /// original world index per new index
  std::vector<int> world_map;
};

/// Restriction of the model to worlds at distance <= d from some team
/// member. Distance follows directed edges by default; `undirected` treats
/// the edge relation as symmetric.
Neighborhood neighborhood(const KripkeModel& m, Team t, int d, bool undirected = false);

struct DisjointUnion {
  KripkeModel model;
  std::vector<int> left;   // new index of each world of the first model
  std::vector<int> right;  // new index of each world of the second model
};

/// Side-by-side union over a shared variable universe. World names from the
/// second model are primed until unique.
DisjointUnion disjoint_union(const KripkeModel& a, const KripkeModel& b);

Team lift_team(const std::vector<int>& renaming, Team t);

/// Deterministic random model: each edge appears with probability
/// `edge_prob`, each (variable, world) membership with probability 1/2.
KripkeModel random_model(std::uint64_t seed, int n_worlds, double edge_prob,
                         std::vector<std::string> variables);

}  // namespace teamsem
