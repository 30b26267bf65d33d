#include "teamsem/kripke.hpp"

#include <json.hpp>

#include <algorithm>
#include <random>
#include <set>

namespace teamsem {

using nlohmann::json;

KripkeModel::KripkeModel(std::vector<std::string> variables, std::vector<std::string> worlds)
    : variables_(std::move(variables)), worlds_(std::move(worlds)) {
  if (worlds_.empty()) throw ModelError("model needs at least one world");
  if (worlds_.size() > kMaxWorlds)
    throw ModelError("model exceeds the " + std::to_string(kMaxWorlds) + "-world limit");
  for (std::size_t i = 0; i < worlds_.size(); ++i) {
    if (!world_idx_.emplace(worlds_[i], static_cast<int>(i)).second)
      throw ModelError("duplicate world name: " + worlds_[i]);
  }
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (!var_idx_.emplace(variables_[i], static_cast<int>(i)).second)
      throw ModelError("duplicate variable name: " + variables_[i]);
  }
  succ_.assign(worlds_.size(), 0);
  pred_.assign(worlds_.size(), 0);
  val_.assign(variables_.size(), 0);
}

void KripkeModel::add_edge(int from, int to) {
  succ_[from] |= std::uint64_t{1} << to;
  pred_[to] |= std::uint64_t{1} << from;
}

void KripkeModel::set_true(int var, int world) { val_[var] |= std::uint64_t{1} << world; }

int KripkeModel::world_index(const std::string& name) const {
  auto it = world_idx_.find(name);
  return it == world_idx_.end() ? -1 : it->second;
}

int KripkeModel::variable_index(const std::string& name) const {
  auto it = var_idx_.find(name);
  return it == var_idx_.end() ? -1 : it->second;
}

std::uint64_t KripkeModel::all_worlds_mask() const {
  std::size_t n = worlds_.size();
  return n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

bool KripkeModel::operator==(const KripkeModel& other) const {
  return variables_ == other.variables_ && worlds_ == other.worlds_ && succ_ == other.succ_ &&
         val_ == other.val_;
}

namespace {

int require_world(const KripkeModel& m, const std::string& name, const std::string& where) {
  int w = m.world_index(name);
  if (w < 0) throw ModelError(where + " references undeclared world: " + name);
  return w;
}

}  // namespace

ModelFile load_model(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ModelError(std::string("bad model JSON: ") + e.what());
  }
  if (!j.is_object()) throw ModelError("model file must be a JSON object");
  static const std::set<std::string> known = {"variables", "worlds", "edges", "valuation", "teams"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) throw ModelError("unknown key in model file: " + it.key());
  }
  for (const char* req : {"variables", "worlds", "edges", "valuation"}) {
    if (!j.contains(req)) throw ModelError(std::string("model file misses key: ") + req);
  }

  KripkeModel m(j["variables"].get<std::vector<std::string>>(),
                j["worlds"].get<std::vector<std::string>>());

  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2) throw ModelError("edges must be [from, to] pairs");
    m.add_edge(require_world(m, e[0].get<std::string>(), "edge"),
               require_world(m, e[1].get<std::string>(), "edge"));
  }

  if (!j["valuation"].is_object()) throw ModelError("valuation must be an object");
  for (auto it = j["valuation"].begin(); it != j["valuation"].end(); ++it) {
    int var = m.variable_index(it.key());
    if (var < 0) throw ModelError("valuation references undeclared variable: " + it.key());
    for (const auto& w : it.value())
      m.set_true(var, require_world(m, w.get<std::string>(), "valuation"));
  }

  ModelFile mf{std::move(m), {}};
  if (j.contains("teams")) {
    if (!j["teams"].is_object()) throw ModelError("teams must be an object");
    for (auto it = j["teams"].begin(); it != j["teams"].end(); ++it) {
      Team t;
      for (const auto& w : it.value())
        t.add(require_world(mf.model, w.get<std::string>(), "team " + it.key()));
      mf.teams.emplace(it.key(), t);
    }
  }
  return mf;
}

std::string save_model(const ModelFile& mf) {
  const KripkeModel& m = mf.model;
  json j;
  j["variables"] = m.variables();
  j["worlds"] = m.worlds();
  json edges = json::array();
  for (int w = 0; w < m.world_count(); ++w) {
    for (int v = 0; v < m.world_count(); ++v) {
      if (m.has_edge(w, v)) edges.push_back({m.world_name(w), m.world_name(v)});
    }
  }
  j["edges"] = std::move(edges);
  json val = json::object();
  for (int x = 0; x < m.variable_count(); ++x) {
    json worlds = json::array();
    for (int w = 0; w < m.world_count(); ++w) {
      if (m.holds(x, w)) worlds.push_back(m.world_name(w));
    }
    val[m.variables()[x]] = std::move(worlds);
  }
  j["valuation"] = std::move(val);
  json teams = json::object();
  for (const auto& [name, t] : mf.teams) teams[name] = team_names(m, t);
  j["teams"] = std::move(teams);
  return j.dump(2);
}

Team team_from_names(const KripkeModel& m, const std::vector<std::string>& names) {
  Team t;
  for (const std::string& n : names) t.add(require_world(m, n, "team"));
  return t;
}

std::vector<std::string> team_names(const KripkeModel& m, Team t) {
  std::vector<std::string> out;
  for (int w = 0; w < m.world_count(); ++w) {
    if (t.contains(w)) out.push_back(m.world_name(w));
  }
  return out;
}

Team image(const KripkeModel& m, Team t) {
  std::uint64_t out = 0;
  for (int w = 0; w < m.world_count(); ++w) {
    if (t.contains(w)) out |= m.successors(w);
  }
  return {out};
}

Neighborhood neighborhood(const KripkeModel& m, Team t, int d, bool undirected) {
  if (d < 0) throw ModelError("neighborhood: d must be >= 0");
  const int n = m.world_count();
  std::vector<int> dist(n, -1);
  std::vector<int> queue;
  for (int w = 0; w < n; ++w) {
    if (t.contains(w)) {
      dist[w] = 0;
      queue.push_back(w);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int w = queue[head];
    if (dist[w] == d) continue;
    std::uint64_t next = m.successors(w);
    if (undirected) next |= m.predecessors(w);
    for (int v = 0; v < n; ++v) {
      if (((next >> v) & 1) && dist[v] < 0) {
        dist[v] = dist[w] + 1;
        queue.push_back(v);
      }
    }
  }

  std::vector<int> keep;
  std::vector<int> new_index(n, -1);
  std::vector<std::string> names;
  for (int w = 0; w < n; ++w) {
    if (dist[w] >= 0) {
      new_index[w] = static_cast<int>(keep.size());
      keep.push_back(w);
      names.push_back(m.world_name(w));
    }
  }
  KripkeModel out(m.variables(), std::move(names));
  for (int w : keep) {
    for (int v : keep) {
      if (m.has_edge(w, v)) out.add_edge(new_index[w], new_index[v]);
    }
  }
  for (int x = 0; x < m.variable_count(); ++x) {
    for (int w : keep) {
      if (m.holds(x, w)) out.set_true(x, new_index[w]);
    }
  }
  Team nt;
  for (int w = 0; w < n; ++w) {
    if (t.contains(w)) nt.add(new_index[w]);
  }
  return {std::move(out), nt, std::move(keep)};
}

DisjointUnion disjoint_union(const KripkeModel& a, const KripkeModel& b) {
  std::set<std::string> va(a.variables().begin(), a.variables().end());
  std::set<std::string> vb(b.variables().begin(), b.variables().end());
  if (va != vb) throw ModelError("disjoint_union: variable universes differ");

  std::vector<std::string> names = a.worlds();
  std::set<std::string> used(names.begin(), names.end());
  std::vector<int> left(a.world_count()), right(b.world_count());
  for (int w = 0; w < a.world_count(); ++w) left[w] = w;
  for (int w = 0; w < b.world_count(); ++w) {
    std::string n = b.world_name(w);
    while (used.count(n)) n += "'";
    used.insert(n);
    right[w] = static_cast<int>(names.size());
    names.push_back(std::move(n));
  }

  KripkeModel out(a.variables(), std::move(names));
  for (int w = 0; w < a.world_count(); ++w) {
    for (int v = 0; v < a.world_count(); ++v) {
      if (a.has_edge(w, v)) out.add_edge(left[w], left[v]);
    }
  }
  for (int w = 0; w < b.world_count(); ++w) {
    for (int v = 0; v < b.world_count(); ++v) {
      if (b.has_edge(w, v)) out.add_edge(right[w], right[v]);
    }
  }
  for (int x = 0; x < out.variable_count(); ++x) {
    const std::string& var = out.variables()[x];
    int xa = a.variable_index(var);
    int xb = b.variable_index(var);
    for (int w = 0; w < a.world_count(); ++w) {
      if (a.holds(xa, w)) out.set_true(x, left[w]);
    }
    for (int w = 0; w < b.world_count(); ++w) {
      if (b.holds(xb, w)) out.set_true(x, right[w]);
    }
  }
  return {std::move(out), std::move(left), std::move(right)};
}

Team lift_team(const std::vector<int>& renaming, Team t) {
  Team out;
  for (std::size_t w = 0; w < renaming.size(); ++w) {
    if (t.contains(static_cast<int>(w))) out.add(renaming[w]);
  }
  return out;
}

KripkeModel random_model(std::uint64_t seed, int n_worlds, double edge_prob,
                         std::vector<std::string> variables) {
  if (n_worlds < 1) throw ModelError("random_model: need at least one world");
  std::mt19937_64 rng(seed);
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  std::vector<std::string> names;
  names.reserve(n_worlds);
  for (int i = 0; i < n_worlds; ++i) names.push_back("w" + std::to_string(i));
  KripkeModel m(std::move(variables), std::move(names));
  for (int w = 0; w < n_worlds; ++w) {
    for (int v = 0; v < n_worlds; ++v) {
      if (unit() < edge_prob) m.add_edge(w, v);
    }
  }
  for (int x = 0; x < m.variable_count(); ++x) {
    for (int w = 0; w < n_worlds; ++w) {
      if (rng() & 1) m.set_true(x, w);
    }
  }
  return m;
}

}  // namespace teamsem
