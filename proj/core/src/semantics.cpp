#include "teamsem/semantics.hpp"

#include <algorithm>
#include <unordered_map>
#include <vector>

#include "teamsem/fo.hpp"

namespace teamsem::semantics {

namespace {

constexpr int kArrayMemoMaxWorlds = 12;

struct PairHash {
  std::size_t operator()(const std::pair<int, std::uint64_t>& p) const noexcept {
    std::uint64_t x = p.second * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(p.first);
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    return static_cast<std::size_t>(x);
  }
};

}  // namespace

struct BatchEvaluator::Impl {
  const KripkeModel& model;
  Formula root;
  EvalConfig cfg;

  // flattened DAG
  std::vector<Formula> nodes;
  std::unordered_map<const void*, int> index;
  int root_idx = -1;

  // per-node pointed truth mask for ML nodes, computed on demand
  std::vector<std::uint64_t> pmask;
  std::vector<bool> pmask_ready;

  // memo: int8 per (node, team mask); 0 unknown, 1 false, 2 true
  bool use_array_memo = false;
  std::vector<std::vector<std::int8_t>> array_memo;
  std::unordered_map<std::pair<int, std::uint64_t>, bool, PairHash> map_memo;

  Impl(const KripkeModel& m, Formula f, EvalConfig c)
      : model(m), root(std::move(f)), cfg(c) {
    if (cfg.mutant_diamond_drop_forward) cfg.strategy = Strategy::General;
    for (const std::string& v : root.variables()) {
      if (model.variable_index(v) < 0)
        throw EvalError("formula variable '" + v + "' is not declared by the model");
    }
    collect(root);
    root_idx = index.at(root.id());
    pmask.assign(nodes.size(), 0);
    pmask_ready.assign(nodes.size(), false);
    use_array_memo = cfg.memoize && model.world_count() <= kArrayMemoMaxWorlds;
    if (use_array_memo) array_memo.resize(nodes.size());
  }

  void collect(const Formula& f) {
    if (index.count(f.id())) return;
    for (const Formula& a : f.args()) collect(a);
    index.emplace(f.id(), static_cast<int>(nodes.size()));
    nodes.push_back(f);
  }

  // --- classical pointed evaluation (ML nodes only) -----------------------

  std::uint64_t pointed_mask(int idx) {
    if (pmask_ready[idx]) return pmask[idx];
    const Formula& f = nodes[idx];
    const std::uint64_t all = model.all_worlds_mask();
    std::uint64_t out = 0;
    switch (f.kind()) {
      case Kind::Top: out = all; break;
      case Kind::Bot: out = 0; break;
      case Kind::Prop: out = model.valuation(model.variable_index(f.name())); break;
      case Kind::NegProp: out = all & ~model.valuation(model.variable_index(f.name())); break;
      case Kind::And:
        out = pointed_mask(index.at(f.arg(0).id())) & pointed_mask(index.at(f.arg(1).id()));
        break;
      case Kind::SplitOr:
        out = pointed_mask(index.at(f.arg(0).id())) | pointed_mask(index.at(f.arg(1).id()));
        break;
      case Kind::Diamond: {
        std::uint64_t sub = pointed_mask(index.at(f.arg(0).id()));
        for (int w = 0; w < model.world_count(); ++w) {
          if (model.successors(w) & sub) out |= std::uint64_t{1} << w;
        }
        break;
      }
      case Kind::Box: {
        std::uint64_t sub = pointed_mask(index.at(f.arg(0).id()));
        for (int w = 0; w < model.world_count(); ++w) {
          if ((model.successors(w) & ~sub) == 0) out |= std::uint64_t{1} << w;
        }
        break;
      }
      default:
        throw EvalError("pointed evaluation requires an ML formula");
    }
    pmask[idx] = out;
    pmask_ready[idx] = true;
    return out;
  }

  // --- memo ----------------------------------------------------------------

  bool memo_get(int idx, std::uint64_t mask, bool& value) {
    if (!cfg.memoize) return false;
    if (use_array_memo) {
      auto& row = array_memo[idx];
      if (row.empty()) return false;
      std::int8_t v = row[mask];
      if (v == 0) return false;
      value = v == 2;
      return true;
    }
    auto it = map_memo.find({idx, mask});
    if (it == map_memo.end()) return false;
    value = it->second;
    return true;
  }

  void memo_put(int idx, std::uint64_t mask, bool value) {
    if (!cfg.memoize) return;
    if (use_array_memo) {
      auto& row = array_memo[idx];
      if (row.empty()) row.assign(std::size_t{1} << model.world_count(), 0);
      row[mask] = value ? 2 : 1;
      return;
    }
    map_memo.emplace(std::make_pair(idx, mask), value);
  }

  // --- team evaluation -------------------------------------------------------

  void check_cap(std::uint64_t mask, const char* what) {
    if (__builtin_popcountll(mask) > cfg.max_split_team)
      throw EvalError(std::string("team size cap exceeded during ") + what +
                      " (limit " + std::to_string(cfg.max_split_team) + ")");
  }

  // exists a cover A | B == mask with left(A) and right(B)?
  template <typename L, typename R>
  bool cover_exists(std::uint64_t mask, L&& left, R&& right) {
    check_cap(mask, "cover enumeration");
    std::uint64_t a = mask;
    while (true) {
      if (left(a)) {
        const std::uint64_t required = mask & ~a;
        const std::uint64_t optional = a;
        std::uint64_t extra = optional;
        while (true) {
          if (right(required | extra)) return true;
          if (extra == 0) break;
          extra = (extra - 1) & optional;
        }
      }
      if (a == 0) break;
      a = (a - 1) & mask;
    }
    return false;
  }

  std::uint64_t image_of(std::uint64_t mask) {
    std::uint64_t img = 0;
    for (int w = 0; w < model.world_count(); ++w) {
      if ((mask >> w) & 1) img |= model.successors(w);
    }
    return img;
  }

  bool eval_node(int idx, std::uint64_t mask) {
    const Formula& f = nodes[idx];
    // flatness fast path: team truth of an ML formula is pointwise truth
    if (cfg.strategy == Strategy::FlatFastpath && f.is_ml())
      return (mask & ~pointed_mask(idx)) == 0;

    bool cached;
    if (memo_get(idx, mask, cached)) return cached;
    bool result = eval_raw(f, mask);
    memo_put(idx, mask, result);
    return result;
  }

  bool eval_raw(const Formula& f, std::uint64_t mask) {
    switch (f.kind()) {
      case Kind::Top: return true;
      case Kind::Bot: return mask == 0;
      case Kind::Prop: return (mask & ~model.valuation(model.variable_index(f.name()))) == 0;
      case Kind::NegProp: return (mask & model.valuation(model.variable_index(f.name()))) == 0;
      case Kind::CNeg: return !eval_node(index.at(f.arg(0).id()), mask);
      case Kind::And:
        return eval_node(index.at(f.arg(0).id()), mask) &&
               eval_node(index.at(f.arg(1).id()), mask);
      case Kind::COr:
        return eval_node(index.at(f.arg(0).id()), mask) ||
               eval_node(index.at(f.arg(1).id()), mask);
      case Kind::SplitOr: {
        const int li = index.at(f.arg(0).id());
        const int ri = index.at(f.arg(1).id());
        if (cfg.strategy == Strategy::FlatFastpath) {
          // one flat side pins its part of the cover to a maximal choice
          if (f.arg(0).is_ml()) {
            const std::uint64_t lmask = pointed_mask(li) & mask;
            const std::uint64_t required = mask & ~lmask;
            check_cap(lmask, "split enumeration");
            std::uint64_t extra = lmask;
            while (true) {
              if (eval_node(ri, required | extra)) return true;
              if (extra == 0) break;
              extra = (extra - 1) & lmask;
            }
            return false;
          }
          if (f.arg(1).is_ml()) {
            const std::uint64_t rmask = pointed_mask(ri) & mask;
            const std::uint64_t required = mask & ~rmask;
            check_cap(rmask, "split enumeration");
            std::uint64_t extra = rmask;
            while (true) {
              if (eval_node(li, required | extra)) return true;
              if (extra == 0) break;
              extra = (extra - 1) & rmask;
            }
            return false;
          }
        }
        return cover_exists(
            mask, [&](std::uint64_t a) { return eval_node(li, a); },
            [&](std::uint64_t b) { return eval_node(ri, b); });
      }
      case Kind::Tensor: {
        const int li = index.at(f.arg(0).id());
        const int ri = index.at(f.arg(1).id());
        // fails exactly when some cover refutes both sides
        return !cover_exists(
            mask, [&](std::uint64_t a) { return !eval_node(li, a); },
            [&](std::uint64_t b) { return !eval_node(ri, b); });
      }
      case Kind::IntImpl: {
        const int li = index.at(f.arg(0).id());
        const int ri = index.at(f.arg(1).id());
        check_cap(mask, "subteam enumeration");
        std::uint64_t sub = mask;
        while (true) {
          if (eval_node(li, sub) && !eval_node(ri, sub)) return false;
          if (sub == 0) break;
          sub = (sub - 1) & mask;
        }
        return true;
      }
      case Kind::Exists: {
        const int ci = index.at(f.arg(0).id());
        for (int w = 0; w < model.world_count(); ++w) {
          if (((mask >> w) & 1) && eval_node(ci, std::uint64_t{1} << w)) return true;
        }
        return false;
      }
      case Kind::Box: return eval_node(index.at(f.arg(0).id()), image_of(mask));
      case Kind::Diamond: {
        const int ci = index.at(f.arg(0).id());
        const Formula& sub = f.arg(0);
        if (cfg.strategy == Strategy::FlatFastpath && sub.is_ml()) {
          // flat witness: take exactly the good successors of the team
          const std::uint64_t good = pointed_mask(ci);
          for (int w = 0; w < model.world_count(); ++w) {
            if (((mask >> w) & 1) && (model.successors(w) & good) == 0) return false;
          }
          return true;
        }
        const std::uint64_t img = image_of(mask);
        check_cap(img, "diamond witness enumeration");
        std::uint64_t cand = img;
        while (true) {
          bool forward_ok = true;
          if (!cfg.mutant_diamond_drop_forward) {
            for (int w = 0; w < model.world_count() && forward_ok; ++w) {
              if (((mask >> w) & 1) && (model.successors(w) & cand) == 0) forward_ok = false;
            }
          }
          if (forward_ok && eval_node(ci, cand)) return true;
          if (cand == 0) break;
          cand = (cand - 1) & img;
        }
        return false;
      }
      case Kind::Dep: return dep_holds(model, Team{mask}, f.args());
      case Kind::Indep:
        return indep_holds(model, Team{mask}, f.indep_left(), f.indep_fixed(), f.indep_right());
      case Kind::Incl: return incl_holds(model, Team{mask}, f.incl_lhs(), f.incl_rhs());
      case Kind::GenAtom: {
        if (!cfg.atoms) throw EvalError("atom " + f.name() + ": no atom registry configured");
        return gen_atom_holds(model, Team{mask}, f.name(), f.args(), *cfg.atoms);
      }
    }
    throw EvalError("unknown formula node");
  }
};

BatchEvaluator::BatchEvaluator(const KripkeModel& m, Formula f, EvalConfig cfg)
    : impl_(std::make_unique<Impl>(m, std::move(f), cfg)) {}

BatchEvaluator::~BatchEvaluator() = default;
BatchEvaluator::BatchEvaluator(BatchEvaluator&&) noexcept = default;
BatchEvaluator& BatchEvaluator::operator=(BatchEvaluator&&) noexcept = default;

bool BatchEvaluator::eval(Team t) {
  if (t.bits & ~impl_->model.all_worlds_mask())
    throw EvalError("team contains worlds outside the model");
  return impl_->eval_node(impl_->root_idx, t.bits);
}

bool BatchEvaluator::eval_pointed(int world) {
  if (!impl_->root.is_ml()) throw EvalError("pointed evaluation requires an ML formula");
  return (impl_->pointed_mask(impl_->root_idx) >> world) & 1;
}

bool eval(const KripkeModel& m, Team t, const Formula& f, const EvalConfig& cfg) {
  return BatchEvaluator(m, f, cfg).eval(t);
}

bool eval_pointed(const KripkeModel& m, int world, const Formula& f) {
  return BatchEvaluator(m, f).eval_pointed(world);
}

namespace {

std::vector<std::uint64_t> arg_masks(const KripkeModel& m, std::span<const Formula> args) {
  std::vector<std::uint64_t> out;
  out.reserve(args.size());
  for (const Formula& a : args) {
    BatchEvaluator be(m, a);
    std::uint64_t mask = 0;
    for (int w = 0; w < m.world_count(); ++w) {
      if (be.eval_pointed(w)) mask |= std::uint64_t{1} << w;
    }
    out.push_back(mask);
  }
  return out;
}

std::uint64_t profile(const std::vector<std::uint64_t>& masks, int w) {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < masks.size(); ++i) key |= ((masks[i] >> w) & 1) << i;
  return key;
}

}  // namespace

bool dep_holds(const KripkeModel& m, Team t, std::span<const Formula> args) {
  if (args.empty()) throw EvalError("dep: needs at least one argument");
  std::vector<std::uint64_t> masks = arg_masks(m, args);
  const std::uint64_t last = masks.back();
  masks.pop_back();
  for (int w = 0; w < m.world_count(); ++w) {
    if (!t.contains(w)) continue;
    for (int v = 0; v < m.world_count(); ++v) {
      if (!t.contains(v)) continue;
      if (profile(masks, w) == profile(masks, v) && ((last >> w) & 1) != ((last >> v) & 1))
        return false;
    }
  }
  return true;
}

bool indep_holds(const KripkeModel& m, Team t, std::span<const Formula> p,
                 std::span<const Formula> r, std::span<const Formula> q) {
  std::vector<std::uint64_t> pm = arg_masks(m, p);
  std::vector<std::uint64_t> rm = arg_masks(m, r);
  std::vector<std::uint64_t> qm = arg_masks(m, q);
  for (int w = 0; w < m.world_count(); ++w) {
    if (!t.contains(w)) continue;
    for (int v = 0; v < m.world_count(); ++v) {
      if (!t.contains(v)) continue;
      if (profile(rm, w) != profile(rm, v)) continue;
      bool witness = false;
      for (int u = 0; u < m.world_count() && !witness; ++u) {
        if (!t.contains(u)) continue;
        witness = profile(pm, u) == profile(pm, w) && profile(qm, u) == profile(qm, v) &&
                  profile(rm, u) == profile(rm, w);
      }
      if (!witness) return false;
    }
  }
  return true;
}

bool incl_holds(const KripkeModel& m, Team t, std::span<const Formula> lhs,
                std::span<const Formula> rhs) {
  if (lhs.size() != rhs.size()) throw EvalError("inc: tuple lengths differ");
  std::vector<std::uint64_t> lm = arg_masks(m, lhs);
  std::vector<std::uint64_t> rm = arg_masks(m, rhs);
  for (int w = 0; w < m.world_count(); ++w) {
    if (!t.contains(w)) continue;
    bool matched = false;
    for (int v = 0; v < m.world_count() && !matched; ++v) {
      if (t.contains(v)) matched = profile(lm, w) == profile(rm, v);
    }
    if (!matched) return false;
  }
  return true;
}

bool gen_atom_holds(const KripkeModel& m, Team t, const std::string& atom_name,
                    std::span<const Formula> args, const fo::AtomRegistry& registry) {
  const fo::GeneralizedAtom* atom = registry.find(atom_name);
  if (!atom) throw EvalError("atom " + atom_name + " is not registered");
  if (atom->arity != static_cast<int>(args.size()))
    throw EvalError("atom " + atom_name + ": expected " + std::to_string(atom->arity) +
                    " arguments, got " + std::to_string(args.size()));
  std::vector<std::uint64_t> masks = arg_masks(m, args);

  // structure with universe T; A_i holds at the members satisfying arg i
  std::vector<int> members;
  for (int w = 0; w < m.world_count(); ++w) {
    if (t.contains(w)) members.push_back(w);
  }
  fo::FOStructure s(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) s.set_element_name(static_cast<int>(i), m.world_name(members[i]));
  for (std::size_t a = 0; a < masks.size(); ++a) {
    std::string rel = "A" + std::to_string(a + 1);
    s.define(rel, 1);
    for (std::size_t i = 0; i < members.size(); ++i) {
      if ((masks[a] >> members[i]) & 1) s.add_tuple(rel, {static_cast<int>(i)});
    }
  }
  return fo::eval_fo(s, atom->sentence);
}

}  // namespace teamsem::semantics
