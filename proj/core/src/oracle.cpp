#include "teamsem/oracle.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "teamsem/bisim.hpp"
#include "teamsem/fo.hpp"
#include "teamsem/hintikka.hpp"
#include "teamsem/semantics.hpp"

namespace teamsem::oracle {

using semantics::BatchEvaluator;
using semantics::EvalConfig;
using semantics::Strategy;

namespace {

EvalConfig base_cfg(const Bounds& b) {
  EvalConfig cfg;
  cfg.atoms = b.atoms;
  return cfg;
}

// claims built around fixed formulas pin their variable universe
Bounds pinned(const Bounds& b, std::vector<std::string> vars) {
  Bounds out = b;
  out.vars = std::move(vars);
  return out;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Verified: return "VERIFIED";
    case Verdict::Falsified: return "FALSIFIED";
    case Verdict::Skipped: return "SKIPPED";
  }
  return "?";
}

std::string CheckReport::to_line() const {
  std::string out = to_string(verdict);
  out.resize(10, ' ');
  out += claim;
  out += " (instances=" + std::to_string(instances) + ")";
  if (!details.empty()) out += " -- " + details;
  if (counterexample) {
    out += "\n    formula: " + counterexample->formula;
    if (!counterexample->note.empty()) out += "\n    note: " + counterexample->note;
    out += "\n    team: [";
    for (std::size_t i = 0; i < counterexample->team_a.size(); ++i) {
      if (i) out += ", ";
      out += counterexample->team_a[i];
    }
    out += "]";
  }
  return out;
}

std::string CheckReport::to_json() const {
  nlohmann::json j;
  j["claim"] = claim;
  j["verdict"] = to_string(verdict);
  j["instances"] = instances;
  j["ms"] = millis;
  if (!details.empty()) j["details"] = details;
  if (counterexample) {
    nlohmann::json c;
    c["model"] = nlohmann::json::parse(counterexample->model_a);
    c["team"] = counterexample->team_a;
    if (counterexample->model_b) {
      c["model_b"] = nlohmann::json::parse(*counterexample->model_b);
      c["team_b"] = counterexample->team_b;
    }
    c["formula"] = counterexample->formula;
    if (!counterexample->note.empty()) c["note"] = counterexample->note;
    j["counterexample"] = std::move(c);
  }
  return j.dump();
}

// ---------------------------------------------------------------------------
// enumeration

void enumerate_models(int max_worlds, const std::vector<std::string>& vars,
                      const std::function<void(const KripkeModel&)>& fn) {
  const int nv = static_cast<int>(vars.size());
  for (int n = 1; n <= max_worlds; ++n) {
    if (n * n + n * nv > 62) throw Error("enumerate_models: bounds too large to enumerate");
    std::vector<std::vector<int>> perms;
    {
      std::vector<int> p(n);
      std::iota(p.begin(), p.end(), 0);
      do {
        perms.push_back(p);
      } while (std::next_permutation(p.begin(), p.end()));
    }
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("w" + std::to_string(i));

    const std::uint64_t edge_space = std::uint64_t{1} << (n * n);
    const std::uint64_t val_space = std::uint64_t{1} << (n * nv);
    for (std::uint64_t e = 0; e < edge_space; ++e) {
      for (std::uint64_t va = 0; va < val_space; ++va) {
        // keep only the lexicographically least relabeling of each model
        bool canonical = true;
        for (const std::vector<int>& p : perms) {
          std::uint64_t e2 = 0, va2 = 0;
          for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
              if ((e >> (i * n + j)) & 1) e2 |= std::uint64_t{1} << (p[i] * n + p[j]);
            }
          }
          for (int x = 0; x < nv; ++x) {
            for (int i = 0; i < n; ++i) {
              if ((va >> (x * n + i)) & 1) va2 |= std::uint64_t{1} << (x * n + p[i]);
            }
          }
          if (e2 < e || (e2 == e && va2 < va)) {
            canonical = false;
            break;
          }
        }
        if (!canonical) continue;

        KripkeModel m(vars, names);
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            if ((e >> (i * n + j)) & 1) m.add_edge(i, j);
          }
        }
        for (int x = 0; x < nv; ++x) {
          for (int i = 0; i < n; ++i) {
            if ((va >> (x * n + i)) & 1) m.set_true(x, i);
          }
        }
        fn(m);
      }
    }
  }
}

std::vector<Team> all_teams(const KripkeModel& m, bool include_empty) {
  std::vector<Team> out;
  const std::uint64_t limit = std::uint64_t{1} << m.world_count();
  for (std::uint64_t mask = include_empty ? 0 : 1; mask < limit; ++mask) out.push_back(Team{mask});
  return out;
}

namespace {

int ast_size(const Formula& f) {
  int n = 1;
  for (const Formula& a : f.args()) n += ast_size(a);
  return n;
}

// size-indexed exhaustive formula enumeration from the given leaves
std::vector<Formula> enumerate_formulas(const std::vector<Formula>& leaves, bool with_lor,
                                        int max_size, int max_depth) {
  std::vector<std::vector<Formula>> by_size(max_size + 1);
  for (const Formula& l : leaves) {
    int s = ast_size(l);
    if (s <= max_size) by_size[s].push_back(l);
  }
  for (int s = 2; s <= max_size; ++s) {
    for (const Formula& f : by_size[s - 1]) {
      if (f.modal_depth() < max_depth) {
        by_size[s].push_back(Formula::diamond(f));
        by_size[s].push_back(Formula::box(f));
      }
    }
    for (int ls = 1; ls <= s - 2; ++ls) {
      int rs = s - 1 - ls;
      for (const Formula& l : by_size[ls]) {
        for (const Formula& r : by_size[rs]) {
          by_size[s].push_back(Formula::conj(l, r));
          by_size[s].push_back(Formula::split_or(l, r));
          if (with_lor) by_size[s].push_back(Formula::class_or(l, r));
        }
      }
    }
  }
  std::vector<Formula> out;
  for (auto& bucket : by_size) {
    for (Formula& f : bucket) out.push_back(std::move(f));
  }
  return out;
}

std::vector<Formula> ml_leaves(const std::vector<std::string>& vars) {
  std::vector<Formula> leaves{Formula::top(), Formula::bot()};
  for (const std::string& v : vars) {
    leaves.push_back(Formula::prop(v));
    leaves.push_back(Formula::neg_prop(v));
  }
  return leaves;
}

}  // namespace

std::vector<Formula> enumerate_ml(const std::vector<std::string>& vars, int max_size,
                                  int max_depth) {
  return enumerate_formulas(ml_leaves(vars), false, max_size, max_depth);
}

// ---------------------------------------------------------------------------
// sampler

namespace {
constexpr int kFeatLor = 1;
constexpr int kFeatIndep = 2;
constexpr int kFeatIncl = 4;
constexpr int kFeatCNeg = 8;
}  // namespace

FormulaSampler::FormulaSampler(std::uint64_t seed, std::vector<std::string> vars)
    : state_(seed ^ 0x6a09e667f3bcc908ULL), vars_(std::move(vars)) {
  if (vars_.empty()) throw Error("FormulaSampler: needs at least one variable");
}

std::uint64_t FormulaSampler::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

Formula FormulaSampler::ml(int max_size, int max_depth) { return gen(max_size, max_depth, 0); }
Formula FormulaSampler::emil_lor(int max_size, int max_depth) {
  return gen(max_size, max_depth, kFeatLor | kFeatIndep);
}
Formula FormulaSampler::emincl(int max_size, int max_depth) {
  return gen(max_size, max_depth, kFeatIncl);
}
Formula FormulaSampler::mtl(int max_size, int max_depth) {
  return gen(max_size, max_depth, kFeatCNeg | kFeatLor);
}

Formula FormulaSampler::gen(int budget, int depth_left, int features) {
  auto leaf = [&]() -> Formula {
    switch (next() % 4) {
      case 0: return Formula::top();
      case 1: return Formula::bot();
      case 2: return Formula::prop(vars_[next() % vars_.size()]);
      default: return Formula::neg_prop(vars_[next() % vars_.size()]);
    }
  };
  if (budget <= 1) return leaf();

  enum Choice { Leaf, Unary, Binary, Lor, CNeg, Indep, Incl };
  std::vector<Choice> menu{Leaf, Binary, Binary};
  if (depth_left > 0) menu.insert(menu.end(), {Unary, Unary});
  if (features & kFeatLor) menu.push_back(Lor);
  if (features & kFeatCNeg) menu.insert(menu.end(), {CNeg, CNeg});
  if ((features & kFeatIndep) && budget >= 3) menu.push_back(Indep);
  if ((features & kFeatIncl) && budget >= 3) menu.push_back(Incl);

  auto small_ml_arg = [&] { return gen(std::min(3, budget - 1), std::min(1, depth_left), 0); };

  switch (menu[next() % menu.size()]) {
    case Leaf: return leaf();
    case Unary: {
      Formula sub = gen(budget - 1, depth_left - 1, features);
      return next() & 1 ? Formula::diamond(sub) : Formula::box(sub);
    }
    case CNeg: return Formula::cneg(gen(budget - 1, depth_left, features));
    case Binary:
    case Lor: {
      int ls = budget <= 3 ? 1 : 1 + static_cast<int>(next() % (budget - 2));
      Formula l = gen(ls, depth_left, features);
      Formula r = gen(budget - 1 - ls, depth_left, features);
      if ((features & kFeatLor) && (next() % 3 == 0)) return Formula::class_or(l, r);
      return next() & 1 ? Formula::conj(l, r) : Formula::split_or(l, r);
    }
    case Indep: {
      std::vector<Formula> p{small_ml_arg()};
      std::vector<Formula> r;
      if (next() & 1) r.push_back(small_ml_arg());
      std::vector<Formula> q{small_ml_arg()};
      if (next() % 3 == 0) p.push_back(small_ml_arg());
      return Formula::indep(std::move(p), std::move(r), std::move(q));
    }
    case Incl: {
      std::size_t width = 1 + (next() & 1);
      std::vector<Formula> lhs, rhs;
      for (std::size_t i = 0; i < width; ++i) {
        lhs.push_back(small_ml_arg());
        rhs.push_back(small_ml_arg());
      }
      return Formula::incl(std::move(lhs), std::move(rhs));
    }
  }
  return leaf();
}

// ---------------------------------------------------------------------------
// report plumbing

namespace {

std::string model_json(const KripkeModel& m, Team t) {
  return save_model(ModelFile{m, {{"T", t}}});
}

void falsify(CheckReport& r, const KripkeModel& m, Team t, std::string formula, std::string note) {
  if (r.verdict == Verdict::Falsified) return;
  r.verdict = Verdict::Falsified;
  Counterexample cex;
  cex.model_a = model_json(m, t);
  cex.team_a = team_names(m, t);
  cex.formula = std::move(formula);
  cex.note = std::move(note);
  r.counterexample = std::move(cex);
}

void falsify_pair(CheckReport& r, const KripkeModel& m1, Team t1, const KripkeModel& m2, Team t2,
                  std::string formula, std::string note) {
  if (r.verdict == Verdict::Falsified) return;
  falsify(r, m1, t1, std::move(formula), std::move(note));
  r.counterexample->model_b = model_json(m2, t2);
  r.counterexample->team_b = team_names(m2, t2);
}

template <typename Fn>
CheckReport run_claim(std::string claim, Fn&& body) {
  CheckReport r;
  r.claim = std::move(claim);
  r.verdict = Verdict::Verified;
  auto start = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const OverflowError& e) {
    r.verdict = Verdict::Skipped;
    r.details = e.what();
  } catch (const EvalError& e) {
    r.verdict = Verdict::Skipped;
    r.details = e.what();
  }
  r.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                 .count();
  return r;
}

std::string typeset_key(const std::vector<bisim::CanonicalType>& all, Team t) {
  std::set<std::string> keys;
  for (std::size_t w = 0; w < all.size(); ++w) {
    if (t.contains(static_cast<int>(w))) keys.insert(all[w].key());
  }
  std::string out;
  for (const std::string& k : keys) {
    out += k;
    out += '|';
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// generic checks

CheckReport equiv_check(const Formula& f, const Formula& g, const Bounds& b) {
  return run_claim("equiv " + render(f) + " == " + render(g), [&](CheckReport& r) {
    for (const std::string& v : f.variables()) {
      if (std::find(b.vars.begin(), b.vars.end(), v) == b.vars.end())
        throw Error("equiv_check: formula variable outside the bounds universe: " + v);
    }
    for (const std::string& v : g.variables()) {
      if (std::find(b.vars.begin(), b.vars.end(), v) == b.vars.end())
        throw Error("equiv_check: formula variable outside the bounds universe: " + v);
    }
    enumerate_models(b.max_worlds, b.vars, [&](const KripkeModel& m) {
      if (r.verdict == Verdict::Falsified) return;
      BatchEvaluator ef(m, f, base_cfg(b));
      BatchEvaluator eg(m, g, base_cfg(b));
      for (Team t : all_teams(m, b.include_empty_team)) {
        ++r.instances;
        bool a = ef.eval(t);
        bool c = eg.eval(t);
        if (a != c) {
          falsify(r, m, t, render(f),
                  "lhs=" + std::string(a ? "true" : "false") + " rhs=" + (c ? "true" : "false") +
                      " for rhs formula " + render(g));
          return;
        }
      }
    });
  });
}

CheckReport closure_check(const Formula& f, ClosureProperty prop, const Bounds& b) {
  const char* prop_name = prop == ClosureProperty::Flat ? "flat"
                          : prop == ClosureProperty::DownwardClosed ? "downward-closed"
                          : prop == ClosureProperty::UnionClosed ? "union-closed"
                                                                 : "empty-team";
  return run_claim(std::string(prop_name) + " " + render(f), [&](CheckReport& r) {
    enumerate_models(b.max_worlds, b.vars, [&](const KripkeModel& m) {
      if (r.verdict == Verdict::Falsified) return;
      BatchEvaluator ev(m, f, base_cfg(b));
      const int n = m.world_count();
      const std::uint64_t space = std::uint64_t{1} << n;
      std::vector<bool> sat(space);
      for (std::uint64_t mask = 0; mask < space; ++mask) sat[mask] = ev.eval(Team{mask});

      switch (prop) {
        case ClosureProperty::Flat:
          for (std::uint64_t mask = 0; mask < space; ++mask) {
            ++r.instances;
            bool pointwise = true;
            for (int w = 0; w < n; ++w) {
              if ((mask >> w) & 1) pointwise = pointwise && sat[std::uint64_t{1} << w];
            }
            if (sat[mask] != pointwise) {
              falsify(r, m, Team{mask}, render(f),
                      sat[mask] ? "team satisfies but some singleton fails"
                                : "all singletons satisfy but the team fails");
              return;
            }
          }
          break;
        case ClosureProperty::DownwardClosed:
          for (std::uint64_t mask = 0; mask < space; ++mask) {
            ++r.instances;
            if (!sat[mask]) continue;
            std::uint64_t sub = mask;
            while (true) {
              if (!sat[sub]) {
                falsify(r, m, Team{mask}, render(f),
                        "satisfied team has an unsatisfied subteam " +
                            nlohmann::json(team_names(m, Team{sub})).dump());
                return;
              }
              if (sub == 0) break;
              sub = (sub - 1) & mask;
            }
          }
          break;
        case ClosureProperty::UnionClosed:
          for (std::uint64_t a = 0; a < space; ++a) {
            if (!sat[a]) continue;
            for (std::uint64_t c = 0; c < space; ++c) {
              if (!sat[c]) continue;
              ++r.instances;
              if (!sat[a | c]) {
                falsify(r, m, Team{a}, render(f),
                        "union with team " + nlohmann::json(team_names(m, Team{c})).dump() +
                            " is not satisfied");
                return;
              }
            }
          }
          break;
        case ClosureProperty::EmptyTeam:
          ++r.instances;
          if (!sat[0]) {
            falsify(r, m, Team{0}, render(f), "empty team does not satisfy the formula");
            return;
          }
          break;
      }
    });
  });
}

CheckReport invariance_check(const TeamPredicate& pred, const std::string& name,
                             InvarianceMode mode, const Bounds& b) {
  std::string mode_name = std::holds_alternative<KInvariance>(mode)
                              ? std::to_string(std::get<KInvariance>(mode).k) + "-invariance"
                          : std::holds_alternative<FullInvariance>(mode)
                              ? "bisimulation-invariance"
                              : std::to_string(std::get<DLocality>(mode).d) + "-locality";
  return run_claim(mode_name + " of " + name, [&](CheckReport& r) {
    if (std::holds_alternative<DLocality>(mode)) {
      int d = std::get<DLocality>(mode).d;
      enumerate_models(b.max_worlds, b.vars, [&](const KripkeModel& m) {
        if (r.verdict == Verdict::Falsified) return;
        for (Team t : all_teams(m, false)) {
          ++r.instances;
          Neighborhood nb = neighborhood(m, t, d);
          if (pred(m, t) != pred(nb.model, nb.team)) {
            falsify(r, m, t, name,
                    "membership changes when restricted to the " + std::to_string(d) +
                        "-neighborhood");
            return;
          }
        }
      });
      return;
    }

    const int level = std::holds_alternative<KInvariance>(mode) ? std::get<KInvariance>(mode).k
                                                                : 2 * b.max_worlds;
    struct First {
      KripkeModel model;
      Team team;
      bool value;
    };
    std::map<std::string, First> buckets;
    enumerate_models(b.max_worlds, b.vars, [&](const KripkeModel& m) {
      if (r.verdict == Verdict::Falsified) return;
      std::vector<bisim::CanonicalType> types = bisim::ktype_all(m, level);
      for (Team t : all_teams(m, false)) {
        ++r.instances;
        std::string key = typeset_key(types, t);
        bool value = pred(m, t);
        auto it = buckets.find(key);
        if (it == buckets.end()) {
          buckets.emplace(std::move(key), First{m, t, value});
        } else if (it->second.value != value) {
          falsify_pair(r, it->second.model, it->second.team, m, t, name,
                       "equivalent teams disagree on membership at level " +
                           std::to_string(level));
          return;
        }
      }
    });
  });
}

CheckReport invariance_check(const Formula& f, InvarianceMode mode, const Bounds& b) {
  EvalConfig cfg = base_cfg(b);
  TeamPredicate pred = [f, cfg](const KripkeModel& m, Team t) {
    return semantics::eval(m, t, f, cfg);
  };
  return invariance_check(pred, render(f), mode, b);
}

// ---------------------------------------------------------------------------
// the suite

CheckReport claim_suite_flatness(const Bounds& b) {
  return run_claim("flatness", [&](CheckReport& r) {
    std::vector<Formula> formulas =
        enumerate_ml(b.vars, b.exhaustive_formula_size, b.max_modal_depth);
    FormulaSampler sampler(b.seed, b.vars);
    for (int i = 0; i < b.sample_count; ++i)
      formulas.push_back(sampler.ml(b.sample_formula_size, b.max_modal_depth));

    EvalConfig general{.strategy = Strategy::General};
    enumerate_models(b.max_worlds, b.vars, [&](const KripkeModel& m) {
      if (r.verdict == Verdict::Falsified) return;
      const int n = m.world_count();
      for (const Formula& f : formulas) {
        BatchEvaluator ev(m, f, general);
        BatchEvaluator pointed(m, f);
        for (Team t : all_teams(m, true)) {
          ++r.instances;
          bool team_truth = ev.eval(t);
          bool singleton_truth = true;
          bool pointed_truth = true;
          for (int w = 0; w < n; ++w) {
            if (t.contains(w)) {
              singleton_truth = singleton_truth && ev.eval(Team::single(w));
              pointed_truth = pointed_truth && pointed.eval_pointed(w);
            }
          }
          if (team_truth != singleton_truth || team_truth != pointed_truth) {
            falsify(r, m, t, render(f),
                    "team/singleton/pointed truths: " + std::to_string(team_truth) +
                        std::to_string(singleton_truth) + std::to_string(pointed_truth));
            return;
          }
        }
      }
    });
    r.details = std::to_string(formulas.size()) + " ML formulas";
  });
}

CheckReport claim_suite_dep_encoding(const Bounds& b) {
  return run_claim("dep-atom-encoding", [&](CheckReport& r) {
    const std::vector<std::string> pool{"p", "q", "r"};
    for (int nargs = 1; nargs <= 3; ++nargs) {
      std::vector<std::string> vars(pool.begin(), pool.begin() + nargs);
      std::vector<Formula> args;
      for (const std::string& v : vars) args.push_back(Formula::prop(v));
      Formula atom = Formula::dep(args);
      Formula rewritten = desugar(atom).result;

      enumerate_models(b.max_worlds, vars, [&](const KripkeModel& m) {
        if (r.verdict == Verdict::Falsified) return;
        BatchEvaluator ea(m, atom);
        BatchEvaluator eb(m, rewritten);
        for (Team t : all_teams(m, false)) {
          ++r.instances;
          if (ea.eval(t) != eb.eval(t)) {
            falsify(r, m, t, render(atom), "differs from its rewriting " + render(rewritten));
            return;
          }
        }
      });
      if (r.verdict == Verdict::Falsified) return;
    }
  });
}

CheckReport claim_suite_splitjunction(const Bounds& b) {
  return run_claim("splitjunction", [&](CheckReport& r) {
    const std::vector<std::string> vars{"p"};
    std::vector<bisim::CanonicalType> types = hintikka::all_types(vars, 1);
    std::vector<Formula> members;
    for (const auto& ct : types) members.push_back(hintikka::formula_of_type(ct, vars));

    EvalConfig general{.strategy = Strategy::General};
    const std::uint64_t subsets = std::uint64_t{1} << members.size();
    enumerate_models(b.max_worlds, vars, [&](const KripkeModel& m) {
      if (r.verdict == Verdict::Falsified) return;
      const int n = m.world_count();
      // pointed truth of each member formula, per world
      std::vector<std::uint64_t> truth(members.size(), 0);
      for (std::size_t i = 0; i < members.size(); ++i) {
        BatchEvaluator ev(m, members[i]);
        for (int w = 0; w < n; ++w) {
          if (ev.eval_pointed(w)) truth[i] |= std::uint64_t{1} << w;
        }
      }
      for (std::uint64_t sub = 1; sub < subsets; ++sub) {
        std::vector<Formula> chosen;
        std::uint64_t covered = 0;
        for (std::size_t i = 0; i < members.size(); ++i) {
          if ((sub >> i) & 1) {
            chosen.push_back(members[i]);
            covered |= truth[i];
          }
        }
        Formula disjunction = chosen.back();
        for (std::size_t i = chosen.size() - 1; i-- > 0;)
          disjunction = Formula::split_or(chosen[i], disjunction);
        BatchEvaluator ev(m, disjunction, general);
        for (Team t : all_teams(m, true)) {
          ++r.instances;
          bool split_truth = ev.eval(t);
          bool witness_truth = (t.bits & ~covered) == 0;
          if (split_truth != witness_truth) {
            falsify(r, m, t, render(disjunction),
                    "split disjunction disagrees with pointwise member cover");
            return;
          }
        }
      }
    });
  });
}

CheckReport claim_suite_team_char_formula(const Bounds& b) {
  return run_claim("team-char-formula", [&](CheckReport& r) {
    const std::vector<std::string> vars{"p"};
    long long covered_pairs = 0;
    std::size_t distinct_total = 0;
    for (int k = 0; k <= b.max_k && r.verdict == Verdict::Verified; ++k) {
      // one representative characteristic formula per realized type set
      std::map<std::string, Formula> chi;
      long long team_count = 0;
      enumerate_models(b.max_worlds, vars, [&](const KripkeModel& m) {
        std::vector<bisim::CanonicalType> types = bisim::ktype_all(m, k);
        for (Team t : all_teams(m, false)) {
          ++team_count;
          std::string key = typeset_key(types, t);
          if (!chi.count(key)) chi.emplace(std::move(key), hintikka::hintikka_team(m, t, k));
        }
      });
      distinct_total += chi.size();
      covered_pairs += team_count * team_count;

      for (const auto& entry : chi) {
        if (r.verdict == Verdict::Falsified) break;
        const std::string& key = entry.first;
        const Formula& formula = entry.second;
        enumerate_models(b.max_worlds, vars, [&](const KripkeModel& m1) {
          if (r.verdict == Verdict::Falsified) return;
          BatchEvaluator ev(m1, formula);
          std::vector<bisim::CanonicalType> types = bisim::ktype_all(m1, k);
          for (Team t1 : all_teams(m1, false)) {
            ++r.instances;
            bool sat = ev.eval(t1);
            bool bisimilar = typeset_key(types, t1) == key;
            if (sat != bisimilar) {
              falsify(r, m1, t1, render(formula),
                      std::string("characteristic formula ") +
                          (sat ? "satisfied by a non-bisimilar team"
                               : "rejected by a bisimilar team") +
                          " at level " + std::to_string(k));
              return;
            }
          }
        });
      }
    }
    r.details = "covers " + std::to_string(covered_pairs) + " ordered team pairs via " +
                std::to_string(distinct_total) + " distinct characteristic formulas";
  });
}

CheckReport claim_suite_singleton_independence(const Bounds& b_in) {
  const Bounds b = pinned(b_in, {"p", "q"});
  return run_claim("singleton-independence", [&](CheckReport& r) {
    std::vector<Formula> pool{Formula::prop("p"), Formula::neg_prop("q"),
                              Formula::diamond(Formula::prop("p")), Formula::prop("q")};
    std::vector<Formula> atoms;
    for (const Formula& p : pool) {
      for (const Formula& q : pool) {
        atoms.push_back(Formula::indep({p}, {}, {q}));
        atoms.push_back(Formula::indep({p}, {pool[3]}, {q}));
        if (p != q) atoms.push_back(Formula::indep({p, q}, {}, {q}));
      }
    }
    enumerate_models(b.max_worlds, b.vars, [&](const KripkeModel& m) {
      if (r.verdict == Verdict::Falsified) return;
      for (const Formula& atom : atoms) {
        BatchEvaluator ev(m, atom);
        for (int w = 0; w < m.world_count(); ++w) {
          ++r.instances;
          if (!ev.eval(Team::single(w))) {
            falsify(r, m, Team::single(w), render(atom),
                    "independence atom fails on a singleton team");
            return;
          }
        }
      }
    });
  });
}

namespace {

// valuation-only enumeration for edge-free models
void enumerate_edgefree(int max_worlds, const std::vector<std::string>& vars,
                        const std::function<void(const KripkeModel&)>& fn) {
  const int nv = static_cast<int>(vars.size());
  for (int n = 1; n <= max_worlds; ++n) {
    std::vector<std::vector<int>> perms;
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    do {
      perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("w" + std::to_string(i));
    const std::uint64_t val_space = std::uint64_t{1} << (n * nv);
    for (std::uint64_t va = 0; va < val_space; ++va) {
      bool canonical = true;
      for (const std::vector<int>& perm : perms) {
        std::uint64_t va2 = 0;
        for (int x = 0; x < nv; ++x) {
          for (int i = 0; i < n; ++i) {
            if ((va >> (x * n + i)) & 1) va2 |= std::uint64_t{1} << (x * n + perm[i]);
          }
        }
        if (va2 < va) {
          canonical = false;
          break;
        }
      }
      if (!canonical) continue;
      KripkeModel m(vars, names);
      for (int x = 0; x < nv; ++x) {
        for (int i = 0; i < n; ++i) {
          if ((va >> (x * n + i)) & 1) m.set_true(x, i);
        }
      }
      fn(m);
    }
  }
}

}  // namespace

CheckReport claim_suite_edgefree_collapse(const Bounds& b_in) {
  const Bounds b = pinned(b_in, {"p", "q"});
  return run_claim("edgefree-collapse", [&](CheckReport& r) {
    // the two-world separation witness: E p holds on {w1, w2}, fails on {w2}
    KripkeModel witness({"p"}, {"w1", "w2"});
    witness.set_true(0, 0);
    Team both = Team::single(0).add(1);
    Team second = Team::single(1);
    Formula e_p = Formula::exists(Formula::prop("p"));
    ++r.instances;
    if (!semantics::eval(witness, both, e_p) || semantics::eval(witness, second, e_p)) {
      falsify(r, witness, both, render(e_p), "separation witness does not behave as expected");
      return;
    }
    if (bisim::distinguishing_k(witness, both, witness, second, 3) != std::optional<int>(0)) {
      falsify(r, witness, both, render(e_p), "witness teams should differ already at level 0");
      return;
    }

    // every formula of the fragment collapses to singletons on edge-free
    // models, so none of them can express the witness property
    std::vector<Formula> leaves = ml_leaves(b.vars);
    Formula p = Formula::prop("p");
    Formula q = Formula::prop("q");
    leaves.push_back(Formula::indep({p}, {}, {q}));
    leaves.push_back(Formula::indep({q}, {}, {p}));
    std::vector<Formula> formulas =
        enumerate_formulas(leaves, true, b.exhaustive_formula_size, b.max_modal_depth);
    FormulaSampler sampler(b.seed + 1, b.vars);
    const int samples = std::max(b.sample_count, 1000);
    for (int i = 0; i < samples; ++i)
      formulas.push_back(sampler.emil_lor(std::max(b.sample_formula_size, 12), b.max_modal_depth));

    enumerate_edgefree(b.max_worlds, b.vars, [&](const KripkeModel& m) {
      if (r.verdict == Verdict::Falsified) return;
      const int n = m.world_count();
      for (const Formula& f : formulas) {
        BatchEvaluator ev(m, f);
        for (Team t : all_teams(m, false)) {
          ++r.instances;
          if (!ev.eval(t)) continue;
          for (int w = 0; w < n; ++w) {
            if (t.contains(w) && !ev.eval(Team::single(w))) {
              falsify(r, m, t, render(f),
                      "satisfied team fails to collapse to member " + m.world_name(w));
              return;
            }
          }
        }
      }
    });
    if (r.verdict == Verdict::Verified)
      r.details = "witness: p-world w1 with empty world w2, no edges; E p holds on {w1,w2} and "
                  "fails on {w2}, teams differ at k=0; no formula among " +
                  std::to_string(formulas.size()) +
                  " enumerated fragment formulas separates them";
  });
}

CheckReport claim_suite_union_closure(const Bounds& b_in) {
  const Bounds b = pinned(b_in, {"p", "q"});
  return run_claim("union-closure-separation", [&](CheckReport& r) {
    // "exactly one of E p, E q" is not union closed: witnessed by two
    // singleton teams over complementary valuations
    Formula exactly_one = parse("(E p & ~E q) lor (~E p & E q)");
    KripkeModel m({"p", "q"}, {"w1", "w2"});
    m.set_true(0, 0);
    m.set_true(1, 1);
    Team t1 = Team::single(0);
    Team t2 = Team::single(1);
    r.instances += 3;
    if (!semantics::eval(m, t1, exactly_one) || !semantics::eval(m, t2, exactly_one) ||
        semantics::eval(m, t1 | t2, exactly_one)) {
      falsify(r, m, t1 | t2, render(exactly_one), "witness behaves unexpectedly");
      return;
    }
    CheckReport closure = closure_check(exactly_one, ClosureProperty::UnionClosed, b);
    r.instances += closure.instances;
    if (closure.verdict != Verdict::Falsified) {
      falsify(r, m, t1 | t2, render(exactly_one),
              "the property should fail union closure within bounds");
      return;
    }

    if (r.verdict == Verdict::Verified)
      r.details = "witness: w1 (p only) and w2 (q only) satisfy the property as singletons, "
                  "their union does not";

    // inclusion-atom formulas stay union closed
    FormulaSampler sampler(b.seed + 2, b.vars);
    const int samples = std::max(b.sample_count, 1000);
    for (int i = 0; i < samples && r.verdict == Verdict::Verified; ++i) {
      Formula f = sampler.emincl(8, b.max_modal_depth);
      KripkeModel rm = random_model(b.seed + 100 + i, 1 + static_cast<int>(i % 4),
                                    0.4, b.vars);
      BatchEvaluator ev(rm, f);
      const std::uint64_t space = std::uint64_t{1} << rm.world_count();
      std::vector<bool> sat(space);
      for (std::uint64_t mask = 0; mask < space; ++mask) sat[mask] = ev.eval(Team{mask});
      for (std::uint64_t a = 0; a < space && r.verdict == Verdict::Verified; ++a) {
        for (std::uint64_t c = 0; c < space; ++c) {
          ++r.instances;
          if (sat[a] && sat[c] && !sat[a | c]) {
            falsify(r, rm, Team{a | c}, render(f), "inclusion-atom formula not union closed");
            break;
          }
        }
      }
    }
    if (r.verdict == Verdict::Verified)
      r.details += "; " + std::to_string(samples) + " sampled inclusion-atom formulas union closed";
  });
}

CheckReport claim_suite_e_via_inclusion(const Bounds& b_in) {
  const Bounds b = pinned(b_in, {"p", "q"});
  return run_claim("e-via-inclusion", [&](CheckReport& r) {
    std::vector<Formula> pool{parse("p"), parse("!p"), parse("<>p"), parse("p & q")};
    for (const Formula& f : pool) {
      Formula lhs = Formula::exists(f);
      Formula rhs = Formula::incl({Formula::top()}, {f});
      CheckReport sub = equiv_check(lhs, rhs, b);  // nonempty teams
      r.instances += sub.instances;
      if (sub.verdict == Verdict::Falsified) {
        r.verdict = Verdict::Falsified;
        r.counterexample = sub.counterexample;
        return;
      }
    }
    // the two sides differ on the empty team, which is why results are
    // stated for nonempty teams only
    KripkeModel m({"p", "q"}, {"w0"});
    ++r.instances;
    bool e_empty = semantics::eval(m, Team::empty(), Formula::exists(parse("p")));
    bool inc_empty = semantics::eval(m, Team::empty(), parse("inc(top ; p)"));
    if (e_empty || !inc_empty) {
      falsify(r, m, Team::empty(), "E p vs inc(top ; p)",
              "expected E to fail and the inclusion atom to hold on the empty team");
      return;
    }
    r.details = "agrees on all nonempty teams; empty team differs as expected";
  });
}

CheckReport claim_suite_group_cover(const Bounds& b_in) {
  const Bounds b = pinned(b_in, {"p", "q"});
  return run_claim("group-cover-atom", [&](CheckReport& r) {
    fo::AtomRegistry registry;
    std::vector<std::pair<int, int>> dims{{1, 1}, {1, 2}, {2, 1}, {2, 2}};
    for (const auto& dim : dims) {
      fo::GeneralizedAtom atom = fo::group_cover_atom(dim.first, dim.second);
      registry.register_atom(atom.name, atom.arity, atom.sentence);
    }

    std::vector<Formula> pool{parse("p"), parse("q"), parse("<>p"), parse("!q")};
    for (const auto& dim : dims) {
      if (r.verdict != Verdict::Verified) break;
      const int n = dim.first;
      const int groups = dim.second;
      const int width = n * groups;
      std::vector<Formula> base = pool;
      if (width > 2) base = {pool[0], pool[1]};
      // all argument tuples from the pool
      std::vector<std::vector<Formula>> tuples{{}};
      for (int i = 0; i < width; ++i) {
        std::vector<std::vector<Formula>> next;
        for (const auto& t : tuples) {
          for (const Formula& f : base) {
            auto copy = t;
            copy.push_back(f);
            next.push_back(std::move(copy));
          }
        }
        tuples = std::move(next);
      }
      std::string atom_name = fo::group_cover_atom(n, groups).name;
      enumerate_models(b.max_worlds, b.vars, [&](const KripkeModel& m) {
        if (r.verdict == Verdict::Falsified) return;
        for (const auto& args : tuples) {
          for (Team t : all_teams(m, true)) {
            ++r.instances;
            bool native = fo::group_cover_holds(m, t, args, n, groups);
            bool via_fo = semantics::gen_atom_holds(m, t, atom_name, args, registry);
            if (native != via_fo) {
              Formula as_formula = Formula::gen_atom(atom_name, args);
              falsify(r, m, t, render(as_formula),
                      "native evaluation and the FO definition disagree");
              return;
            }
          }
        }
      });
    }
    if (r.verdict != Verdict::Verified) return;

    // applied to the characteristic sets of two teams, the atom expresses
    // "bisimilar to one of them", matching the disjunction of their
    // characteristic formulas
    const std::vector<std::string> vars{"p"};
    KripkeModel ma({"p"}, {"a0", "a1"});
    ma.set_true(0, 0);
    ma.add_edge(0, 1);
    KripkeModel mb({"p"}, {"b0"});
    mb.set_true(0, 0);
    mb.add_edge(0, 0);
    Team ta = Team::single(0).add(1);
    Team tb = Team::single(0);
    const int k = 1;
    std::vector<Formula> set_a = hintikka::hintikka_team_set(ma, ta, k);
    std::vector<Formula> set_b = hintikka::hintikka_team_set(mb, tb, k);
    const int width = static_cast<int>(std::max(set_a.size(), set_b.size()));
    auto pad = [width](std::vector<Formula> v) {
      while (static_cast<int>(v.size()) < width) v.push_back(v.back());
      return v;
    };
    set_a = pad(std::move(set_a));
    set_b = pad(std::move(set_b));
    std::vector<Formula> args = set_a;
    args.insert(args.end(), set_b.begin(), set_b.end());
    Formula chi_a = hintikka::hintikka_team(ma, ta, k);
    Formula chi_b = hintikka::hintikka_team(mb, tb, k);

    enumerate_models(b.max_worlds, vars, [&](const KripkeModel& m1) {
      if (r.verdict == Verdict::Falsified) return;
      BatchEvaluator ea(m1, chi_a);
      BatchEvaluator eb(m1, chi_b);
      for (Team t1 : all_teams(m1, false)) {
        ++r.instances;
        bool atom_truth = fo::group_cover_holds(m1, t1, args, width, 2);
        bool chi_truth = ea.eval(t1) || eb.eval(t1);
        if (atom_truth != chi_truth) {
          falsify(r, m1, t1, "group cover over characteristic sets",
                  "atom and characteristic disjunction disagree");
          return;
        }
      }
    });
  });
}

CheckReport claim_suite_standard_translation(const Bounds& b) {
  return run_claim("standard-translation", [&](CheckReport& r) {
    // pointed adequacy
    std::vector<Formula> formulas =
        enumerate_ml(b.vars, b.exhaustive_formula_size, b.max_modal_depth);
    std::vector<fo::FOFormula> translated;
    translated.reserve(formulas.size());
    for (const Formula& f : formulas) translated.push_back(fo::standard_translation(f, "x"));

    enumerate_models(b.max_worlds, b.vars, [&](const KripkeModel& m) {
      if (r.verdict == Verdict::Falsified) return;
      fo::FOStructure s = fo::to_structure(m, Team::empty());
      for (std::size_t i = 0; i < formulas.size(); ++i) {
        BatchEvaluator ev(m, formulas[i]);
        for (int w = 0; w < m.world_count(); ++w) {
          ++r.instances;
          bool modal = ev.eval_pointed(w);
          bool fo_truth = fo::eval_fo(s, translated[i], {{"x", w}});
          if (modal != fo_truth) {
            falsify(r, m, Team::single(w), render(formulas[i]),
                    "pointed evaluation and standard translation disagree");
            return;
          }
        }
      }
    });
    if (r.verdict != Verdict::Verified) return;

    // team-level translation of characteristic formulas
    const std::vector<std::string> vars{"p"};
    for (int k = 0; k <= b.max_k && r.verdict == Verdict::Verified; ++k) {
      struct ChiPair {
        Formula modal;
        fo::FOFormula fo;
      };
      std::map<std::string, ChiPair> chi;
      enumerate_models(b.max_worlds, vars, [&](const KripkeModel& m) {
        std::vector<bisim::CanonicalType> types = bisim::ktype_all(m, k);
        for (Team t : all_teams(m, false)) {
          std::string key = typeset_key(types, t);
          if (!chi.count(key))
            chi.emplace(std::move(key),
                        ChiPair{hintikka::hintikka_team(m, t, k), fo::chi_to_fo(m, t, k)});
        }
      });
      for (const auto& entry : chi) {
        if (r.verdict == Verdict::Falsified) break;
        const ChiPair& pair = entry.second;
        enumerate_models(b.max_worlds, vars, [&](const KripkeModel& m1) {
          if (r.verdict == Verdict::Falsified) return;
          BatchEvaluator ev(m1, pair.modal);
          for (Team t1 : all_teams(m1, false)) {
            ++r.instances;
            bool modal_truth = ev.eval(t1);
            bool fo_truth = fo::eval_fo(fo::to_structure(m1, t1), pair.fo);
            if (modal_truth != fo_truth) {
              falsify(r, m1, t1, render(pair.modal),
                      "characteristic formula and its FO translation disagree at level " +
                          std::to_string(k));
              return;
            }
          }
        });
      }
    }
  });
}

std::vector<CheckReport> claim_suite(const Bounds& b) {
  std::vector<CheckReport> out;
  out.push_back(claim_suite_flatness(b));
  out.push_back(claim_suite_dep_encoding(b));
  out.push_back(claim_suite_splitjunction(b));
  out.push_back(claim_suite_team_char_formula(b));
  out.push_back(claim_suite_singleton_independence(b));
  out.push_back(claim_suite_edgefree_collapse(b));
  out.push_back(claim_suite_union_closure(b));
  out.push_back(claim_suite_e_via_inclusion(b));
  out.push_back(claim_suite_group_cover(b));
  out.push_back(claim_suite_standard_translation(b));
  return out;
}

}  // namespace teamsem::oracle
