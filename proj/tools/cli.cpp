#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include "teamsem/bisim.hpp"
#include "teamsem/fo.hpp"
#include "teamsem/hintikka.hpp"
#include "teamsem/kripke.hpp"
#include "teamsem/oracle.hpp"
#include "teamsem/semantics.hpp"

namespace teamsem::cli {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_vars(const std::string& list) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : list) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

semantics::EvalConfig make_eval_config(const fo::AtomRegistry* atoms) {
  semantics::EvalConfig cfg;
  cfg.atoms = atoms;
  if (const char* cap = std::getenv("TEAMCHECK_MAX_TEAM")) {
    int value = std::atoi(cap);
    if (value > 0) cfg.max_split_team = value;
  }
  return cfg;
}

Formula parse_with(const std::string& text, const fo::AtomRegistry* atoms) {
  ParseOptions opts;
  if (atoms) {
    opts.atom_arity = [atoms](const std::string& name) -> std::optional<int> {
      const fo::GeneralizedAtom* a = atoms->find(name);
      if (!a) return std::nullopt;
      return a->arity;
    };
  }
  return parse(text, opts);
}

Team named_team(const ModelFile& mf, const std::string& name) {
  auto it = mf.teams.find(name);
  if (it == mf.teams.end()) throw Error("model file declares no team named '" + name + "'");
  return it->second;
}

struct SuiteFlags {
  oracle::Bounds bounds;
  std::string vars = "p,q";
};

void add_bounds_flags(CLI::App* cmd, SuiteFlags& flags) {
  cmd->add_option("--max-worlds", flags.bounds.max_worlds, "model size bound");
  cmd->add_option("--vars", flags.vars, "comma-separated variable universe");
  cmd->add_option("--max-depth", flags.bounds.max_modal_depth, "modal depth bound");
  cmd->add_option("--exhaustive-size", flags.bounds.exhaustive_formula_size,
                  "exhaustive formula enumeration size");
  cmd->add_option("--samples", flags.bounds.sample_count, "random formula sample count");
  cmd->add_option("--sample-size", flags.bounds.sample_formula_size, "random formula size bound");
  cmd->add_option("--seed", flags.bounds.seed, "sampler seed");
  cmd->add_option("--max-k", flags.bounds.max_k, "bisimulation level bound");
}

int report_exit(const oracle::CheckReport& r, bool as_json, std::ostream& out) {
  if (as_json) out << r.to_json() << "\n";
  else out << r.to_line() << "\n";
  return r.verdict == oracle::Verdict::Verified ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"teamcheck -- model checking and expressiveness toolkit for "
               "modal logics with team semantics"};
  app.require_subcommand(1);
  app.fallthrough();  // --json / --atoms may follow the subcommand
  bool as_json = false;
  app.add_flag("--json", as_json, "machine-readable output");
  std::string atoms_path;
  app.add_option("--atoms", atoms_path, "generalized-atom registry (JSON)");

  // check
  auto* check = app.add_subcommand("check", "evaluate a formula on a named team");
  std::string model_path, team_name, formula_text;
  check->add_option("--model", model_path, "model file")->required();
  check->add_option("--team", team_name, "team name")->required();
  check->add_option("--formula", formula_text, "formula")->required();

  // bisim
  auto* bisim_cmd = app.add_subcommand("bisim", "compare two teams up to (k-)bisimulation");
  std::string model_a, model_b, team_a, team_b;
  int bisim_k = -1;
  bisim_cmd->add_option("--model-a", model_a)->required();
  bisim_cmd->add_option("--team-a", team_a)->required();
  bisim_cmd->add_option("--model-b", model_b)->required();
  bisim_cmd->add_option("--team-b", team_b)->required();
  bisim_cmd->add_option("--k", bisim_k, "bounded level; unbounded when omitted");

  // hintikka
  auto* hin = app.add_subcommand("hintikka", "characteristic formula of a world or team");
  std::string hin_model, hin_world, hin_team;
  int hin_k = 0;
  hin->add_option("--model", hin_model)->required();
  hin->add_option("--world", hin_world);
  hin->add_option("--team", hin_team);
  hin->add_option("--k", hin_k)->required();

  // express
  auto* express = app.add_subcommand("express", "formula for a class of (model, team) pairs");
  std::string class_path;
  int express_k = 0;
  express->add_option("--class", class_path, "JSON list of {model, team}")->required();
  express->add_option("--k", express_k)->required();

  // translate
  auto* translate = app.add_subcommand("translate", "first-order translation");
  std::string tr_formula, tr_model, tr_team;
  bool tr_chi = false;
  int tr_k = 0;
  translate->add_option("--formula", tr_formula);
  translate->add_flag("--chi", tr_chi, "translate the characteristic team formula");
  translate->add_option("--model", tr_model);
  translate->add_option("--team", tr_team);
  translate->add_option("--k", tr_k);

  // equiv
  auto* equiv = app.add_subcommand("equiv", "compare two formulas within bounds");
  std::string formula_a, formula_b;
  SuiteFlags equiv_flags;
  equiv->add_option("--formula-a", formula_a)->required();
  equiv->add_option("--formula-b", formula_b)->required();
  add_bounds_flags(equiv, equiv_flags);

  // properties
  auto* props = app.add_subcommand("properties", "check a closure/invariance property");
  std::string props_formula, props_check;
  int props_k = 0, props_d = 0;
  SuiteFlags props_flags;
  props->add_option("--formula", props_formula)->required();
  props->add_option("--check", props_check,
                    "flat | downward-closed | union-closed | empty-team | k-invariant | d-local")
      ->required();
  props->add_option("--k", props_k, "level for k-invariant");
  props->add_option("--d", props_d, "radius for d-local");
  add_bounds_flags(props, props_flags);

  // suite
  auto* suite = app.add_subcommand("suite", "run the full verification battery");
  SuiteFlags suite_flags;
  add_bounds_flags(suite, suite_flags);

  // random
  auto* random_cmd = app.add_subcommand("random", "generate a random model");
  std::uint64_t rnd_seed = 0;
  int rnd_worlds = 4;
  double rnd_edge_prob = 0.3;
  std::string rnd_vars = "p,q";
  random_cmd->add_option("--seed", rnd_seed)->required();
  random_cmd->add_option("--worlds", rnd_worlds)->required();
  random_cmd->add_option("--edge-prob", rnd_edge_prob)->required();
  random_cmd->add_option("--vars", rnd_vars);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help and friends
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    std::optional<fo::AtomRegistry> registry;
    if (!atoms_path.empty()) registry = fo::AtomRegistry::from_json(read_file(atoms_path));
    const fo::AtomRegistry* atoms = registry ? &*registry : nullptr;

    if (*check) {
      ModelFile mf = load_model(read_file(model_path));
      Formula f = parse_with(formula_text, atoms);
      bool sat = semantics::eval(mf.model, named_team(mf, team_name), f, make_eval_config(atoms));
      if (as_json) out << json{{"verdict", sat ? "SAT" : "UNSAT"}}.dump() << "\n";
      else out << (sat ? "SAT" : "UNSAT") << "\n";
      return sat ? 0 : 1;
    }

    if (*bisim_cmd) {
      ModelFile mfa = load_model(read_file(model_a));
      ModelFile mfb = load_model(read_file(model_b));
      Team ta = named_team(mfa, team_a);
      Team tb = named_team(mfb, team_b);
      std::optional<int> k;
      if (bisim_k >= 0) k = bisim_k;
      bisim::BisimVerdict v = bisim::compare_teams(mfa.model, ta, mfb.model, tb, k);
      if (!v.bisimilar && v.distinguishing_k) {
        auto sep = hintikka::separating_formula(mfa.model, ta, mfb.model, tb,
                                                *v.distinguishing_k);
        if (sep) {
          v.separating = sep->formula;
          v.separating_holds_on_first = sep->holds_on_first;
        }
      }
      std::string level = k ? std::to_string(*k) + "-bisimilar" : "bisimilar";
      if (as_json) {
        json j{{"bisimilar", v.bisimilar}};
        if (k) j["k"] = *k;
        if (v.distinguishing_k) j["distinguishing_k"] = *v.distinguishing_k;
        if (v.separating) {
          j["separating"] = render(*v.separating);
          j["separating_holds_on"] = v.separating_holds_on_first ? "a" : "b";
        }
        out << j.dump() << "\n";
      } else if (v.bisimilar) {
        out << level << "\n";
      } else {
        out << "not " << level;
        if (v.distinguishing_k) out << " (teams differ at k=" << *v.distinguishing_k << ")";
        out << "\n";
        if (v.separating) {
          out << "separating formula (holds on " << (v.separating_holds_on_first ? "a" : "b")
              << " only): " << render(*v.separating) << "\n";
        }
      }
      return v.bisimilar ? 0 : 1;
    }

    if (*hin) {
      ModelFile mf = load_model(read_file(hin_model));
      if (hin_world.empty() == hin_team.empty())
        throw Error("hintikka: give exactly one of --world and --team");
      Formula f = [&] {
        if (!hin_world.empty()) {
          int w = mf.model.world_index(hin_world);
          if (w < 0) throw Error("unknown world: " + hin_world);
          return hintikka::hintikka_world(mf.model, w, hin_k);
        }
        return hintikka::hintikka_team(mf.model, named_team(mf, hin_team), hin_k);
      }();
      if (as_json) out << json{{"formula", render(f)}}.dump() << "\n";
      else out << render(f) << "\n";
      return 0;
    }

    if (*express) {
      json spec = json::parse(read_file(class_path));
      if (!spec.is_array()) throw Error("class file must be a JSON array of {model, team}");
      hintikka::PropertyClass cls;
      cls.level = express_k;
      for (const auto& entry : spec) {
        std::string text = entry.at("model").is_string()
                               ? read_file(entry.at("model").get<std::string>())
                               : entry.at("model").dump();
        ModelFile mf = load_model(text);
        Team t = named_team(mf, entry.at("team").get<std::string>());
        cls.members.emplace_back(std::move(mf.model), t);
      }
      Formula f = hintikka::express_property(cls);
      if (as_json) out << json{{"formula", render(f)}}.dump() << "\n";
      else out << render(f) << "\n";
      return 0;
    }

    if (*translate) {
      if (tr_chi) {
        if (tr_model.empty() || tr_team.empty())
          throw Error("translate --chi needs --model, --team and --k");
        ModelFile mf = load_model(read_file(tr_model));
        fo::FOFormula f = fo::chi_to_fo(mf.model, named_team(mf, tr_team), tr_k);
        if (as_json) out << json{{"formula", fo::render_fo(f)}}.dump() << "\n";
        else out << fo::render_fo(f) << "\n";
        return 0;
      }
      if (tr_formula.empty()) throw Error("translate needs --formula or --chi");
      fo::FOFormula f = fo::standard_translation(parse_with(tr_formula, atoms));
      if (as_json) out << json{{"formula", fo::render_fo(f)}}.dump() << "\n";
      else out << fo::render_fo(f) << "\n";
      return 0;
    }

    if (*equiv) {
      equiv_flags.bounds.vars = split_vars(equiv_flags.vars);
      equiv_flags.bounds.atoms = atoms;
      oracle::CheckReport r = oracle::equiv_check(parse_with(formula_a, atoms),
                                                  parse_with(formula_b, atoms),
                                                  equiv_flags.bounds);
      return report_exit(r, as_json, out);
    }

    if (*props) {
      props_flags.bounds.vars = split_vars(props_flags.vars);
      props_flags.bounds.atoms = atoms;
      Formula f = parse_with(props_formula, atoms);
      oracle::CheckReport r = [&] {
        if (props_check == "flat")
          return oracle::closure_check(f, oracle::ClosureProperty::Flat, props_flags.bounds);
        if (props_check == "downward-closed")
          return oracle::closure_check(f, oracle::ClosureProperty::DownwardClosed,
                                       props_flags.bounds);
        if (props_check == "union-closed")
          return oracle::closure_check(f, oracle::ClosureProperty::UnionClosed,
                                       props_flags.bounds);
        if (props_check == "empty-team")
          return oracle::closure_check(f, oracle::ClosureProperty::EmptyTeam, props_flags.bounds);
        if (props_check == "k-invariant")
          return oracle::invariance_check(f, oracle::KInvariance{props_k}, props_flags.bounds);
        if (props_check == "d-local")
          return oracle::invariance_check(f, oracle::DLocality{props_d}, props_flags.bounds);
        throw Error("unknown property check: " + props_check);
      }();
      return report_exit(r, as_json, out);
    }

    if (*suite) {
      suite_flags.bounds.vars = split_vars(suite_flags.vars);
      suite_flags.bounds.atoms = atoms;
      std::vector<oracle::CheckReport> reports = oracle::claim_suite(suite_flags.bounds);
      bool all_ok = true;
      if (as_json) {
        json arr = json::array();
        for (const auto& r : reports) arr.push_back(json::parse(r.to_json()));
        out << arr.dump() << "\n";
      }
      for (const auto& r : reports) {
        if (!as_json) out << r.to_line() << "\n";
        all_ok = all_ok && r.verdict == oracle::Verdict::Verified;
      }
      return all_ok ? 0 : 1;
    }

    if (*random_cmd) {
      KripkeModel m = random_model(rnd_seed, rnd_worlds, rnd_edge_prob, split_vars(rnd_vars));
      out << save_model(ModelFile{std::move(m), {}}) << "\n";
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "error: no subcommand\n";
  return 2;
}

}  // namespace teamsem::cli
