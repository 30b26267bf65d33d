#include "teamsem/formula.hpp"

#include <algorithm>
#include <set>

namespace teamsem {

struct Formula::Node {
  Kind kind;
  std::string name;
  std::vector<Formula> args;
  std::uint32_t g1 = 0;  // Indep: |P|; Incl: |lhs|
  std::uint32_t g2 = 0;  // Indep: |R|
  int depth = 0;
  bool ml = false;
  std::size_t hash = 0;
};

namespace {

std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

bool kind_in_ml(Kind k) {
  switch (k) {
    case Kind::Top:
    case Kind::Bot:
    case Kind::Prop:
    case Kind::NegProp:
    case Kind::And:
    case Kind::SplitOr:
    case Kind::Diamond:
    case Kind::Box:
      return true;
    default:
      return false;
  }
}

void require_ml_args(const char* what, std::span<const Formula> args) {
  for (const Formula& a : args) {
    if (!a.is_ml()) throw Error(std::string(what) + ": arguments must be ML formulas");
  }
}

std::vector<Formula> dedup_structural(std::vector<Formula> v) {
  std::vector<Formula> out;
  for (Formula& f : v) {
    bool seen = false;
    for (const Formula& g : out) {
      if (f == g) {
        seen = true;
        break;
      }
    }
    if (!seen) out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

Formula Formula::make(Kind k, std::string name, std::vector<Formula> args,
                      std::uint32_t g1, std::uint32_t g2) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->name = std::move(name);
  n->args = std::move(args);
  n->g1 = g1;
  n->g2 = g2;

  int d = 0;
  for (const Formula& a : n->args) d = std::max(d, a.modal_depth());
  if (k == Kind::Diamond || k == Kind::Box) d += 1;
  n->depth = d;

  bool ml = kind_in_ml(k);
  for (const Formula& a : n->args) ml = ml && a.is_ml();
  n->ml = ml;

  std::size_t h = hash_combine(0x1234, static_cast<std::size_t>(k));
  h = hash_combine(h, std::hash<std::string>{}(n->name));
  h = hash_combine(h, g1);
  h = hash_combine(h, g2);
  for (const Formula& a : n->args) h = hash_combine(h, a.hash());
  n->hash = h;
  return Formula(std::move(n));
}

Formula Formula::top() { return make(Kind::Top, {}, {}); }
Formula Formula::bot() { return make(Kind::Bot, {}, {}); }
Formula Formula::prop(std::string name) { return make(Kind::Prop, std::move(name), {}); }
Formula Formula::neg_prop(std::string name) { return make(Kind::NegProp, std::move(name), {}); }
Formula Formula::cneg(Formula f) { return make(Kind::CNeg, {}, {std::move(f)}); }
Formula Formula::conj(Formula l, Formula r) { return make(Kind::And, {}, {std::move(l), std::move(r)}); }
Formula Formula::split_or(Formula l, Formula r) {
  return make(Kind::SplitOr, {}, {std::move(l), std::move(r)});
}
Formula Formula::class_or(Formula l, Formula r) {
  return make(Kind::COr, {}, {std::move(l), std::move(r)});
}
Formula Formula::diamond(Formula f) { return make(Kind::Diamond, {}, {std::move(f)}); }
Formula Formula::box(Formula f) { return make(Kind::Box, {}, {std::move(f)}); }
Formula Formula::exists(Formula f) { return make(Kind::Exists, {}, {std::move(f)}); }
Formula Formula::tensor(Formula l, Formula r) {
  return make(Kind::Tensor, {}, {std::move(l), std::move(r)});
}
Formula Formula::int_impl(Formula l, Formula r) {
  return make(Kind::IntImpl, {}, {std::move(l), std::move(r)});
}

Formula Formula::dep(std::vector<Formula> args) {
  if (args.empty()) throw Error("dep: needs at least one argument");
  require_ml_args("dep", args);
  return make(Kind::Dep, {}, std::move(args));
}

Formula Formula::indep(std::vector<Formula> p, std::vector<Formula> r, std::vector<Formula> q) {
  p = dedup_structural(std::move(p));
  r = dedup_structural(std::move(r));
  q = dedup_structural(std::move(q));
  require_ml_args("indep", p);
  require_ml_args("indep", r);
  require_ml_args("indep", q);
  auto g1 = static_cast<std::uint32_t>(p.size());
  auto g2 = static_cast<std::uint32_t>(r.size());
  std::vector<Formula> all = std::move(p);
  all.insert(all.end(), r.begin(), r.end());
  all.insert(all.end(), q.begin(), q.end());
  return make(Kind::Indep, {}, std::move(all), g1, g2);
}

Formula Formula::incl(std::vector<Formula> lhs, std::vector<Formula> rhs) {
  if (lhs.empty() || lhs.size() != rhs.size())
    throw Error("inc: sides must be nonempty and of equal length");
  require_ml_args("inc", lhs);
  require_ml_args("inc", rhs);
  auto g1 = static_cast<std::uint32_t>(lhs.size());
  std::vector<Formula> all = std::move(lhs);
  all.insert(all.end(), rhs.begin(), rhs.end());
  return make(Kind::Incl, {}, std::move(all), g1);
}

Formula Formula::gen_atom(std::string name, std::vector<Formula> args) {
  if (args.empty()) throw Error("atom " + name + ": needs at least one argument");
  require_ml_args("atom", args);
  return make(Kind::GenAtom, std::move(name), std::move(args));
}

Kind Formula::kind() const noexcept { return n_->kind; }

const std::string& Formula::name() const { return n_->name; }

std::span<const Formula> Formula::args() const& noexcept { return n_->args; }

const Formula& Formula::arg(std::size_t i) const { return n_->args[i]; }

std::size_t Formula::arity() const noexcept { return n_->args.size(); }

std::span<const Formula> Formula::indep_left() const& {
  return {n_->args.data(), n_->g1};
}
std::span<const Formula> Formula::indep_fixed() const& {
  return {n_->args.data() + n_->g1, n_->g2};
}
std::span<const Formula> Formula::indep_right() const& {
  return {n_->args.data() + n_->g1 + n_->g2, n_->args.size() - n_->g1 - n_->g2};
}
std::span<const Formula> Formula::incl_lhs() const& { return {n_->args.data(), n_->g1}; }
std::span<const Formula> Formula::incl_rhs() const& {
  return {n_->args.data() + n_->g1, n_->args.size() - n_->g1};
}

int Formula::modal_depth() const noexcept { return n_->depth; }
bool Formula::is_ml() const noexcept { return n_->ml; }
const void* Formula::id() const noexcept { return n_.get(); }
std::size_t Formula::hash() const noexcept { return n_->hash; }

bool Formula::operator==(const Formula& other) const {
  if (n_ == other.n_) return true;
  const Node& a = *n_;
  const Node& b = *other.n_;
  if (a.hash != b.hash || a.kind != b.kind || a.g1 != b.g1 || a.g2 != b.g2 ||
      a.name != b.name || a.args.size() != b.args.size())
    return false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (a.args[i] != b.args[i]) return false;
  }
  return true;
}

std::vector<std::string> Formula::variables() const {
  std::set<std::string> acc;
  std::vector<const Node*> stack{n_.get()};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (n->kind == Kind::Prop || n->kind == Kind::NegProp) acc.insert(n->name);
    for (const Formula& a : n->args) stack.push_back(a.n_.get());
  }
  return {acc.begin(), acc.end()};
}

std::string to_string(Fragment f) {
  switch (f) {
    case Fragment::ML: return "ML";
    case Fragment::MLc: return "ML(lor)";
    case Fragment::MDL: return "MDL";
    case Fragment::EMDL: return "EMDL";
    case Fragment::EMIL: return "EMIL";
    case Fragment::EMILc: return "EMIL(lor)";
    case Fragment::EMINCL: return "EMINCL";
    case Fragment::EMINCLc: return "EMINCL(lor)";
    case Fragment::MLFO: return "ML^FO";
    case Fragment::MTL: return "MTL";
    case Fragment::MTLplus: return "MTL+";
  }
  return "?";
}

Formula dual(const Formula& f) {
  if (!f.is_ml()) throw Error("dual: formula is not in ML");
  switch (f.kind()) {
    case Kind::Top: return Formula::bot();
    case Kind::Bot: return Formula::top();
    case Kind::Prop: return Formula::neg_prop(f.name());
    case Kind::NegProp: return Formula::prop(f.name());
    case Kind::And: return Formula::split_or(dual(f.arg(0)), dual(f.arg(1)));
    case Kind::SplitOr: return Formula::conj(dual(f.arg(0)), dual(f.arg(1)));
    case Kind::Diamond: return Formula::box(dual(f.arg(0)));
    case Kind::Box: return Formula::diamond(dual(f.arg(0)));
    default: throw Error("dual: formula is not in ML");
  }
}

namespace {

// ~(~a & ~b), the classical disjunction spelled with core connectives
Formula cor_core(Formula a, Formula b) {
  return Formula::cneg(Formula::conj(Formula::cneg(std::move(a)), Formula::cneg(std::move(b))));
}

// ~(~a | ~b), the tensor spelled with core connectives
Formula tensor_core(Formula a, Formula b) {
  return Formula::cneg(Formula::split_or(Formula::cneg(std::move(a)), Formula::cneg(std::move(b))));
}

// truth at the empty team; model-independent for every connective
bool empty_team_truth(const Formula& f) {
  switch (f.kind()) {
    case Kind::Top:
    case Kind::Bot:
    case Kind::Prop:
    case Kind::NegProp:
    case Kind::Dep:
    case Kind::Indep:
    case Kind::Incl:
      return true;
    case Kind::CNeg: return !empty_team_truth(f.arg(0));
    case Kind::And:
    case Kind::SplitOr:
      return empty_team_truth(f.arg(0)) && empty_team_truth(f.arg(1));
    case Kind::COr:
    case Kind::Tensor:
      return empty_team_truth(f.arg(0)) || empty_team_truth(f.arg(1));
    case Kind::Diamond:
    case Kind::Box:
      return empty_team_truth(f.arg(0));
    case Kind::IntImpl: return !empty_team_truth(f.arg(0)) || empty_team_truth(f.arg(1));
    case Kind::Exists: return false;
    case Kind::GenAtom:
      throw Error("empty-team truth of a generalized atom depends on its registered sentence");
  }
  throw Error("empty_team_truth: unknown node");
}

// (~a lor b) otimes bot, the subteam implication spelled with core
// connectives. The tensor form is vacuously true on the empty team, so the
// one case where the subteam clause is not gets a ~bot conjunct.
Formula impl_core(Formula a, Formula b) {
  bool patch = empty_team_truth(a) && !empty_team_truth(b);
  Formula base = tensor_core(cor_core(Formula::cneg(std::move(a)), std::move(b)), Formula::bot());
  if (patch) return Formula::conj(std::move(base), Formula::cneg(Formula::bot()));
  return base;
}

Formula desugar_rec(const Formula& f, bool& residual) {
  std::vector<Formula> kids;
  kids.reserve(f.arity());
  for (const Formula& a : f.args()) kids.push_back(desugar_rec(a, residual));
  switch (f.kind()) {
    case Kind::Top:
    case Kind::Bot:
    case Kind::Prop:
    case Kind::NegProp:
      return f;
    case Kind::CNeg: return Formula::cneg(kids[0]);
    case Kind::And: return Formula::conj(kids[0], kids[1]);
    case Kind::SplitOr: return Formula::split_or(kids[0], kids[1]);
    case Kind::Diamond: return Formula::diamond(kids[0]);
    case Kind::Box: return Formula::box(kids[0]);
    case Kind::COr: return cor_core(kids[0], kids[1]);
    case Kind::Tensor: return tensor_core(kids[0], kids[1]);
    case Kind::IntImpl: return impl_core(kids[0], kids[1]);
    case Kind::Exists:
      if (!kids[0].is_ml()) throw Error("desugar: E over a non-ML operand has no rewriting");
      return Formula::cneg(dual(kids[0]));
    case Kind::Dep: {
      // dep(f) is f lor dual(f); longer atoms chain through the subteam
      // implication.
      std::span<const Formula> a = f.args();
      auto determined = [](const Formula& g) { return cor_core(g, dual(g)); };
      if (a.size() == 1) return determined(a[0]);
      Formula premise = determined(a[a.size() - 2]);
      for (std::size_t i = a.size() - 2; i-- > 0;) premise = Formula::conj(determined(a[i]), premise);
      return impl_core(premise, determined(a.back()));
    }
    case Kind::Indep:
    case Kind::Incl:
    case Kind::GenAtom:
      residual = true;
      return f;
  }
  throw Error("desugar: unknown node");
}

}  // namespace

Desugared desugar(const Formula& f) {
  bool residual = false;
  Formula r = desugar_rec(f, residual);
  return {std::move(r), residual};
}

Fragment fragment_of(const Formula& f,
                     const std::function<bool(const std::string&)>& atom_identity_free) {
  bool has_cor = false, has_cneg = false, has_sugar = false;
  bool has_dep = false, dep_props_only = true;
  bool has_indep = false, has_incl = false, has_gen = false, gen_identity = false;

  std::vector<Formula> stack{f};
  while (!stack.empty()) {
    Formula g = stack.back();
    stack.pop_back();
    switch (g.kind()) {
      case Kind::COr: has_cor = true; break;
      case Kind::CNeg: has_cneg = true; break;
      case Kind::Exists:
      case Kind::Tensor:
      case Kind::IntImpl: has_sugar = true; break;
      case Kind::Dep: {
        has_dep = true;
        for (const Formula& a : g.args())
          if (a.kind() != Kind::Prop) dep_props_only = false;
        break;
      }
      case Kind::Indep: has_indep = true; break;
      case Kind::Incl: has_incl = true; break;
      case Kind::GenAtom:
        has_gen = true;
        if (atom_identity_free && !atom_identity_free(g.name())) gen_identity = true;
        break;
      default: break;
    }
    for (const Formula& a : g.args()) stack.push_back(a);
  }

  const bool extended = has_indep || has_incl || has_gen;
  const bool classical = has_cneg || has_sugar;
  if (!classical) {
    if (!extended) {
      if (!has_dep) return has_cor ? Fragment::MLc : Fragment::ML;
      if (!has_cor) return dep_props_only ? Fragment::MDL : Fragment::EMDL;
      // dep together with lor has no smaller label than MTL
      return Fragment::MTL;
    }
    // exactly one extended atom family, no dep, no classical machinery
    if (has_indep && !has_incl && !has_gen && !has_dep)
      return has_cor ? Fragment::EMILc : Fragment::EMIL;
    if (has_incl && !has_indep && !has_gen && !has_dep)
      return has_cor ? Fragment::EMINCLc : Fragment::EMINCL;
    if (has_gen && !has_indep && !has_incl && !has_dep && !has_cor && !gen_identity)
      return Fragment::MLFO;
    return Fragment::MTLplus;
  }
  return extended ? Fragment::MTLplus : Fragment::MTL;
}

}  // namespace teamsem
