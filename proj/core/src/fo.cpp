#include "teamsem/fo.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>

#include "teamsem/semantics.hpp"

namespace teamsem::fo {

struct FOFormula::Node {
  FOKind kind;
  std::string name;                 // Rel name or quantified variable
  std::vector<std::string> terms;   // Rel argument variables; Eq stores both sides
  std::vector<FOFormula> children;
};

FOFormula FOFormula::make(FOKind k, std::string name, std::vector<std::string> terms,
                          std::vector<FOFormula> children) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->name = std::move(name);
  n->terms = std::move(terms);
  n->children = std::move(children);
  return FOFormula(std::move(n));
}

FOFormula FOFormula::truth() { return make(FOKind::True, {}, {}, {}); }
FOFormula FOFormula::falsity() { return make(FOKind::False, {}, {}, {}); }
FOFormula FOFormula::rel(std::string name, std::vector<std::string> vars) {
  return make(FOKind::Rel, std::move(name), std::move(vars), {});
}
FOFormula FOFormula::eq(std::string a, std::string b) {
  return make(FOKind::Eq, {}, {std::move(a), std::move(b)}, {});
}
FOFormula FOFormula::fo_not(FOFormula f) { return make(FOKind::Not, {}, {}, {std::move(f)}); }
FOFormula FOFormula::fo_and(FOFormula l, FOFormula r) {
  return make(FOKind::And, {}, {}, {std::move(l), std::move(r)});
}
FOFormula FOFormula::fo_or(FOFormula l, FOFormula r) {
  return make(FOKind::Or, {}, {}, {std::move(l), std::move(r)});
}
FOFormula FOFormula::implies(FOFormula l, FOFormula r) {
  return make(FOKind::Implies, {}, {}, {std::move(l), std::move(r)});
}
FOFormula FOFormula::exists(std::string var, FOFormula body) {
  return make(FOKind::Exists, std::move(var), {}, {std::move(body)});
}
FOFormula FOFormula::forall(std::string var, FOFormula body) {
  return make(FOKind::Forall, std::move(var), {}, {std::move(body)});
}

FOKind FOFormula::kind() const noexcept { return n_->kind; }
const std::string& FOFormula::rel_name() const { return n_->name; }
const std::vector<std::string>& FOFormula::term_vars() const { return n_->terms; }
const std::string& FOFormula::quant_var() const { return n_->name; }
const FOFormula& FOFormula::child(std::size_t i) const { return n_->children[i]; }
std::size_t FOFormula::child_count() const noexcept { return n_->children.size(); }

bool FOFormula::uses_equality() const noexcept {
  if (n_->kind == FOKind::Eq) return true;
  for (const FOFormula& c : n_->children) {
    if (c.uses_equality()) return true;
  }
  return false;
}

namespace {

void free_vars_rec(const FOFormula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (f.kind()) {
    case FOKind::Rel:
    case FOKind::Eq:
      for (const std::string& v : f.term_vars()) {
        if (!bound.count(v)) out.insert(v);
      }
      return;
    case FOKind::Exists:
    case FOKind::Forall: {
      bool fresh = bound.insert(f.quant_var()).second;
      free_vars_rec(f.child(0), bound, out);
      if (fresh) bound.erase(f.quant_var());
      return;
    }
    default:
      for (std::size_t i = 0; i < f.child_count(); ++i) free_vars_rec(f.child(i), bound, out);
  }
}

}  // namespace

std::vector<std::string> FOFormula::free_variables() const {
  std::set<std::string> bound, out;
  free_vars_rec(*this, bound, out);
  return {out.begin(), out.end()};
}

std::map<std::string, int> FOFormula::relations() const {
  std::map<std::string, int> out;
  std::vector<FOFormula> stack{*this};
  while (!stack.empty()) {
    FOFormula f = stack.back();
    stack.pop_back();
    if (f.kind() == FOKind::Rel) {
      auto [it, fresh] = out.emplace(f.rel_name(), static_cast<int>(f.term_vars().size()));
      if (!fresh && it->second != static_cast<int>(f.term_vars().size()))
        throw FOError("relation " + f.rel_name() + " used with two arities");
    }
    for (std::size_t i = 0; i < f.child_count(); ++i) stack.push_back(f.child(i));
  }
  return out;
}

bool FOFormula::operator==(const FOFormula& other) const {
  if (n_ == other.n_) return true;
  if (n_->kind != other.n_->kind || n_->name != other.n_->name || n_->terms != other.n_->terms ||
      n_->children.size() != other.n_->children.size())
    return false;
  for (std::size_t i = 0; i < n_->children.size(); ++i) {
    if (n_->children[i] != other.n_->children[i]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// parser / printer

namespace {

struct FOLexer {
  explicit FOLexer(const std::string& s) : s(s) { skip(); }

  bool eof() const { return pos >= s.size(); }

  bool eat(const char* lit) {
    std::size_t n = std::char_traits<char>::length(lit);
    if (s.compare(pos, n, lit) == 0) {
      // keywords must not run into identifier characters
      if (std::isalpha(static_cast<unsigned char>(lit[0])) && pos + n < s.size() &&
          (std::isalnum(static_cast<unsigned char>(s[pos + n])) || s[pos + n] == '_'))
        return false;
      advance(n);
      return true;
    }
    return false;
  }

  std::string ident() {
    if (eof() || !(std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      fail("expected an identifier");
    std::string out;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) {
      out.push_back(s[pos]);
      advance_one();
    }
    skip();
    return out;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line, col, msg); }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) advance_one();
    skip();
  }

  void advance_one() {
    if (s[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) advance_one();
  }

  const std::string& s;
  std::size_t pos = 0;
  int line = 1;
  int col = 1;
};

// precedence: -> (1) | (2) & (3) prefix (4)
FOFormula parse_fo_level(FOLexer& lx, int level);

FOFormula parse_fo_prefix(FOLexer& lx) {
  if (lx.eat("forall")) {
    std::string v = lx.ident();
    if (!lx.eat(".")) lx.fail("expected '.' after quantified variable");
    return FOFormula::forall(v, parse_fo_level(lx, 1));
  }
  if (lx.eat("exists")) {
    std::string v = lx.ident();
    if (!lx.eat(".")) lx.fail("expected '.' after quantified variable");
    return FOFormula::exists(v, parse_fo_level(lx, 1));
  }
  if (lx.eat("true")) return FOFormula::truth();
  if (lx.eat("false")) return FOFormula::falsity();
  if (lx.eat("!")) return FOFormula::fo_not(parse_fo_prefix(lx));
  if (lx.eat("(")) {
    FOFormula f = parse_fo_level(lx, 1);
    if (!lx.eat(")")) lx.fail("expected ')'");
    return f;
  }
  std::string name = lx.ident();
  if (lx.eat("(")) {
    std::vector<std::string> vars;
    if (!lx.eat(")")) {
      vars.push_back(lx.ident());
      while (lx.eat(",")) vars.push_back(lx.ident());
      if (!lx.eat(")")) lx.fail("expected ')'");
    }
    return FOFormula::rel(std::move(name), std::move(vars));
  }
  if (lx.eat("=")) return FOFormula::eq(std::move(name), lx.ident());
  lx.fail("expected a relation application or an equality");
}

FOFormula parse_fo_level(FOLexer& lx, int level) {
  if (level >= 4) return parse_fo_prefix(lx);
  FOFormula lhs = parse_fo_level(lx, level + 1);
  const char* op = level == 1 ? "->" : level == 2 ? "|" : "&";
  if (!lx.eat(op)) return lhs;
  FOFormula rhs = parse_fo_level(lx, level);  // right-associative
  switch (level) {
    case 1: return FOFormula::implies(std::move(lhs), std::move(rhs));
    case 2: return FOFormula::fo_or(std::move(lhs), std::move(rhs));
    default: return FOFormula::fo_and(std::move(lhs), std::move(rhs));
  }
}

int fo_level_of(const FOFormula& f) {
  switch (f.kind()) {
    case FOKind::Implies: return 1;
    case FOKind::Or: return 2;
    case FOKind::And: return 3;
    case FOKind::Exists:
    case FOKind::Forall: return 1;  // bodies run to the end, so parenthesize in context
    default: return 4;
  }
}

void print_fo(const FOFormula& f, int min_level, std::string& out) {
  int lvl = fo_level_of(f);
  bool parens = lvl < min_level;
  if (parens) out += '(';
  switch (f.kind()) {
    case FOKind::True: out += "true"; break;
    case FOKind::False: out += "false"; break;
    case FOKind::Rel: {
      out += f.rel_name();
      out += '(';
      const auto& vs = f.term_vars();
      for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) out += ", ";
        out += vs[i];
      }
      out += ')';
      break;
    }
    case FOKind::Eq:
      out += f.term_vars()[0];
      out += " = ";
      out += f.term_vars()[1];
      break;
    case FOKind::Not:
      out += '!';
      print_fo(f.child(0), 4, out);
      break;
    case FOKind::And:
    case FOKind::Or:
    case FOKind::Implies: {
      const char* op = f.kind() == FOKind::And ? " & " : f.kind() == FOKind::Or ? " | " : " -> ";
      print_fo(f.child(0), lvl + 1, out);
      out += op;
      print_fo(f.child(1), lvl, out);
      break;
    }
    case FOKind::Exists:
    case FOKind::Forall:
      out += f.kind() == FOKind::Exists ? "exists " : "forall ";
      out += f.quant_var();
      out += ". ";
      print_fo(f.child(0), 1, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

FOFormula parse_fo(const std::string& text) {
  FOLexer lx(text);
  FOFormula f = parse_fo_level(lx, 1);
  if (!lx.eof()) lx.fail("trailing input after formula");
  return f;
}

std::string render_fo(const FOFormula& f) {
  std::string out;
  print_fo(f, 1, out);
  return out;
}

// ---------------------------------------------------------------------------
// structures and evaluation

FOStructure::FOStructure(std::size_t universe_size) : size_(universe_size) {
  names_.resize(size_);
  for (std::size_t i = 0; i < size_; ++i) names_[i] = "e" + std::to_string(i);
}

void FOStructure::define(const std::string& rel, int arity) {
  auto [it, fresh] = rels_.emplace(rel, std::make_pair(arity, std::set<std::vector<int>>{}));
  if (!fresh && it->second.first != arity)
    throw FOError("relation " + rel + " redefined with a different arity");
}

void FOStructure::add_tuple(const std::string& rel, std::vector<int> tuple) {
  auto it = rels_.find(rel);
  if (it == rels_.end()) throw FOError("relation " + rel + " is not defined");
  if (static_cast<int>(tuple.size()) != it->second.first)
    throw FOError("relation " + rel + ": tuple arity mismatch");
  for (int e : tuple) {
    if (e < 0 || static_cast<std::size_t>(e) >= size_)
      throw FOError("relation " + rel + ": tuple element outside the universe");
  }
  it->second.second.insert(std::move(tuple));
}

void FOStructure::set_element_name(int i, std::string name) { names_[i] = std::move(name); }

bool FOStructure::has_relation(const std::string& rel) const { return rels_.count(rel) > 0; }

int FOStructure::arity(const std::string& rel) const {
  auto it = rels_.find(rel);
  if (it == rels_.end()) throw FOError("relation " + rel + " is not defined");
  return it->second.first;
}

bool FOStructure::contains(const std::string& rel, const std::vector<int>& tuple) const {
  auto it = rels_.find(rel);
  if (it == rels_.end()) throw FOError("relation " + rel + " is not defined");
  return it->second.second.count(tuple) > 0;
}

namespace {

int lookup_var(const std::map<std::string, int>& env, const std::string& v) {
  auto it = env.find(v);
  if (it == env.end()) throw FOError("unbound variable: " + v);
  return it->second;
}

bool eval_fo_rec(const FOStructure& s, const FOFormula& f, std::map<std::string, int>& env) {
  switch (f.kind()) {
    case FOKind::True: return true;
    case FOKind::False: return false;
    case FOKind::Rel: {
      if (!s.has_relation(f.rel_name()))
        throw FOError("relation " + f.rel_name() + " is not interpreted by the structure");
      if (s.arity(f.rel_name()) != static_cast<int>(f.term_vars().size()))
        throw FOError("relation " + f.rel_name() + ": arity mismatch");
      std::vector<int> tuple;
      tuple.reserve(f.term_vars().size());
      for (const std::string& v : f.term_vars()) tuple.push_back(lookup_var(env, v));
      return s.contains(f.rel_name(), tuple);
    }
    case FOKind::Eq:
      return lookup_var(env, f.term_vars()[0]) == lookup_var(env, f.term_vars()[1]);
    case FOKind::Not: return !eval_fo_rec(s, f.child(0), env);
    case FOKind::And: return eval_fo_rec(s, f.child(0), env) && eval_fo_rec(s, f.child(1), env);
    case FOKind::Or: return eval_fo_rec(s, f.child(0), env) || eval_fo_rec(s, f.child(1), env);
    case FOKind::Implies:
      return !eval_fo_rec(s, f.child(0), env) || eval_fo_rec(s, f.child(1), env);
    case FOKind::Exists:
    case FOKind::Forall: {
      const bool universal = f.kind() == FOKind::Forall;
      auto saved = env.find(f.quant_var());
      bool had = saved != env.end();
      int old = had ? saved->second : 0;
      bool result = universal;
      for (std::size_t e = 0; e < s.size(); ++e) {
        env[f.quant_var()] = static_cast<int>(e);
        bool v = eval_fo_rec(s, f.child(0), env);
        if (universal && !v) {
          result = false;
          break;
        }
        if (!universal && v) {
          result = true;
          break;
        }
      }
      if (had) env[f.quant_var()] = old;
      else env.erase(f.quant_var());
      return result;
    }
  }
  throw FOError("unknown FO node");
}

}  // namespace

bool eval_fo(const FOStructure& s, const FOFormula& f, std::map<std::string, int> env) {
  return eval_fo_rec(s, f, env);
}

FOStructure to_structure(const KripkeModel& m, Team t) {
  FOStructure s(static_cast<std::size_t>(m.world_count()));
  for (int w = 0; w < m.world_count(); ++w) s.set_element_name(w, m.world_name(w));
  s.define("E", 2);
  for (int w = 0; w < m.world_count(); ++w) {
    for (int v = 0; v < m.world_count(); ++v) {
      if (m.has_edge(w, v)) s.add_tuple("E", {w, v});
    }
  }
  s.define("T", 1);
  for (int w = 0; w < m.world_count(); ++w) {
    if (t.contains(w)) s.add_tuple("T", {w});
  }
  for (int x = 0; x < m.variable_count(); ++x) {
    std::string rel = "W_" + m.variables()[x];
    s.define(rel, 1);
    for (int w = 0; w < m.world_count(); ++w) {
      if (m.holds(x, w)) s.add_tuple(rel, {w});
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// generalized atoms

const GeneralizedAtom& AtomRegistry::register_atom(std::string name, int arity,
                                                   FOFormula sentence) {
  if (arity < 1) throw FOError("atom " + name + ": arity must be >= 1");
  if (atoms_.count(name)) throw FOError("atom " + name + " is already registered");
  if (!sentence.free_variables().empty())
    throw FOError("atom " + name + ": defining formula must be a sentence");
  for (const auto& [rel, rel_arity] : sentence.relations()) {
    bool ok = false;
    if (rel.size() > 1 && rel[0] == 'A') {
      int idx = 0;
      bool digits = true;
      for (std::size_t i = 1; i < rel.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(rel[i]))) {
          digits = false;
          break;
        }
        idx = idx * 10 + (rel[i] - '0');
      }
      ok = digits && idx >= 1 && idx <= arity && rel_arity == 1;
    }
    if (!ok)
      throw FOError("atom " + name + ": sentence may only use the unary relations A1..A" +
                    std::to_string(arity) + " (offending: " + rel + ")");
  }
  GeneralizedAtom atom{name, arity, sentence, !sentence.uses_equality()};
  auto [it, fresh] = atoms_.emplace(std::move(name), std::move(atom));
  (void)fresh;
  return it->second;
}

const GeneralizedAtom& AtomRegistry::register_atom(std::string name, int arity,
                                                   const std::string& sentence) {
  return register_atom(std::move(name), arity, parse_fo(sentence));
}

const GeneralizedAtom* AtomRegistry::find(const std::string& name) const {
  auto it = atoms_.find(name);
  return it == atoms_.end() ? nullptr : &it->second;
}

std::vector<std::string> AtomRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, atom] : atoms_) out.push_back(name);
  return out;
}

AtomRegistry AtomRegistry::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FOError(std::string("bad atom registry JSON: ") + e.what());
  }
  if (!j.is_array()) throw FOError("atom registry must be a JSON array");
  AtomRegistry reg;
  for (const auto& entry : j) {
    reg.register_atom(entry.at("name").get<std::string>(), entry.at("arity").get<int>(),
                      entry.at("sentence").get<std::string>());
  }
  return reg;
}

GeneralizedAtom group_cover_atom(int n, int m) {
  if (n < 1 || m < 1) throw FOError("group_cover_atom: both dimensions must be >= 1");
  auto rel_name = [n](int group, int member) {
    return "A" + std::to_string(group * n + member + 1);
  };
  FOFormula whole = FOFormula::falsity();
  bool first_group = true;
  for (int k = m - 1; k >= 0; --k) {
    // cover: every element satisfies some member of group k
    FOFormula some_member = FOFormula::rel(rel_name(k, n - 1), {"x"});
    for (int j = n - 2; j >= 0; --j)
      some_member = FOFormula::fo_or(FOFormula::rel(rel_name(k, j), {"x"}), std::move(some_member));
    FOFormula group = FOFormula::forall("x", std::move(some_member));
    // witnesses: every member of group k is satisfied somewhere
    for (int j = 0; j < n; ++j) {
      group = FOFormula::fo_and(std::move(group),
                                FOFormula::exists("x", FOFormula::rel(rel_name(k, j), {"x"})));
    }
    whole = first_group ? std::move(group) : FOFormula::fo_or(std::move(group), std::move(whole));
    first_group = false;
  }
  GeneralizedAtom atom;
  atom.name = "cover" + std::to_string(n) + "x" + std::to_string(m);
  atom.arity = n * m;
  atom.sentence = std::move(whole);
  atom.identity_free = true;
  return atom;
}

bool group_cover_holds(const KripkeModel& m, Team t, std::span<const Formula> args, int n,
                       int groups) {
  if (static_cast<int>(args.size()) != n * groups)
    throw FOError("group_cover_holds: argument count must be n * groups");
  for (int k = 0; k < groups; ++k) {
    bool covered = true;
    for (int w = 0; w < m.world_count() && covered; ++w) {
      if (!t.contains(w)) continue;
      bool some = false;
      for (int j = 0; j < n && !some; ++j)
        some = semantics::eval_pointed(m, w, args[k * n + j]);
      covered = some;
    }
    if (!covered) continue;
    bool witnessed = true;
    for (int j = 0; j < n && witnessed; ++j) {
      bool found = false;
      for (int w = 0; w < m.world_count() && !found; ++w) {
        if (t.contains(w) && semantics::eval_pointed(m, w, args[k * n + j])) found = true;
      }
      witnessed = found;
    }
    if (witnessed) return true;
  }
  return false;
}

}  // namespace teamsem::fo
