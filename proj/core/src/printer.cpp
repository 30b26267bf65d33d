#include <span>
#include <string>

#include "teamsem/formula.hpp"

namespace teamsem {

namespace {

// printer level of a node: binaries as in the parser, everything else binds
// tightest
int level_of(const Formula& f) {
  switch (f.kind()) {
    case Kind::And: return 5;
    case Kind::SplitOr: return 4;
    case Kind::Tensor: return 3;
    case Kind::COr: return 2;
    case Kind::IntImpl: return 1;
    default: return 6;
  }
}

const char* op_of(Kind k) {
  switch (k) {
    case Kind::And: return " & ";
    case Kind::SplitOr: return " | ";
    case Kind::Tensor: return " otimes ";
    case Kind::COr: return " lor ";
    case Kind::IntImpl: return " -> ";
    default: return "";
  }
}

void print(const Formula& f, int min_level, std::string& out);

void print_list(std::span<const Formula> fs, std::string& out) {
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (i) out += ", ";
    print(fs[i], 1, out);
  }
}

void print(const Formula& f, int min_level, std::string& out) {
  int lvl = level_of(f);
  if (lvl < min_level) {
    out += '(';
    print(f, 1, out);
    out += ')';
    return;
  }
  switch (f.kind()) {
    case Kind::Top: out += "top"; return;
    case Kind::Bot: out += "bot"; return;
    case Kind::Prop: out += f.name(); return;
    case Kind::NegProp:
      out += '!';
      out += f.name();
      return;
    case Kind::CNeg:
      out += '~';
      print(f.arg(0), 6, out);
      return;
    case Kind::Exists:
      out += "E ";
      print(f.arg(0), 6, out);
      return;
    case Kind::Diamond:
      out += "<>";
      print(f.arg(0), 6, out);
      return;
    case Kind::Box:
      out += "[]";
      print(f.arg(0), 6, out);
      return;
    case Kind::And:
    case Kind::SplitOr:
    case Kind::Tensor:
    case Kind::COr:
    case Kind::IntImpl:
      print(f.arg(0), lvl + 1, out);
      out += op_of(f.kind());
      print(f.arg(1), lvl, out);  // right-associative
      return;
    case Kind::Dep:
      out += "dep(";
      print_list(f.args(), out);
      out += ')';
      return;
    case Kind::Indep:
      out += "indep(";
      print_list(f.indep_left(), out);
      out += " ; ";
      print_list(f.indep_fixed(), out);
      out += " ; ";
      print_list(f.indep_right(), out);
      out += ')';
      return;
    case Kind::Incl:
      out += "inc(";
      print_list(f.incl_lhs(), out);
      out += " ; ";
      print_list(f.incl_rhs(), out);
      out += ')';
      return;
    case Kind::GenAtom:
      out += "atom ";
      out += f.name();
      out += '(';
      print_list(f.args(), out);
      out += ')';
      return;
  }
}

}  // namespace

std::string render(const Formula& f) {
  std::string out;
  print(f, 1, out);
  return out;
}

}  // namespace teamsem
