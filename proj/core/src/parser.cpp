#include <cctype>
#include <optional>
#include <utility>

#include "teamsem/formula.hpp"

namespace teamsem {

namespace {

enum class Tok {
  Ident,
  KwTop,
  KwBot,
  KwE,
  KwDep,
  KwIndep,
  KwInc,
  KwAtom,
  KwOtimes,
  KwLor,
  Bang,
  Tilde,
  DiamondOp,
  BoxOp,
  Amp,
  Pipe,
  Arrow,
  LParen,
  RParen,
  Comma,
  Semi,
  End,
};

struct Token {
  Tok tok;
  std::string text;
  int line;
  int col;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : s_(text) { advance(); }

  const Token& peek() const { return cur_; }

  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) bump();
    cur_.line = line_;
    cur_.col = col_;
    cur_.text.clear();
    if (pos_ >= s_.size()) {
      cur_.tok = Tok::End;
      return;
    }
    char c = s_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string word;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
        word.push_back(s_[pos_]);
        bump();
      }
      cur_.text = word;
      if (word == "top") cur_.tok = Tok::KwTop;
      else if (word == "bot") cur_.tok = Tok::KwBot;
      else if (word == "E") cur_.tok = Tok::KwE;
      else if (word == "dep") cur_.tok = Tok::KwDep;
      else if (word == "indep") cur_.tok = Tok::KwIndep;
      else if (word == "inc") cur_.tok = Tok::KwInc;
      else if (word == "atom") cur_.tok = Tok::KwAtom;
      else if (word == "otimes") cur_.tok = Tok::KwOtimes;
      else if (word == "lor") cur_.tok = Tok::KwLor;
      else cur_.tok = Tok::Ident;
      return;
    }
    switch (c) {
      case '!': cur_.tok = Tok::Bang; bump(); return;
      case '~': cur_.tok = Tok::Tilde; bump(); return;
      case '&': cur_.tok = Tok::Amp; bump(); return;
      case '|': cur_.tok = Tok::Pipe; bump(); return;
      case '(': cur_.tok = Tok::LParen; bump(); return;
      case ')': cur_.tok = Tok::RParen; bump(); return;
      case ',': cur_.tok = Tok::Comma; bump(); return;
      case ';': cur_.tok = Tok::Semi; bump(); return;
      case '<':
        if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '>') {
          cur_.tok = Tok::DiamondOp;
          bump();
          bump();
          return;
        }
        throw ParseError(line_, col_, "expected '<>'");
      case '[':
        if (pos_ + 1 < s_.size() && s_[pos_ + 1] == ']') {
          cur_.tok = Tok::BoxOp;
          bump();
          bump();
          return;
        }
        throw ParseError(line_, col_, "expected '[]'");
      case '-':
        if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '>') {
          cur_.tok = Tok::Arrow;
          bump();
          bump();
          return;
        }
        throw ParseError(line_, col_, "expected '->'");
      default:
        throw ParseError(line_, col_, std::string("unexpected character '") + c + "'");
    }
  }

  void bump() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token cur_{};
};

// binary levels, loosest first; all binary operators are right-associative
constexpr int kLvlImpl = 1;
constexpr int kLvlLor = 2;
constexpr int kLvlOtimes = 3;
constexpr int kLvlPipe = 4;
constexpr int kLvlAmp = 5;
constexpr int kLvlMax = 6;

class Parser {
 public:
  Parser(const std::string& text, const ParseOptions& opts) : lex_(text), opts_(opts) {}

  Formula run() {
    Formula f = parse_binary(kLvlImpl);
    expect(Tok::End, "end of input");
    return f;
  }

 private:
  Formula parse_binary(int level) {
    if (level >= kLvlMax) return parse_prefix();
    Formula lhs = parse_binary(level + 1);
    Tok want;
    switch (level) {
      case kLvlAmp: want = Tok::Amp; break;
      case kLvlPipe: want = Tok::Pipe; break;
      case kLvlOtimes: want = Tok::KwOtimes; break;
      case kLvlLor: want = Tok::KwLor; break;
      default: want = Tok::Arrow; break;
    }
    if (lex_.peek().tok != want) return lhs;
    lex_.take();
    Formula rhs = parse_binary(level);  // right-associative
    switch (level) {
      case kLvlAmp: return Formula::conj(std::move(lhs), std::move(rhs));
      case kLvlPipe: return Formula::split_or(std::move(lhs), std::move(rhs));
      case kLvlOtimes: return Formula::tensor(std::move(lhs), std::move(rhs));
      case kLvlLor: return Formula::class_or(std::move(lhs), std::move(rhs));
      default: return Formula::int_impl(std::move(lhs), std::move(rhs));
    }
  }

  Formula parse_prefix() {
    Token t = lex_.take();
    switch (t.tok) {
      case Tok::KwTop: return Formula::top();
      case Tok::KwBot: return Formula::bot();
      case Tok::Ident: return Formula::prop(t.text);
      case Tok::Bang: {
        Token v = lex_.take();
        if (v.tok != Tok::Ident)
          throw ParseError(v.line, v.col, "'!' must be followed by a proposition name");
        return Formula::neg_prop(v.text);
      }
      case Tok::Tilde: return Formula::cneg(parse_prefix());
      case Tok::KwE: return Formula::exists(parse_prefix());
      case Tok::DiamondOp: return Formula::diamond(parse_prefix());
      case Tok::BoxOp: return Formula::box(parse_prefix());
      case Tok::LParen: {
        Formula f = parse_binary(kLvlImpl);
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::KwDep: {
        expect(Tok::LParen, "'('");
        std::vector<Formula> args = parse_list();
        expect(Tok::RParen, "')'");
        return wrap(t, [&] { return Formula::dep(std::move(args)); });
      }
      case Tok::KwIndep: {
        expect(Tok::LParen, "'('");
        std::vector<Formula> p = parse_list();
        expect(Tok::Semi, "';'");
        std::vector<Formula> r = parse_list();
        expect(Tok::Semi, "';'");
        std::vector<Formula> q = parse_list();
        expect(Tok::RParen, "')'");
        return wrap(t, [&] { return Formula::indep(std::move(p), std::move(r), std::move(q)); });
      }
      case Tok::KwInc: {
        expect(Tok::LParen, "'('");
        std::vector<Formula> lhs = parse_list();
        expect(Tok::Semi, "';'");
        std::vector<Formula> rhs = parse_list();
        expect(Tok::RParen, "')'");
        return wrap(t, [&] { return Formula::incl(std::move(lhs), std::move(rhs)); });
      }
      case Tok::KwAtom: {
        Token name = lex_.take();
        if (name.tok != Tok::Ident)
          throw ParseError(name.line, name.col, "'atom' must be followed by an atom name");
        expect(Tok::LParen, "'('");
        std::vector<Formula> args = parse_list();
        expect(Tok::RParen, "')'");
        if (opts_.atom_arity) {
          std::optional<int> want = opts_.atom_arity(name.text);
          if (want && static_cast<std::size_t>(*want) != args.size())
            throw ParseError(t.line, t.col,
                             "atom " + name.text + " expects " + std::to_string(*want) +
                                 " arguments, got " + std::to_string(args.size()));
        }
        return wrap(t, [&] { return Formula::gen_atom(name.text, std::move(args)); });
      }
      default:
        throw ParseError(t.line, t.col, "unexpected token '" + t.text + "'");
    }
  }

  // empty lists are allowed here; arity constraints live in the factories
  std::vector<Formula> parse_list() {
    std::vector<Formula> out;
    Tok next = lex_.peek().tok;
    if (next == Tok::Semi || next == Tok::RParen) return out;
    out.push_back(parse_binary(kLvlImpl));
    while (lex_.peek().tok == Tok::Comma) {
      lex_.take();
      out.push_back(parse_binary(kLvlImpl));
    }
    return out;
  }

  template <typename F>
  Formula wrap(const Token& at, F&& build) {
    try {
      return build();
    } catch (const Error& e) {
      throw ParseError(at.line, at.col, e.what());
    }
  }

  void expect(Tok want, const char* what) {
    Token t = lex_.take();
    if (t.tok != want) throw ParseError(t.line, t.col, std::string("expected ") + what);
  }

  Lexer lex_;
  const ParseOptions& opts_;
};

}  // namespace

Formula parse(const std::string& text, const ParseOptions& opts) {
  return Parser(text, opts).run();
}

}  // namespace teamsem
