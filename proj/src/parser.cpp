#include "pap/parser.h"

#include <cctype>
#include <map>
#include <set>

namespace pap {
namespace {

// Larger literals are rejected so that downstream arithmetic and weight
// sums stay far away from the 64-bit boundary.
constexpr long long kMaxIntLiteral = 1000000000000000LL;

enum class Tok {
  ident, variable, integer, kw_not,
  colon_dash, colon_tilde, dot, comma, lparen, rparen,
  lbracket, rbracket, colon, neq, lt, gt, eq, plus, minus,
  end,
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::ident: return "identifier";
    case Tok::variable: return "variable";
    case Tok::integer: return "integer";
    case Tok::kw_not: return "'not'";
    case Tok::colon_dash: return "':-'";
    case Tok::colon_tilde: return "':~'";
    case Tok::dot: return "'.'";
    case Tok::comma: return "','";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::lbracket: return "'['";
    case Tok::rbracket: return "']'";
    case Tok::colon: return "':'";
    case Tok::neq: return "'!='";
    case Tok::lt: return "'<'";
    case Tok::gt: return "'>'";
    case Tok::eq: return "'='";
    case Tok::plus: return "'+'";
    case Tok::minus: return "'-'";
    case Tok::end: return "end of input";
  }
  return "?";
}

struct Token {
  Tok type;
  std::string text;
  long long value = 0;
  std::size_t line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_blank();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= text_.size()) {
      t.type = Tok::end;
      return t;
    }
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
      t.text = std::string(text_.substr(start, pos_ - start));
      if (t.text.size() > 16)
        throw Error(Errc::parse_error, "integer literal too large", t.line, t.col);
      t.value = std::stoll(t.text);
      if (t.value > kMaxIntLiteral)
        throw Error(Errc::parse_error, "integer literal too large", t.line, t.col);
      t.type = Tok::integer;
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        advance();
      t.text = std::string(text_.substr(start, pos_ - start));
      if (t.text == "not")
        t.type = Tok::kw_not;
      else
        t.type = std::isupper(static_cast<unsigned char>(c)) ? Tok::variable : Tok::ident;
      return t;
    }
    switch (c) {
      case ':':
        advance();
        if (pos_ < text_.size() && text_[pos_] == '-') { advance(); t.type = Tok::colon_dash; return t; }
        if (pos_ < text_.size() && text_[pos_] == '~') { advance(); t.type = Tok::colon_tilde; return t; }
        t.type = Tok::colon;
        return t;
      case '!':
        advance();
        if (pos_ < text_.size() && text_[pos_] == '=') { advance(); t.type = Tok::neq; return t; }
        throw Error(Errc::parse_error, "stray '!'", t.line, t.col);
      case '.': advance(); t.type = Tok::dot; return t;
      case ',': advance(); t.type = Tok::comma; return t;
      case '(': advance(); t.type = Tok::lparen; return t;
      case ')': advance(); t.type = Tok::rparen; return t;
      case '[': advance(); t.type = Tok::lbracket; return t;
      case ']': advance(); t.type = Tok::rbracket; return t;
      case '<': advance(); t.type = Tok::lt; return t;
      case '>': advance(); t.type = Tok::gt; return t;
      case '=': advance(); t.type = Tok::eq; return t;
      case '+': advance(); t.type = Tok::plus; return t;
      case '-': advance(); t.type = Tok::minus; return t;
      default:
        throw Error(Errc::parse_error,
                    std::string("unexpected character '") + c + "'", t.line, t.col);
    }
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') { ++line_; col_ = 1; } else { ++col_; }
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1, col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { cur_ = lexer_.next(); }

  Program program() {
    Program p;
    while (cur_.type != Tok::end) {
      if (accept(Tok::colon_dash)) {
        Rule r;
        r.body = body();
        expect(Tok::dot);
        p.rules.push_back(std::move(r));
      } else if (accept(Tok::colon_tilde)) {
        WeakConstraint w;
        w.body = body();
        expect(Tok::dot);
        if (accept(Tok::lbracket)) {
          w.weight = weight_value();
          expect(Tok::colon);
          expect(Tok::rbracket);
        }
        p.weak_constraints.push_back(std::move(w));
      } else if (cur_.type == Tok::ident) {
        Rule r;
        r.head = atom();
        if (accept(Tok::colon_dash)) r.body = body();
        expect(Tok::dot);
        p.rules.push_back(std::move(r));
      } else {
        fail({Tok::ident, Tok::colon_dash, Tok::colon_tilde, Tok::end});
      }
    }
    return p;
  }

  std::vector<HypothesisDecl> hypotheses() {
    std::vector<HypothesisDecl> decls;
    std::set<Atom> seen;
    while (cur_.type != Tok::end) {
      Token at = cur_;
      HypothesisDecl d;
      d.atom = plain_atom();
      d.penalty = 1;
      if (accept(Tok::lbracket)) {
        d.penalty = weight_value();
        expect(Tok::rbracket);
      }
      expect(Tok::dot);
      if (!d.atom.is_ground())
        throw Error(Errc::nonground_hypothesis, to_string(d.atom), at.line, at.col);
      if (!seen.insert(d.atom).second)
        throw Error(Errc::duplicate_hypothesis, to_string(d.atom), at.line, at.col);
      decls.push_back(std::move(d));
    }
    return decls;
  }

  std::vector<Literal> observations() {
    std::vector<Literal> obs;
    std::set<Literal> seen;
    while (cur_.type != Tok::end) {
      Token at = cur_;
      Literal l;
      l.positive = !accept(Tok::kw_not);
      l.atom = plain_atom();
      expect(Tok::dot);
      if (!l.is_ground())
        throw Error(Errc::nonground_observation, to_string(l), at.line, at.col);
      if (seen.insert(l).second) obs.push_back(std::move(l));
    }
    return obs;
  }

 private:
  bool accept(Tok t) {
    if (cur_.type != t) return false;
    cur_ = lexer_.next();
    return true;
  }

  void expect(Tok t) {
    if (!accept(t)) fail({t});
  }

  [[noreturn]] void fail(std::initializer_list<Tok> expected) {
    std::string msg = "got ";
    msg += cur_.type == Tok::ident || cur_.type == Tok::variable || cur_.type == Tok::integer
               ? "'" + cur_.text + "'"
               : tok_name(cur_.type);
    msg += ", expected ";
    bool first = true;
    for (Tok t : expected) {
      if (!first) msg += " or ";
      first = false;
      msg += tok_name(t);
    }
    throw Error(Errc::parse_error, msg, cur_.line, cur_.col);
  }

  long long weight_value() {
    bool negative = accept(Tok::minus);
    Token at = cur_;
    if (cur_.type != Tok::integer) fail({Tok::integer});
    long long v = cur_.value;
    cur_ = lexer_.next();
    if (negative)
      throw Error(Errc::negative_weight, "-" + std::to_string(v), at.line, at.col);
    return v;
  }

  Term term() {
    Token t = cur_;
    if (accept(Tok::ident)) return Term::constant(t.text);
    if (accept(Tok::variable)) return Term::variable(t.text);
    if (accept(Tok::integer)) return Term::integer(t.value);
    fail({Tok::ident, Tok::variable, Tok::integer});
  }

  // An atom with arity bookkeeping; never a built-in.
  Atom plain_atom() {
    Token name = cur_;
    if (cur_.type != Tok::ident) fail({Tok::ident});
    cur_ = lexer_.next();
    Atom a;
    a.predicate = name.text;
    if (accept(Tok::lparen)) {
      a.args.push_back(term());
      while (accept(Tok::comma)) a.args.push_back(term());
      expect(Tok::rparen);
    }
    auto [it, fresh] = arity_.emplace(a.predicate, a.arity());
    if (!fresh && it->second != a.arity())
      throw Error(Errc::arity_clash,
                  a.predicate + "/" + std::to_string(a.arity()) + " previously used with arity " +
                      std::to_string(it->second),
                  name.line, name.col);
    return a;
  }

  // An atom or an infix built-in; used in rule and constraint bodies.
  Atom atom() {
    if (cur_.type == Tok::variable || cur_.type == Tok::integer) return builtin_tail(term());
    bool known = arity_.count(cur_.text) != 0;
    Atom a = plain_atom();
    if (cur_.type == Tok::neq || cur_.type == Tok::lt || cur_.type == Tok::gt ||
        cur_.type == Tok::eq) {
      if (!a.args.empty()) fail({Tok::dot, Tok::comma});
      if (!known) arity_.erase(a.predicate);  // it was a term after all, not a predicate
      return builtin_tail(Term::constant(a.predicate));
    }
    return a;
  }

  Atom builtin_tail(Term lhs) {
    Atom a;
    if (accept(Tok::neq)) a.predicate = kNeq;
    else if (accept(Tok::lt)) a.predicate = kLt;
    else if (accept(Tok::gt)) a.predicate = kGt;
    else if (accept(Tok::eq)) a.predicate = kPlus;
    else fail({Tok::neq, Tok::lt, Tok::gt, Tok::eq});
    a.args.push_back(std::move(lhs));
    a.args.push_back(term());
    if (a.predicate == kPlus) {
      expect(Tok::plus);
      a.args.push_back(term());
    }
    return a;
  }

  std::vector<Literal> body() {
    std::vector<Literal> lits;
    do {
      Literal l;
      if (accept(Tok::kw_not)) {
        l.positive = false;
        l.atom = plain_atom();  // negation applies to ordinary atoms only
      } else {
        l.atom = atom();
      }
      lits.push_back(std::move(l));
    } while (accept(Tok::comma));
    return lits;
  }

  // Arity bookkeeping is shared across one parse so that "p(a). p(a,b)."
  // is flagged wherever it appears. Built-ins never enter the map; an
  // identifier that turns out to be a built-in operand is backed out.
  Lexer lexer_;
  Token cur_;
  std::map<std::string, std::size_t> arity_;
};

}  // namespace

Program parse_program(std::string_view text) { return Parser(text).program(); }

std::vector<HypothesisDecl> parse_hypotheses(std::string_view text) {
  return Parser(text).hypotheses();
}

std::vector<Literal> parse_observations(std::string_view text) {
  return Parser(text).observations();
}

}  // namespace pap
