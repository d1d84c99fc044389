// core.h -- abstract syntax for function-free normal logic programs with
// weak constraints, plus basic satisfaction semantics over interpretations.
#ifndef PAP_CORE_H
#define PAP_CORE_H

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pap/error.h"

namespace pap {

// Variables start with an uppercase letter, constants with a lowercase
// letter or underscore; the parser enforces the convention.
enum class TermKind : std::uint8_t { constant, variable, integer };

struct Term {
  TermKind kind = TermKind::constant;
  std::string name;      // constant or variable spelling; empty for integers
  long long value = 0;   // integer payload; 0 otherwise

  static Term constant(std::string n) { return {TermKind::constant, std::move(n), 0}; }
  static Term variable(std::string n) { return {TermKind::variable, std::move(n), 0}; }
  static Term integer(long long v) { return {TermKind::integer, std::string(), v}; }

  bool is_ground() const { return kind != TermKind::variable; }
  auto operator<=>(const Term&) const = default;
};

std::string to_string(const Term& t);

// Built-in comparison and arithmetic atoms are represented with reserved
// predicate spellings that no user identifier can collide with. The
// arithmetic atom "=+"(S,A,B) means S = A + B.
inline constexpr const char* kNeq = "!=";
inline constexpr const char* kLt = "<";
inline constexpr const char* kGt = ">";
inline constexpr const char* kPlus = "=+";

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  std::size_t arity() const { return args.size(); }
  bool is_ground() const;
  bool is_builtin() const;
  auto operator<=>(const Atom&) const = default;
};

std::string to_string(const Atom& a);

struct Literal {
  Atom atom;
  bool positive = true;

  bool is_ground() const { return atom.is_ground(); }
  auto operator<=>(const Literal&) const = default;
};

std::string to_string(const Literal& l);

// A rule without a head is a strong constraint: acceptable models must
// falsify its body. A fact is a rule with a head and an empty body.
struct Rule {
  std::optional<Atom> head;
  std::vector<Literal> body;

  bool is_constraint() const { return !head.has_value(); }
  bool is_fact() const { return head.has_value() && body.empty(); }
  auto operator<=>(const Rule&) const = default;
};

std::string to_string(const Rule& r);

struct WeakConstraint {
  std::vector<Literal> body;
  long long weight = 1;  // never negative

  auto operator<=>(const WeakConstraint&) const = default;
};

std::string to_string(const WeakConstraint& w);

struct Program {
  std::vector<Rule> rules;  // rules, facts and strong constraints, in input order
  std::vector<WeakConstraint> weak_constraints;

  auto operator<=>(const Program&) const = default;
};

std::string to_string(const Program& p);

// A finite set of ground atoms.
struct Interpretation {
  std::set<Atom> atoms;

  Interpretation() = default;
  explicit Interpretation(std::set<Atom> a) : atoms(std::move(a)) {}

  bool contains(const Atom& a) const { return atoms.count(a) != 0; }
  void insert(Atom a);  // rejects non-ground atoms
  std::size_t size() const { return atoms.size(); }
  bool empty() const { return atoms.empty(); }
  auto operator<=>(const Interpretation&) const = default;
};

std::string to_string(const Interpretation& i);

// Truth of a ground literal: a positive literal holds iff its atom is in i,
// a negative literal iff it is not. Ground built-ins are evaluated by their
// arithmetic meaning so that rules containing them can still be checked
// directly. Throws Errc::nonground on non-ground input.
bool literal_true(const Literal& l, const Interpretation& i);

// Evaluates a ground built-in atom. Comparisons order integers numerically
// and place every integer before every symbolic constant; "!=" is structural
// inequality. The arithmetic atom is true iff args[0] = args[1] + args[2]
// over integers.
bool builtin_true(const Atom& a);

// A ground rule holds iff its head is true or some body literal is false;
// a strong constraint holds iff some body literal is false.
bool rule_satisfied(const Rule& r, const Interpretation& i);

// Model check for a ground program: every rule and strong constraint holds.
// Weak constraints do not take part in model-hood.
bool is_model(const Program& p, const Interpretation& i);

}  // namespace pap

#endif
