#include "pap/core.h"

#include <sstream>

namespace pap {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::parse_error: return "PARSE_ERROR";
    case Errc::arity_clash: return "ARITY_CLASH";
    case Errc::duplicate_hypothesis: return "DUPLICATE_HYPOTHESIS";
    case Errc::negative_weight: return "NEGATIVE_WEIGHT";
    case Errc::nonground: return "NONGROUND";
    case Errc::nonground_observation: return "NONGROUND_OBSERVATION";
    case Errc::nonground_hypothesis: return "NONGROUND_HYPOTHESIS";
    case Errc::unsafe_program: return "UNSAFE_PROGRAM";
    case Errc::integer_overflow: return "INTEGER_OVERFLOW";
    case Errc::hypothesis_in_head: return "HYPOTHESIS_IN_HEAD";
    case Errc::missing_penalty: return "MISSING_PENALTY";
    case Errc::weak_in_program: return "WEAK_CONSTRAINT_IN_PROGRAM";
    case Errc::fresh_predicate_collision: return "FRESH_PREDICATE_COLLISION";
    case Errc::no_candidate_model: return "NO_CANDIDATE_MODEL";
    case Errc::inconsistent: return "INCONSISTENT";
    case Errc::h_membership: return "H_MEMBERSHIP";
    case Errc::too_large: return "TOO_LARGE";
    case Errc::illegal_configuration: return "ILLEGAL_CONFIGURATION";
    case Errc::input_error: return "INPUT_ERROR";
  }
  return "UNKNOWN";
}

std::string to_string(const Term& t) {
  switch (t.kind) {
    case TermKind::integer: return std::to_string(t.value);
    default: return t.name;
  }
}

bool Atom::is_ground() const {
  for (const Term& t : args)
    if (!t.is_ground()) return false;
  return true;
}

bool Atom::is_builtin() const {
  return predicate == kNeq || predicate == kLt || predicate == kGt || predicate == kPlus;
}

std::string to_string(const Atom& a) {
  if (a.is_builtin()) {
    if (a.predicate == kPlus)
      return to_string(a.args[0]) + " = " + to_string(a.args[1]) + " + " + to_string(a.args[2]);
    return to_string(a.args[0]) + " " + a.predicate + " " + to_string(a.args[1]);
  }
  if (a.args.empty()) return a.predicate;
  std::string s = a.predicate + "(";
  for (std::size_t k = 0; k < a.args.size(); ++k) {
    if (k) s += ",";
    s += to_string(a.args[k]);
  }
  s += ")";
  return s;
}

std::string to_string(const Literal& l) {
  return l.positive ? to_string(l.atom) : "not " + to_string(l.atom);
}

static std::string body_to_string(const std::vector<Literal>& body) {
  std::string s;
  for (std::size_t k = 0; k < body.size(); ++k) {
    if (k) s += ", ";
    s += to_string(body[k]);
  }
  return s;
}

std::string to_string(const Rule& r) {
  std::string s;
  if (r.head) s += to_string(*r.head);
  if (!r.body.empty() || r.is_constraint()) {
    if (r.head) s += " ";
    s += ":- " + body_to_string(r.body);
  }
  return s + ".";
}

std::string to_string(const WeakConstraint& w) {
  return ":~ " + body_to_string(w.body) + ". [" + std::to_string(w.weight) + ":]";
}

std::string to_string(const Program& p) {
  std::ostringstream out;
  for (const Rule& r : p.rules) out << to_string(r) << "\n";
  for (const WeakConstraint& w : p.weak_constraints) out << to_string(w) << "\n";
  return out.str();
}

void Interpretation::insert(Atom a) {
  if (!a.is_ground())
    throw Error(Errc::nonground, "interpretation atom " + to_string(a) + " is not ground");
  atoms.insert(std::move(a));
}

std::string to_string(const Interpretation& i) {
  std::string s = "{";
  bool first = true;
  for (const Atom& a : i.atoms) {
    if (!first) s += ", ";
    first = false;
    s += to_string(a);
  }
  return s + "}";
}

// Total order used by "<" and ">": integers numerically, every integer
// before every symbolic constant, constants by spelling.
static int compare_ground(const Term& a, const Term& b) {
  bool ai = a.kind == TermKind::integer, bi = b.kind == TermKind::integer;
  if (ai && bi) return a.value < b.value ? -1 : a.value > b.value ? 1 : 0;
  if (ai != bi) return ai ? -1 : 1;
  return a.name < b.name ? -1 : a.name > b.name ? 1 : 0;
}

bool builtin_true(const Atom& a) {
  if (!a.is_ground())
    throw Error(Errc::nonground, "built-in " + to_string(a) + " is not ground");
  if (a.predicate == kNeq) return a.args[0] != a.args[1];
  if (a.predicate == kLt) return compare_ground(a.args[0], a.args[1]) < 0;
  if (a.predicate == kGt) return compare_ground(a.args[0], a.args[1]) > 0;
  // S = A + B; false on symbolic operands rather than an error, so that
  // instances produced by substitution simply drop out.
  const Term &s = a.args[0], &x = a.args[1], &y = a.args[2];
  if (x.kind != TermKind::integer || y.kind != TermKind::integer || s.kind != TermKind::integer)
    return false;
  long long sum;
  if (__builtin_add_overflow(x.value, y.value, &sum))
    throw Error(Errc::integer_overflow, "in " + to_string(a));
  return sum == s.value;
}

bool literal_true(const Literal& l, const Interpretation& i) {
  if (!l.is_ground())
    throw Error(Errc::nonground, "literal " + to_string(l) + " is not ground");
  bool holds = l.atom.is_builtin() ? builtin_true(l.atom) : i.contains(l.atom);
  return l.positive ? holds : !holds;
}

bool rule_satisfied(const Rule& r, const Interpretation& i) {
  if (r.head && !r.head->is_ground())
    throw Error(Errc::nonground, "rule head " + to_string(*r.head) + " is not ground");
  if (r.head && i.contains(*r.head)) return true;
  for (const Literal& l : r.body)
    if (!literal_true(l, i)) return true;
  return false;
}

bool is_model(const Program& p, const Interpretation& i) {
  for (const Rule& r : p.rules)
    if (!rule_satisfied(r, i)) return false;
  return true;
}

}  // namespace pap
