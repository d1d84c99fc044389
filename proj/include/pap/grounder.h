// grounder.h -- safety analysis and instantiation of non-ground programs.
#ifndef PAP_GROUNDER_H
#define PAP_GROUNDER_H

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pap/core.h"

namespace pap {

struct SafetyViolation {
  std::size_t index;       // position in Program::rules or ::weak_constraints
  bool in_weak;
  std::string variable;
  std::string rule_text;
};

// A rule is safe iff every variable is bound: bound variables are those in a
// positive non-built-in body literal, plus, transitively, the left-hand side
// of an arithmetic atom V = A + B whose right-hand variables are bound.
std::vector<SafetyViolation> check_safety(const Program& p);

// Ground rules and weak constraints refer to atoms by their id in the owning
// GroundProgram. head < 0 marks a strong constraint.
struct GroundRule {
  int head = -1;
  std::vector<int> pos, neg;

  auto operator<=>(const GroundRule&) const = default;
};

struct GroundWeak {
  std::vector<int> pos, neg;
  long long weight = 1;

  auto operator<=>(const GroundWeak&) const = default;
};

// Instantiation result. `base` (the Herbrand base as materialized here) is
// the set of all interned atoms; every atom id used by a rule, constraint or
// weak constraint indexes into it. Ids follow first occurrence in emission
// order, so two ground() calls on equal input produce identical tables.
class GroundProgram {
 public:
  int intern(const Atom& a);                 // ground, non-built-in
  int id_of(const Atom& a) const;            // -1 when unknown
  const Atom& atom_of(int id) const { return base_[static_cast<std::size_t>(id)]; }
  const std::vector<Atom>& base() const { return base_; }
  std::size_t size() const { return base_.size(); }

  std::vector<GroundRule> rules;        // head >= 0
  std::vector<GroundRule> constraints;  // head < 0
  std::vector<GroundWeak> weak;

  // View as a symbolic program (used by tests and printing).
  Program to_program() const;

  Interpretation decode(const std::vector<bool>& in) const;
  // Membership vector over base ids; atoms of i outside the base are ignored
  // (their count is reported through `extra` when given).
  std::vector<bool> encode(const Interpretation& i, std::size_t* extra = nullptr) const;

 private:
  std::vector<Atom> base_;
  std::map<Atom, int> ids_;
};

// Instantiates p over its Herbrand universe: the constants and integers
// occurring in the program plus extra_constants. Substitutions for a rule's
// variables are drawn, per positive body literal, from the atoms derivable
// for that predicate (computed to a fixpoint), or from the full universe for
// predicates the program never defines; body literals that are already
// ground are kept as written. Built-in atoms are evaluated during
// instantiation and deleted from the emitted bodies; instances whose
// built-ins are false, or whose arithmetic exceeds integer_bound, are
// dropped. Throws Errc::unsafe_program on the first safety violation.
GroundProgram ground(const Program& p,
                     const std::set<std::string>& extra_constants = {},
                     std::optional<long long> integer_bound = std::nullopt);

// Default arithmetic cap: the largest integer occurring in the program plus
// the number of hypotheses the caller is about to add.
long long default_int_bound(const Program& p, std::size_t n_hypotheses);

}  // namespace pap

#endif
