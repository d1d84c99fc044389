// Stable-model semantics for ground programs: reduct, least model,
// stability test, stratification analysis, enumeration.
#ifndef PAP_STABLE_H
#define PAP_STABLE_H

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "pap/core.h"
#include "pap/grounder.h"

namespace pap {

// Positive remainder of a ground program after the reduction step: rules
// whose negative body is disjoint from the interpretation, negatives dropped.
// Strong and weak constraints are not part of a reduct.
struct Reduct {
  std::vector<Rule> rules;

  auto operator<=>(const Reduct&) const = default;
};

Reduct reduct(const GroundProgram& p, const Interpretation& i);

// Least model of a positive constraint-free program. Always exists.
Interpretation least_model(const Reduct& r);

// i = lm(p^i) and every strong constraint of p is satisfied by i.
// Interpretations mentioning atoms outside the program's base are never
// stable.
bool is_stable(const GroundProgram& p, const Interpretation& i);

// Predicate-level check: no dependency cycle passes through a negative edge.
// Works on non-ground programs; weak constraints do not affect the result.
bool is_stratified(const Program& p);

// All stable models that satisfy the strong constraints, in a deterministic
// order fixed by the atom interning order. The callback sees each model as it
// is found; returning false stops the enumeration early, as does reaching
// `limit`.
std::vector<Interpretation> enumerate_stable_models(
    const GroundProgram& p, std::optional<std::size_t> limit = std::nullopt,
    const std::function<bool(const Interpretation&)>& on_model = {});

}  // namespace pap

#endif
