// Weak-constraint optimization over ground programs: objective value,
// best (minimum-cost) candidate models, anytime improvement reporting.
#ifndef PAP_WEAK_H
#define PAP_WEAK_H

#include <functional>
#include <optional>
#include <vector>

#include "pap/core.h"
#include "pap/grounder.h"

namespace pap {

// A stable model of the rules that satisfies every strong constraint,
// annotated with the total weight of the weak constraints it violates.
struct CandidateModel {
  Interpretation interpretation;
  long long cost = 0;

  auto operator<=>(const CandidateModel&) const = default;
};

// Sum of weights of weak constraints whose body is fully true in m.
// Accumulates in 128 bits; a sum that does not fit the result type raises
// INTEGER_OVERFLOW.
long long objective(const GroundProgram& p, const Interpretation& m);

struct BestModelsOptions {
  bool trace = false;                     // report strict improvements
  std::optional<long long> upper_bound;   // accept only cost <= bound
  std::optional<std::size_t> limit;       // cap on returned tied models
};

// All candidate models of minimum cost (within the bound, when given),
// sorted by their atom-id sets so ties resolve deterministically; callers
// needing one model take the front. With trace set, on_improved sees every
// strictly improving incumbent in discovery order. Raises NO_CANDIDATE_MODEL
// when no candidate model exists (or none within the bound).
std::vector<CandidateModel> best_models(
    const GroundProgram& p, const BestModelsOptions& options = {},
    const std::function<void(const CandidateModel&)>& on_improved = {});

// Existence probe: some candidate model with cost <= upper_bound (any cost
// when absent), or nullopt. Does not throw on absence.
std::optional<CandidateModel> find_candidate(
    const GroundProgram& p, std::optional<long long> upper_bound = std::nullopt);

}  // namespace pap

#endif
