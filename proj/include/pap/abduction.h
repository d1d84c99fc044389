// Abduction with penalization: problem model, translation to a
// weak-constraint program, solution extraction, and the reasoning tasks
// (consistency, admissibility, optimality, relevance, necessity).
#ifndef PAP_ABDUCTION_H
#define PAP_ABDUCTION_H

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "pap/core.h"
#include "pap/parser.h"

namespace pap {

// Problem instance: ordered ground hypotheses with nonnegative integer
// penalties, a program whose rule heads never mention a hypothesis, and
// ground observations to explain.
struct PAP {
  std::vector<Atom> hypotheses;      // h_1 ... h_n, order is significant
  std::map<Atom, long long> penalty; // total on hypotheses
  Program program;
  std::vector<Literal> observations;
  // Grounding bound for arithmetic; when absent, the largest integer in the
  // instance plus the number of hypotheses is used.
  std::optional<long long> integer_bound;
};

// Validated assembly from parsed pieces, preserving declaration order.
PAP make_pap(Program program, std::vector<HypothesisDecl> hypotheses,
             std::vector<Literal> observations,
             std::optional<long long> integer_bound = std::nullopt);

// Checks the construction invariants and returns the instance unchanged.
// Raises HYPOTHESIS_IN_HEAD, NONGROUND_HYPOTHESIS, DUPLICATE_HYPOTHESIS,
// MISSING_PENALTY, NEGATIVE_WEIGHT, WEAK_IN_PROGRAM, NONGROUND_OBSERVATION,
// ARITY_CLASH or INTEGER_OVERFLOW.
PAP validate_pap(PAP candidate);

struct Solution {
  std::vector<Atom> hypotheses;  // the set S, sorted
  long long cost = 0;            // sum of penalties over S
  Interpretation witness;        // stable model of P + facts(S) meeting O

  auto operator<=>(const Solution&) const = default;
};

// The weak-constraint program whose best models correspond to optimal
// solutions: the original program plus, per hypothesis h_i, a derivation
// rule from the fresh selector _sol(i), the two-rule choice between _sol(i)
// and _nsol(i), and a weak constraint charging gamma(h_i) when h_i holds;
// observations become strong constraints.
struct TranslatedProgram {
  Program program;
  std::vector<Atom> hypothesis_index;  // position i holds h_{i+1}
};

// Raises FRESH_PREDICATE_COLLISION when the instance already uses the
// selector predicates.
TranslatedProgram translate_pap(const PAP& pap);

// S = hypotheses true in m; witness drops the selector atoms.
Solution extract_solution(const PAP& pap, const Interpretation& m);

// Witness stable model of P + facts(s) satisfying every observation, or
// nullopt. Stratified programs are evaluated directly, without search.
std::optional<Interpretation> is_admissible(const PAP& pap,
                                            const std::vector<Atom>& s);

// Every admissible subset of H, each with cost and witness, no duplicates,
// in a deterministic order. `limit` caps the number of solutions.
std::vector<Solution> enumerate_admissible(
    const PAP& pap, std::optional<std::size_t> limit = std::nullopt);

struct SolveOptions {
  bool trace = false;  // report strictly improving incumbents
  bool all = false;    // return every optimal solution, not just the first
};

// Minimum-penalty solutions via the translation; deterministic order
// (lexicographic on the hypothesis sets). Raises INCONSISTENT when no
// admissible solution exists.
std::vector<Solution> solve_optimal(
    const PAP& pap, const SolveOptions& options = {},
    const std::function<void(const Solution&)>& on_improved = {});

// Optimal cost by binary search over [0, sum of all penalties], probing
// "is there an admissible solution of cost <= mid". Raises INCONSISTENT.
long long optimal_cost(const PAP& pap);

// Relevance/necessity answers are three-valued: with no admissible solution
// at all there is no optimal solution to quantify over.
enum class QueryResult { yes, no, inconsistent };

// h belongs to some / every optimal solution. Raises H_MEMBERSHIP when h is
// not a hypothesis.
QueryResult is_relevant(const PAP& pap, const Atom& h);
QueryResult is_necessary(const PAP& pap, const Atom& h);

// Some admissible solution exists.
bool is_consistent(const PAP& pap);

// s is admissible and no admissible solution costs strictly less.
bool is_optimal(const PAP& pap, const std::vector<Atom>& s);

// Alternative optimum computation for cross-validation: after fixing the
// optimal cost, scan hypotheses in declaration order, keeping h_i whenever
// some admissible solution of optimal cost extends the kept set with h_i
// while avoiding everything already rejected. Raises INCONSISTENT.
Solution solve_optimal_greedy(const PAP& pap);

// Independent reference implementations over subset enumeration (stratified
// instances are evaluated stratum by stratum instead). Guards: at most 16
// hypotheses, and for unstratified programs at most 20 ground atoms; beyond
// them TOO_LARGE is raised.
std::vector<Solution> brute_force_opt(const PAP& pap);
std::vector<Solution> brute_force_admissible(const PAP& pap);

// The grounding bound in effect for this instance.
long long effective_int_bound(const PAP& pap);

// Sum of penalties over s (members of H only; raises H_MEMBERSHIP).
long long sum_penalties(const PAP& pap, const std::vector<Atom>& s);

}  // namespace pap

#endif
