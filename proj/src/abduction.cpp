#include "pap/abduction.h"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>

#include "pap/error.h"
#include "pap/grounder.h"
#include "pap/stable.h"
#include "pap/weak.h"
#include "scc.h"
#include "search.h"

namespace pap {
namespace {

constexpr const char* kSol = "_sol";
constexpr const char* kNsol = "_nsol";

long long narrow(__int128 v, const char* what) {
  if (v > std::numeric_limits<long long>::max())
    throw Error(Errc::integer_overflow, std::string(what) + " exceeds integer range");
  return static_cast<long long>(v);
}

// Is hyp a ground instance of the head pattern?
bool head_matches(const Atom& head, const Atom& hyp) {
  if (head.predicate != hyp.predicate || head.arity() != hyp.arity())
    return false;
  std::map<std::string, Term> binding;
  for (std::size_t k = 0; k < head.args.size(); ++k) {
    const Term& t = head.args[k];
    if (t.kind == TermKind::variable) {
      auto [it, fresh] = binding.emplace(t.name, hyp.args[k]);
      if (!fresh && it->second != hyp.args[k]) return false;
    } else if (t != hyp.args[k]) {
      return false;
    }
  }
  return true;
}

Rule fact_rule(const Atom& a) {
  Rule r;
  r.head = a;
  return r;
}

Rule observation_constraint(const Literal& o) {
  // a positive observation demands a to be true, so forbid "not a";
  // a negative observation forbids a
  Rule r;
  r.body.push_back({o.atom, !o.positive});
  return r;
}

// P + facts(s) + one strong constraint per observation.
Program admissibility_program(const PAP& pap, const std::vector<Atom>& s) {
  Program q = pap.program;
  for (const Atom& a : s) q.rules.push_back(fact_rule(a));
  for (const Literal& o : pap.observations)
    q.rules.push_back(observation_constraint(o));
  return q;
}

bool satisfies_constraints(const GroundProgram& g, const std::vector<bool>& in) {
  for (const GroundRule& c : g.constraints) {
    bool violated = true;
    for (int a : c.pos)
      if (!in[a]) {
        violated = false;
        break;
      }
    if (violated)
      for (int a : c.neg)
        if (in[a]) {
          violated = false;
          break;
        }
    if (violated) return false;
  }
  return true;
}

// Unique stable model of the rules of a ground program whose source is
// stratified: predicates are grouped into dependency components, and each
// component is closed under its rules with the negative literals already
// final. Constraints are the caller's business.
std::vector<bool> stratified_model(const Program& source, const GroundProgram& g) {
  std::map<std::string, int> pid;
  auto intern = [&](const std::string& p) {
    return pid.emplace(p, static_cast<int>(pid.size())).first->second;
  };
  std::vector<std::pair<int, int>> edges;
  for (const Rule& r : source.rules) {
    if (!r.head) continue;
    int h = intern(r.head->predicate);
    for (const Literal& l : r.body) {
      if (l.atom.is_builtin()) continue;
      edges.emplace_back(h, intern(l.atom.predicate));
    }
  }
  std::vector<std::vector<int>> adj(pid.size());
  for (auto [h, b] : edges) adj[h].push_back(b);
  auto [ncomp, comp] = detail::scc_components(adj);

  auto stratum_of = [&](int atom_id) {
    auto it = pid.find(g.atom_of(atom_id).predicate);
    return it == pid.end() ? 0 : comp[it->second];
  };

  std::vector<std::vector<int>> by_stratum(std::max(ncomp, 1));
  for (std::size_t r = 0; r < g.rules.size(); ++r)
    by_stratum[stratum_of(g.rules[r].head)].push_back(static_cast<int>(r));

  std::vector<bool> t(g.size(), false);
  std::vector<int> need(g.rules.size(), 0);
  for (const std::vector<int>& stratum_rules : by_stratum) {
    std::vector<std::vector<int>> occ(g.size());
    std::vector<int> work;
    auto push = [&](int a) {
      if (!t[a]) {
        t[a] = true;
        work.push_back(a);
      }
    };
    for (int r : stratum_rules) {
      const GroundRule& rule = g.rules[r];
      bool blocked = false;
      for (int a : rule.neg)
        if (t[a]) {  // final: negatives live in strictly earlier strata
          blocked = true;
          break;
        }
      if (blocked) continue;
      need[r] = 0;
      for (int a : rule.pos)
        if (!t[a]) {
          need[r]++;
          occ[a].push_back(r);
        }
      if (need[r] == 0) push(rule.head);
    }
    for (std::size_t i = 0; i < work.size(); ++i)
      for (int r : occ[work[i]])
        if (--need[r] == 0) push(g.rules[r].head);
  }
  return t;
}

GroundProgram ground_admissibility(const PAP& pap, const std::vector<Atom>& s) {
  return ground(admissibility_program(pap, s), {}, effective_int_bound(pap));
}

// Translation plus optional forced hypotheses (as facts) and forbidden ones
// (as constraints), grounded. The membership probes of the relevance,
// necessity and greedy procedures are all instances of this shape.
GroundProgram ground_translation(const PAP& pap, const std::vector<Atom>& forced,
                                 const std::vector<Atom>& forbidden) {
  TranslatedProgram t = translate_pap(pap);
  for (const Atom& a : forced) t.program.rules.push_back(fact_rule(a));
  for (const Atom& a : forbidden) {
    Rule r;
    r.body.push_back({a, true});
    t.program.rules.push_back(r);
  }
  return ground(t.program, {}, effective_int_bound(pap));
}

void check_membership(const PAP& pap, const Atom& h) {
  if (std::find(pap.hypotheses.begin(), pap.hypotheses.end(), h) ==
      pap.hypotheses.end())
    throw Error(Errc::h_membership, to_string(h) + " is not a hypothesis");
}

std::vector<Atom> sorted_unique(std::vector<Atom> s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

Solution make_solution(const PAP& pap, std::vector<Atom> s, Interpretation witness) {
  Solution out;
  out.hypotheses = sorted_unique(std::move(s));
  out.cost = sum_penalties(pap, out.hypotheses);
  out.witness = std::move(witness);
  return out;
}

}  // namespace

PAP make_pap(Program program, std::vector<HypothesisDecl> hypotheses,
             std::vector<Literal> observations,
             std::optional<long long> integer_bound) {
  PAP pap;
  pap.program = std::move(program);
  for (HypothesisDecl& d : hypotheses) {
    pap.hypotheses.push_back(d.atom);
    pap.penalty.emplace(std::move(d.atom), d.penalty);
  }
  pap.observations = std::move(observations);
  pap.integer_bound = integer_bound;
  return validate_pap(std::move(pap));
}

PAP validate_pap(PAP pap) {
  if (!pap.program.weak_constraints.empty())
    throw Error(Errc::weak_in_program,
                "the program of an abduction problem must not contain weak constraints");

  std::set<Atom> seen;
  __int128 total = 0;
  for (const Atom& h : pap.hypotheses) {
    if (h.is_builtin())
      throw Error(Errc::input_error, "builtin " + to_string(h) + " cannot be a hypothesis");
    if (!h.is_ground())
      throw Error(Errc::nonground_hypothesis, "hypothesis " + to_string(h));
    if (!seen.insert(h).second)
      throw Error(Errc::duplicate_hypothesis, "hypothesis " + to_string(h));
    auto it = pap.penalty.find(h);
    if (it == pap.penalty.end())
      throw Error(Errc::missing_penalty, "no penalty for " + to_string(h));
    if (it->second < 0)
      throw Error(Errc::negative_weight, "penalty of " + to_string(h));
    total += it->second;
  }
  narrow(total, "total penalty");

  for (const Rule& r : pap.program.rules) {
    if (!r.head) continue;
    for (const Atom& h : pap.hypotheses)
      if (head_matches(*r.head, h))
        throw Error(Errc::hypothesis_in_head,
                    to_string(h) + " can be derived by " + to_string(r));
  }

  for (const Literal& o : pap.observations) {
    if (o.atom.is_builtin())
      throw Error(Errc::input_error, "builtin " + to_string(o.atom) + " cannot be observed");
    if (!o.atom.is_ground())
      throw Error(Errc::nonground_observation, "observation " + to_string(o.atom));
  }

  // arity discipline across program, hypotheses and observations
  std::map<std::string, std::size_t> arity;
  auto check = [&](const Atom& a) {
    if (a.is_builtin()) return;
    auto [it, fresh] = arity.emplace(a.predicate, a.arity());
    if (!fresh && it->second != a.arity())
      throw Error(Errc::arity_clash,
                  a.predicate + "/" + std::to_string(a.arity()) +
                      " previously used with arity " + std::to_string(it->second));
  };
  for (const Rule& r : pap.program.rules) {
    if (r.head) check(*r.head);
    for (const Literal& l : r.body) check(l.atom);
  }
  for (const Atom& h : pap.hypotheses) check(h);
  for (const Literal& o : pap.observations) check(o.atom);

  return pap;
}

TranslatedProgram translate_pap(const PAP& pap0) {
  PAP pap = validate_pap(pap0);

  auto fresh = [](const Atom& a) {
    return a.predicate == kSol || a.predicate == kNsol;
  };
  for (const Rule& r : pap.program.rules) {
    if (r.head && fresh(*r.head))
      throw Error(Errc::fresh_predicate_collision, to_string(*r.head));
    for (const Literal& l : r.body)
      if (fresh(l.atom)) throw Error(Errc::fresh_predicate_collision, to_string(l.atom));
  }
  for (const Atom& h : pap.hypotheses)
    if (fresh(h)) throw Error(Errc::fresh_predicate_collision, to_string(h));
  for (const Literal& o : pap.observations)
    if (fresh(o.atom)) throw Error(Errc::fresh_predicate_collision, to_string(o.atom));

  TranslatedProgram t;
  t.program = std::move(pap.program);
  for (std::size_t i = 0; i < pap.hypotheses.size(); ++i) {
    const Atom& h = pap.hypotheses[i];
    Atom sol{kSol, {Term::integer(static_cast<long long>(i) + 1)}};
    Atom nsol{kNsol, {Term::integer(static_cast<long long>(i) + 1)}};

    Rule derive;
    derive.head = h;
    derive.body.push_back({sol, true});
    t.program.rules.push_back(std::move(derive));

    Rule pick;
    pick.head = sol;
    pick.body.push_back({nsol, false});
    t.program.rules.push_back(std::move(pick));

    Rule drop;
    drop.head = nsol;
    drop.body.push_back({sol, false});
    t.program.rules.push_back(std::move(drop));

    WeakConstraint w;
    w.body.push_back({h, true});
    w.weight = pap.penalty.at(h);
    t.program.weak_constraints.push_back(std::move(w));

    t.hypothesis_index.push_back(h);
  }
  for (const Literal& o : pap.observations)
    t.program.rules.push_back(observation_constraint(o));
  return t;
}

Solution extract_solution(const PAP& pap, const Interpretation& m) {
  std::vector<Atom> s;
  for (const Atom& h : pap.hypotheses)
    if (m.contains(h)) s.push_back(h);

  Interpretation witness;
  for (const Atom& a : m.atoms)
    if (a.predicate != kSol && a.predicate != kNsol) witness.insert(a);
  return make_solution(pap, std::move(s), std::move(witness));
}

std::optional<Interpretation> is_admissible(const PAP& pap,
                                            const std::vector<Atom>& s) {
  for (const Atom& h : s) check_membership(pap, h);
  std::vector<Atom> subset = sorted_unique(s);

  Program q = admissibility_program(pap, subset);
  GroundProgram g = ground(q, {}, effective_int_bound(pap));
  if (is_stratified(q)) {
    std::vector<bool> m = stratified_model(q, g);
    if (!satisfies_constraints(g, m)) return std::nullopt;
    return g.decode(m);
  }
  std::optional<CandidateModel> c = find_candidate(g);
  if (!c) return std::nullopt;
  return std::move(c->interpretation);
}

std::vector<Solution> enumerate_admissible(const PAP& pap,
                                           std::optional<std::size_t> limit) {
  GroundProgram g = ground_translation(pap, {}, {});
  std::set<std::vector<Atom>> seen;
  std::vector<Solution> out;
  enumerate_stable_models(g, std::nullopt, [&](const Interpretation& m) {
    Solution sol = extract_solution(pap, m);
    if (seen.insert(sol.hypotheses).second) {
      out.push_back(std::move(sol));
      if (limit && out.size() >= *limit) return false;
    }
    return true;
  });
  return out;
}

std::vector<Solution> solve_optimal(
    const PAP& pap, const SolveOptions& options,
    const std::function<void(const Solution&)>& on_improved) {
  GroundProgram g = ground_translation(pap, {}, {});

  BestModelsOptions bo;
  bo.trace = options.trace;
  std::function<void(const CandidateModel&)> cb;
  if (options.trace && on_improved)
    cb = [&](const CandidateModel& cm) {
      Solution sol = extract_solution(pap, cm.interpretation);
      if (sol.cost != cm.cost)
        throw std::logic_error("penalty sum deviates from objective value");
      on_improved(sol);
    };

  std::vector<CandidateModel> models;
  try {
    models = best_models(g, bo, cb);
  } catch (const Error& e) {
    if (e.code() == Errc::no_candidate_model)
      throw Error(Errc::inconsistent, "no admissible solution exists");
    throw;
  }

  std::vector<Solution> out;
  std::set<std::vector<Atom>> seen;
  for (const CandidateModel& cm : models) {
    Solution sol = extract_solution(pap, cm.interpretation);
    if (sol.cost != cm.cost)
      throw std::logic_error("penalty sum deviates from objective value");
    if (seen.insert(sol.hypotheses).second) out.push_back(std::move(sol));
  }
  std::sort(out.begin(), out.end(), [](const Solution& a, const Solution& b) {
    return a.hypotheses < b.hypotheses;
  });
  if (!options.all) out.resize(1);
  return out;
}

long long optimal_cost(const PAP& pap) {
  PAP valid = validate_pap(pap);
  __int128 total = 0;
  for (const Atom& h : valid.hypotheses) total += valid.penalty.at(h);
  long long hi = narrow(total, "total penalty");

  GroundProgram g = ground_translation(valid, {}, {});
  if (!find_candidate(g, hi))
    throw Error(Errc::inconsistent, "no admissible solution exists");

  long long lo = 0;
  while (lo < hi) {
    long long mid = lo + (hi - lo) / 2;
    if (find_candidate(g, mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

QueryResult is_relevant(const PAP& pap, const Atom& h) {
  check_membership(pap, h);
  long long c;
  try {
    c = optimal_cost(pap);
  } catch (const Error& e) {
    if (e.code() == Errc::inconsistent) return QueryResult::inconsistent;
    throw;
  }
  GroundProgram g = ground_translation(pap, {h}, {});
  return find_candidate(g, c) ? QueryResult::yes : QueryResult::no;
}

QueryResult is_necessary(const PAP& pap, const Atom& h) {
  check_membership(pap, h);
  long long c;
  try {
    c = optimal_cost(pap);
  } catch (const Error& e) {
    if (e.code() == Errc::inconsistent) return QueryResult::inconsistent;
    throw;
  }
  GroundProgram g = ground_translation(pap, {}, {h});
  return find_candidate(g, c) ? QueryResult::no : QueryResult::yes;
}

bool is_consistent(const PAP& pap) {
  GroundProgram g = ground_translation(pap, {}, {});
  return find_candidate(g).has_value();
}

bool is_optimal(const PAP& pap, const std::vector<Atom>& s) {
  std::optional<Interpretation> w = is_admissible(pap, s);
  if (!w) return false;
  long long cost = sum_penalties(pap, s);
  if (cost == 0) return true;
  GroundProgram g = ground_translation(pap, {}, {});
  return !find_candidate(g, cost - 1);
}

Solution solve_optimal_greedy(const PAP& pap) {
  long long c = optimal_cost(pap);

  std::vector<Atom> kept, rejected;
  for (const Atom& h : pap.hypotheses) {
    std::vector<Atom> tentative = kept;
    tentative.push_back(h);
    GroundProgram g = ground_translation(pap, tentative, rejected);
    if (find_candidate(g, c))
      kept = std::move(tentative);
    else
      rejected.push_back(h);
  }

  GroundProgram g = ground_translation(pap, kept, rejected);
  std::optional<CandidateModel> cm = find_candidate(g, c);
  if (!cm) throw std::logic_error("greedy scan lost every optimal solution");
  Solution sol = extract_solution(pap, cm->interpretation);
  if (sol.cost != c) throw std::logic_error("greedy solution misses the optimal cost");
  return sol;
}

std::vector<Solution> brute_force_admissible(const PAP& pap0) {
  PAP pap = validate_pap(pap0);
  std::size_t n = pap.hypotheses.size();
  if (n > 16)
    throw Error(Errc::too_large, "brute force caps at 16 hypotheses, got " +
                                     std::to_string(n));
  bool stratified = is_stratified(pap.program);

  std::vector<Solution> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<Atom> s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) s.push_back(pap.hypotheses[i]);

    Program q = admissibility_program(pap, s);
    GroundProgram g = ground(q, {}, effective_int_bound(pap));

    std::optional<Interpretation> witness;
    if (stratified) {
      std::vector<bool> m = stratified_model(q, g);
      if (satisfies_constraints(g, m)) witness = g.decode(m);
    } else {
      if (g.size() > 20)
        throw Error(Errc::too_large,
                    "brute force caps at 20 ground atoms, got " +
                        std::to_string(g.size()));
      std::uint32_t limit = 1u << g.size();
      for (std::uint32_t bits = 0; bits < limit; ++bits) {
        std::vector<bool> in(g.size());
        for (std::size_t a = 0; a < g.size(); ++a) in[a] = bits & (1u << a);
        if (!satisfies_constraints(g, in)) continue;
        if (detail::least_model_of_reduct(g, in) != in) continue;
        witness = g.decode(in);
        break;
      }
    }
    if (witness) out.push_back(make_solution(pap, std::move(s), std::move(*witness)));
  }
  std::sort(out.begin(), out.end(), [](const Solution& a, const Solution& b) {
    return std::tie(a.cost, a.hypotheses) < std::tie(b.cost, b.hypotheses);
  });
  return out;
}

std::vector<Solution> brute_force_opt(const PAP& pap) {
  std::vector<Solution> all = brute_force_admissible(pap);
  if (all.empty()) return {};
  long long best = all.front().cost;
  std::vector<Solution> out;
  for (Solution& s : all)
    if (s.cost == best) out.push_back(std::move(s));
  return out;
}

long long effective_int_bound(const PAP& pap) {
  if (pap.integer_bound) return *pap.integer_bound;
  return default_int_bound(admissibility_program(pap, pap.hypotheses),
                           pap.hypotheses.size());
}

long long sum_penalties(const PAP& pap, const std::vector<Atom>& s) {
  __int128 total = 0;
  for (const Atom& h : sorted_unique(s)) {
    check_membership(pap, h);
    total += pap.penalty.at(h);
  }
  return narrow(total, "penalty sum");
}

}  // namespace pap
