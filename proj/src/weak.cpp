#include "pap/weak.h"

#include <algorithm>
#include <limits>

#include "pap/error.h"
#include "search.h"

namespace pap {
namespace {

long long narrow(__int128 v) {
  if (v > std::numeric_limits<long long>::max())
    throw Error(Errc::integer_overflow, "objective value exceeds integer range");
  return static_cast<long long>(v);
}

// Guard for the engine, whose running lower bound is a plain long long.
void check_total_weight(const GroundProgram& p) {
  __int128 total = 0;
  for (const GroundWeak& w : p.weak) total += w.weight;
  narrow(total);
}

// "Smaller" model = lexicographically smaller sorted sequence of interned
// atom ids, i.e. the first differing atom id is present in it.
bool id_set_less(const std::vector<bool>& a, const std::vector<bool>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i];
  return false;
}

}  // namespace

long long objective(const GroundProgram& p, const Interpretation& m) {
  std::vector<bool> in = p.encode(m);
  __int128 total = 0;
  for (const GroundWeak& w : p.weak) {
    bool violated = true;
    for (int a : w.pos)
      if (!in[a]) {
        violated = false;
        break;
      }
    if (violated)
      for (int a : w.neg)
        if (in[a]) {
          violated = false;
          break;
        }
    if (violated) total += w.weight;
  }
  return narrow(total);
}

std::vector<CandidateModel> best_models(
    const GroundProgram& p, const BestModelsOptions& options,
    const std::function<void(const CandidateModel&)>& on_improved) {
  check_total_weight(p);

  detail::SearchOptions opt;
  opt.optimize = true;
  opt.upper_bound = options.upper_bound;
  if (options.trace && on_improved)
    opt.on_improve = [&](const std::vector<bool>& m, long long cost) {
      on_improved({p.decode(m), cost});
    };
  detail::SearchResult res = detail::search_stable(p, opt);
  if (res.models.empty())
    throw Error(Errc::no_candidate_model,
                options.upper_bound
                    ? "no candidate model within the cost bound"
                    : "program has no candidate model");

  std::sort(res.models.begin(), res.models.end(),
            [](const auto& a, const auto& b) { return id_set_less(a.first, b.first); });
  if (options.limit && res.models.size() > *options.limit)
    res.models.resize(*options.limit);

  std::vector<CandidateModel> out;
  out.reserve(res.models.size());
  for (const auto& [bits, cost] : res.models) out.push_back({p.decode(bits), cost});
  return out;
}

std::optional<CandidateModel> find_candidate(const GroundProgram& p,
                                             std::optional<long long> upper_bound) {
  check_total_weight(p);

  detail::SearchOptions opt;
  opt.optimize = true;
  opt.upper_bound = upper_bound;
  opt.first_hit = true;
  detail::SearchResult res = detail::search_stable(p, opt);
  if (res.models.empty()) return std::nullopt;
  return CandidateModel{p.decode(res.models.front().first), res.models.front().second};
}

}  // namespace pap
