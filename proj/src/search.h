// search.h -- internal branch-and-bound search for stable models.
// Not installed; stable.cpp and weak.cpp are the only intended users.
#ifndef PAP_SEARCH_H
#define PAP_SEARCH_H

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "pap/grounder.h"

namespace pap::detail {

struct SearchOptions {
  // When set, weak-constraint costs are tracked and the search keeps the
  // minimum-cost models, pruning any branch whose already-violated weight
  // exceeds the current bound. Otherwise every stable model is kept.
  bool optimize = false;
  std::optional<long long> upper_bound;   // keep only models with cost <= bound
  bool first_hit = false;                 // stop at the first kept model
  std::optional<std::size_t> limit;       // cap on kept models (enumeration)
  // Strictly improving incumbents, in discovery order (optimize mode).
  std::function<void(const std::vector<bool>&, long long)> on_improve;
  // Every kept model as it is found (enumeration mode); return false to stop.
  std::function<bool(const std::vector<bool>&)> on_model;
};

struct SearchResult {
  // Enumeration: all stable models satisfying the strong constraints, in
  // discovery order. Optimize: the minimum-cost ones among those, each with
  // its objective value.
  std::vector<std::pair<std::vector<bool>, long long>> models;
  bool stopped_early = false;
};

SearchResult search_stable(const GroundProgram& g, const SearchOptions& opt);

// I = lm(g^I) over membership vectors; strong constraints are not consulted.
std::vector<bool> least_model_of_reduct(const GroundProgram& g, const std::vector<bool>& in);

}  // namespace pap::detail

#endif
