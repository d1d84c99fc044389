#include "pap/stable.h"

#include <map>
#include <string>
#include <utility>

#include "scc.h"
#include "search.h"

namespace pap {

Reduct reduct(const GroundProgram& p, const Interpretation& i) {
  Reduct out;
  for (const GroundRule& r : p.rules) {
    bool kept = true;
    for (int a : r.neg)
      if (i.contains(p.atom_of(a))) {
        kept = false;
        break;
      }
    if (!kept) continue;
    Rule rule;
    rule.head = p.atom_of(r.head);
    for (int a : r.pos) rule.body.push_back({p.atom_of(a), true});
    out.rules.push_back(std::move(rule));
  }
  return out;
}

Interpretation least_model(const Reduct& r) {
  // Dowling-Gallier style counting over a local atom index.
  std::map<Atom, int> ids;
  std::vector<const Atom*> atoms;
  auto intern = [&](const Atom& a) {
    auto [it, fresh] = ids.emplace(a, static_cast<int>(atoms.size()));
    if (fresh) atoms.push_back(&it->first);
    return it->second;
  };
  std::vector<std::pair<int, std::vector<int>>> rules;  // head, positive body
  for (const Rule& rule : r.rules) {
    std::pair<int, std::vector<int>> entry{intern(*rule.head), {}};
    for (const Literal& l : rule.body) entry.second.push_back(intern(l.atom));
    rules.push_back(std::move(entry));
  }

  std::vector<std::vector<int>> occ(atoms.size());
  std::vector<int> cnt(rules.size());
  std::vector<char> in(atoms.size(), 0);
  std::vector<int> work;
  auto push = [&](int a) {
    if (!in[a]) {
      in[a] = 1;
      work.push_back(a);
    }
  };
  for (std::size_t ri = 0; ri < rules.size(); ++ri) {
    cnt[ri] = static_cast<int>(rules[ri].second.size());
    if (cnt[ri] == 0)
      push(rules[ri].first);
    else
      for (int a : rules[ri].second) occ[a].push_back(static_cast<int>(ri));
  }
  for (std::size_t i = 0; i < work.size(); ++i)
    for (int ri : occ[work[i]])
      if (cnt[ri] > 0 && --cnt[ri] == 0) push(rules[ri].first);

  Interpretation out;
  for (std::size_t a = 0; a < atoms.size(); ++a)
    if (in[a]) out.insert(*atoms[a]);
  return out;
}

bool is_stable(const GroundProgram& p, const Interpretation& i) {
  std::size_t outside = 0;
  std::vector<bool> in = p.encode(i, &outside);
  if (outside > 0) return false;
  for (const GroundRule& c : p.constraints) {
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
  return detail::least_model_of_reduct(p, in) == in;
}

bool is_stratified(const Program& p) {
  // Predicate-level dependency graph; a component with an internal negative
  // edge witnesses unstratified negation.
  std::map<std::string, int> ids;
  auto intern = [&](const std::string& s) {
    return ids.emplace(s, static_cast<int>(ids.size())).first->second;
  };
  std::vector<std::pair<int, int>> pos_edges, neg_edges;
  for (const Rule& r : p.rules) {
    if (!r.head) continue;
    int h = intern(r.head->predicate);
    for (const Literal& l : r.body) {
      if (l.atom.is_builtin()) continue;
      int b = intern(l.atom.predicate);
      (l.positive ? pos_edges : neg_edges).emplace_back(h, b);
    }
  }

  int n = static_cast<int>(ids.size());
  std::vector<std::vector<int>> adj(n);
  for (auto [h, b] : pos_edges) adj[h].push_back(b);
  for (auto [h, b] : neg_edges) adj[h].push_back(b);

  auto [ncomp, comp] = detail::scc_components(adj);
  (void)ncomp;
  for (auto [h, b] : neg_edges)
    if (comp[h] == comp[b]) return false;
  return true;
}

std::vector<Interpretation> enumerate_stable_models(
    const GroundProgram& p, std::optional<std::size_t> limit,
    const std::function<bool(const Interpretation&)>& on_model) {
  detail::SearchOptions opt;
  opt.limit = limit;
  if (on_model)
    opt.on_model = [&](const std::vector<bool>& m) { return on_model(p.decode(m)); };
  detail::SearchResult res = detail::search_stable(p, opt);
  std::vector<Interpretation> out;
  out.reserve(res.models.size());
  for (const auto& [bits, cost] : res.models) out.push_back(p.decode(bits));
  return out;
}

}  // namespace pap
