#include "search.h"

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <limits>

#include "pap/error.h"
#include "scc.h"

namespace pap::detail {
namespace {

enum class Val : std::uint8_t { undef, tru, fls };

// One body occurrence of an atom, positive or negative, in a rule, strong
// constraint, or weak constraint. "sat" counts occurrences whose literal is
// already true, "dead" those already false; a body is fired when every
// occurrence is satisfied and dead while it still has a dead occurrence.
struct Body {
  std::vector<int> pos;
  std::vector<int> neg;
  int head = -1;        // atom id, or -1 for (weak) constraints
  long long weight = 0; // weak constraints only
};

struct Occ {
  int body;  // index into the per-kind body array
};

constexpr long long kInf = std::numeric_limits<long long>::max();

class Engine {
 public:
  Engine(const GroundProgram& g, const SearchOptions& opt) : g_(g), opt_(opt) {
    n_ = static_cast<int>(g.size());
    val_.assign(n_, Val::undef);
    supp_.assign(n_, 0);
    build();
  }

  SearchResult run();

 private:
  struct Frame {
    int atom;
    bool flipped;      // second value already tried
    std::size_t mark;  // trail size at decision time
    int scan;          // decision-order index to resume scanning from
    int scan0;         // value scan must return to when this decision flips
  };

  void build();
  void find_choice_atoms();
  bool has_positive_cycle();

  bool assign(int a, Val v);
  bool propagate();
  bool enqueue(int a, Val v);
  void undo_to(std::size_t mark);
  void undo_one(int a);

  bool rule_fired(int r) const {
    return rule_dead_[r] == 0 && rule_undec_[r] == 0;
  }
  bool force_last_rule_literal(int r);
  bool force_last_con_literal(int c);
  bool force_body_true(int r);
  bool unfounded_check();

  bool at_leaf() const { return trail_.size() == static_cast<std::size_t>(n_); }
  bool leaf_is_stable() const;
  // Returns false when the whole search should stop.
  bool handle_model();

  long long prune_bound() const {
    long long b = opt_.upper_bound.value_or(kInf);
    if (opt_.optimize && incumbent_ < b) b = incumbent_;
    return b;
  }

  const GroundProgram& g_;
  const SearchOptions& opt_;
  int n_ = 0;

  std::vector<Body> rules_, cons_, weaks_;
  // occurrence lists, one entry per body occurrence
  std::vector<std::vector<Occ>> rp_, rn_, cp_, cn_, wp_, wn_;
  std::vector<std::vector<int>> head_rules_;

  std::vector<Val> val_;
  std::vector<int> rule_undec_, rule_dead_;
  std::vector<int> con_undec_, con_dead_;
  std::vector<int> weak_undec_, weak_dead_;
  std::vector<int> supp_;
  long long lb_ = 0;  // weight of weak constraints with fully true bodies

  std::vector<int> trail_;
  std::vector<std::pair<int, Val>> queue_;
  std::vector<Frame> decisions_;

  std::vector<int> decision_order_;
  bool any_pos_cycle_ = false;

  long long incumbent_ = kInf;
  SearchResult result_;

  // scratch for unfounded checks and leaf verification
  mutable std::vector<int> cnt_;
  mutable std::vector<char> in_set_;
  mutable std::vector<int> work_;
};

void Engine::build() {
  rp_.assign(n_, {});
  rn_.assign(n_, {});
  cp_.assign(n_, {});
  cn_.assign(n_, {});
  wp_.assign(n_, {});
  wn_.assign(n_, {});
  head_rules_.assign(n_, {});

  auto add = [](std::vector<Body>& out, std::vector<std::vector<Occ>>& po,
                std::vector<std::vector<Occ>>& no, const std::vector<int>& pos,
                const std::vector<int>& neg, int head, long long w) {
    int idx = static_cast<int>(out.size());
    out.push_back({pos, neg, head, w});
    for (int a : pos) po[a].push_back({idx});
    for (int a : neg) no[a].push_back({idx});
    return idx;
  };

  for (const GroundRule& r : g_.rules) {
    int idx = add(rules_, rp_, rn_, r.pos, r.neg, r.head, 0);
    head_rules_[r.head].push_back(idx);
  }
  for (const GroundRule& c : g_.constraints)
    add(cons_, cp_, cn_, c.pos, c.neg, -1, 0);
  for (const GroundWeak& w : g_.weak)
    add(weaks_, wp_, wn_, w.pos, w.neg, -1, w.weight);

  rule_undec_.resize(rules_.size());
  rule_dead_.assign(rules_.size(), 0);
  for (std::size_t r = 0; r < rules_.size(); ++r) {
    rule_undec_[r] = static_cast<int>(rules_[r].pos.size() + rules_[r].neg.size());
    supp_[rules_[r].head]++;
  }
  con_undec_.resize(cons_.size());
  con_dead_.assign(cons_.size(), 0);
  for (std::size_t c = 0; c < cons_.size(); ++c)
    con_undec_[c] = static_cast<int>(cons_[c].pos.size() + cons_[c].neg.size());
  weak_undec_.resize(weaks_.size());
  weak_dead_.assign(weaks_.size(), 0);
  for (std::size_t w = 0; w < weaks_.size(); ++w)
    weak_undec_[w] = static_cast<int>(weaks_[w].pos.size() + weaks_[w].neg.size());

  find_choice_atoms();
  any_pos_cycle_ = has_positive_cycle();

  cnt_.resize(rules_.size());
  in_set_.resize(n_);
}

// Atoms whose strongly connected component of the full dependency graph
// contains an edge derived from a negative body literal. Branching is
// restricted to these plus, as a fallback, everything else in id order.
void Engine::find_choice_atoms() {
  std::vector<std::vector<int>> adj(n_);
  std::vector<std::pair<int, int>> neg_edges;
  for (const Body& r : rules_) {
    for (int a : r.pos) adj[r.head].push_back(a);
    for (int a : r.neg) {
      adj[r.head].push_back(a);
      neg_edges.emplace_back(r.head, a);
    }
  }

  auto [ncomp, comp] = scc_components(adj);
  std::vector<char> choice_comp(ncomp, 0);
  for (auto [from, to] : neg_edges)
    if (comp[from] == comp[to]) choice_comp[comp[from]] = 1;

  decision_order_.reserve(n_);
  for (int a = 0; a < n_; ++a)
    if (choice_comp[comp[a]]) decision_order_.push_back(a);
  for (int a = 0; a < n_; ++a)
    if (!choice_comp[comp[a]]) decision_order_.push_back(a);
}

bool Engine::has_positive_cycle() {
  // DFS over positive edges only, three-colour cycle detection.
  std::vector<std::vector<int>> adj(n_);
  for (const Body& r : rules_)
    for (int a : r.pos) adj[r.head].push_back(a);
  std::vector<char> colour(n_, 0);
  std::vector<std::pair<int, std::size_t>> stack;
  for (int root = 0; root < n_; ++root) {
    if (colour[root]) continue;
    stack.push_back({root, 0});
    colour[root] = 1;
    while (!stack.empty()) {
      auto& [v, i] = stack.back();
      if (i < adj[v].size()) {
        int w = adj[v][i++];
        if (colour[w] == 1) return true;
        if (colour[w] == 0) {
          colour[w] = 1;
          stack.push_back({w, 0});
        }
      } else {
        colour[v] = 2;
        stack.pop_back();
      }
    }
  }
  return false;
}

bool Engine::enqueue(int a, Val v) {
  if (val_[a] == v) return true;
  if (val_[a] != Val::undef) return false;  // conflict
  queue_.emplace_back(a, v);
  return true;
}

// Head atom is true and exactly one of its rules is alive: the body of that
// rule must become fully true, otherwise the atom would end up unsupported.
bool Engine::force_body_true(int a) {
  int alive = -1;
  for (int r : head_rules_[a]) {
    if (rule_dead_[r] == 0) {
      alive = r;
      break;
    }
  }
  assert(alive >= 0);
  for (int b : rules_[alive].pos)
    if (!enqueue(b, Val::tru)) return false;
  for (int b : rules_[alive].neg)
    if (!enqueue(b, Val::fls)) return false;
  return true;
}

// Alive rule with false head and one undecided occurrence left: that literal
// must be falsified to keep the interpretation a model of the rule.
bool Engine::force_last_rule_literal(int r) {
  for (int a : rules_[r].pos)
    if (val_[a] == Val::undef) return enqueue(a, Val::fls);
  for (int a : rules_[r].neg)
    if (val_[a] == Val::undef) return enqueue(a, Val::tru);
  assert(false);
  return true;
}

bool Engine::force_last_con_literal(int c) {
  for (int a : cons_[c].pos)
    if (val_[a] == Val::undef) return enqueue(a, Val::fls);
  for (int a : cons_[c].neg)
    if (val_[a] == Val::undef) return enqueue(a, Val::tru);
  assert(false);
  return true;
}

bool Engine::assign(int a, Val v) {
  assert(val_[a] == Val::undef);
  val_[a] = v;
  trail_.push_back(a);

  // Counters first, so that the head checks at the end see a consistent
  // picture even when a occurs in the body of its own rules.
  const auto& sat_rule = v == Val::tru ? rp_[a] : rn_[a];
  const auto& die_rule = v == Val::tru ? rn_[a] : rp_[a];
  const auto& sat_con = v == Val::tru ? cp_[a] : cn_[a];
  const auto& die_con = v == Val::tru ? cn_[a] : cp_[a];
  const auto& sat_weak = v == Val::tru ? wp_[a] : wn_[a];
  const auto& die_weak = v == Val::tru ? wn_[a] : wp_[a];

  for (Occ o : die_rule) {
    int r = o.body;
    if (rule_dead_[r]++ == 0) {
      int h = rules_[r].head;
      if (--supp_[h] == 0) {
        if (val_[h] == Val::tru) return false;
        if (!enqueue(h, Val::fls)) return false;
      } else if (supp_[h] == 1 && val_[h] == Val::tru) {
        if (!force_body_true(h)) return false;
      }
    }
  }
  for (Occ o : sat_rule) {
    int r = o.body;
    if (--rule_undec_[r] == 0 && rule_dead_[r] == 0) {
      if (!enqueue(rules_[r].head, Val::tru)) return false;
    } else if (rule_undec_[r] == 1 && rule_dead_[r] == 0 &&
               val_[rules_[r].head] == Val::fls) {
      if (!force_last_rule_literal(r)) return false;
    }
  }
  for (Occ o : die_con) con_dead_[o.body]++;
  for (Occ o : sat_con) {
    int c = o.body;
    if (--con_undec_[c] == 0 && con_dead_[c] == 0) return false;
    if (con_undec_[c] == 1 && con_dead_[c] == 0 && !force_last_con_literal(c))
      return false;
  }
  for (Occ o : die_weak) weak_dead_[o.body]++;
  for (Occ o : sat_weak) {
    int w = o.body;
    if (--weak_undec_[w] == 0 && weak_dead_[w] == 0) {
      lb_ += weaks_[w].weight;
      if (opt_.optimize && lb_ > prune_bound()) return false;
    }
  }

  if (v == Val::tru) {
    if (supp_[a] == 0) return false;  // no rule can ever derive it
    if (supp_[a] == 1 && !force_body_true(a)) return false;
  } else {
    for (int r : head_rules_[a]) {
      if (rule_dead_[r] != 0) continue;
      if (rule_undec_[r] == 0) return false;  // true body, false head
      if (rule_undec_[r] == 1 && !force_last_rule_literal(r)) return false;
    }
  }
  return true;
}

bool Engine::propagate() {
  std::size_t qi = 0;
  while (qi < queue_.size()) {
    auto [a, v] = queue_[qi++];
    if (val_[a] == v) continue;
    if (val_[a] != Val::undef || !assign(a, v)) {
      queue_.clear();
      return false;
    }
  }
  queue_.clear();
  return true;
}

void Engine::undo_one(int a) {
  Val v = val_[a];
  val_[a] = Val::undef;
  if (v == Val::tru) {
    for (Occ o : rp_[a]) rule_undec_[o.body]++;
    for (Occ o : rn_[a])
      if (--rule_dead_[o.body] == 0) supp_[rules_[o.body].head]++;
    for (Occ o : cp_[a]) con_undec_[o.body]++;
    for (Occ o : cn_[a]) con_dead_[o.body]--;
    for (Occ o : wp_[a]) {
      int w = o.body;
      if (weak_undec_[w]++ == 0 && weak_dead_[w] == 0) lb_ -= weaks_[w].weight;
    }
    for (Occ o : wn_[a]) weak_dead_[o.body]--;
  } else {
    for (Occ o : rp_[a])
      if (--rule_dead_[o.body] == 0) supp_[rules_[o.body].head]++;
    for (Occ o : rn_[a]) rule_undec_[o.body]++;
    for (Occ o : cp_[a]) con_dead_[o.body]--;
    for (Occ o : cn_[a]) con_undec_[o.body]++;
    for (Occ o : wp_[a]) weak_dead_[o.body]--;
    for (Occ o : wn_[a]) {
      int w = o.body;
      if (weak_undec_[w]++ == 0 && weak_dead_[w] == 0) lb_ -= weaks_[w].weight;
    }
  }
}

void Engine::undo_to(std::size_t mark) {
  while (trail_.size() > mark) {
    undo_one(trail_.back());
    trail_.pop_back();
  }
}

// Closure of atoms derivable through currently alive rules from scratch;
// anything outside it can never become supported below this node. Undefined
// leftovers are set false, true leftovers are a conflict.
bool Engine::unfounded_check() {
  std::fill(in_set_.begin(), in_set_.end(), 0);
  work_.clear();
  for (std::size_t r = 0; r < rules_.size(); ++r) {
    cnt_[r] = static_cast<int>(rules_[r].pos.size());
    if (rule_dead_[r] == 0 && cnt_[r] == 0) {
      int h = rules_[r].head;
      if (!in_set_[h]) {
        in_set_[h] = 1;
        work_.push_back(h);
      }
    }
  }
  for (std::size_t i = 0; i < work_.size(); ++i) {
    int a = work_[i];
    for (Occ o : rp_[a]) {
      int r = o.body;
      if (--cnt_[r] == 0 && rule_dead_[r] == 0) {
        int h = rules_[r].head;
        if (!in_set_[h]) {
          in_set_[h] = 1;
          work_.push_back(h);
        }
      }
    }
  }
  for (int a = 0; a < n_; ++a) {
    if (in_set_[a] || val_[a] == Val::fls) continue;
    if (val_[a] == Val::tru) return false;
    if (!enqueue(a, Val::fls)) return false;
  }
  return propagate();
}

bool Engine::leaf_is_stable() const {
  // least model of the reduct wrt the current total assignment
  std::fill(in_set_.begin(), in_set_.end(), 0);
  work_.clear();
  auto push = [&](int h) {
    if (!in_set_[h]) {
      in_set_[h] = 1;
      work_.push_back(h);
    }
  };
  for (std::size_t r = 0; r < rules_.size(); ++r) {
    bool kept = true;
    for (int a : rules_[r].neg)
      if (val_[a] == Val::tru) {
        kept = false;
        break;
      }
    cnt_[r] = kept ? static_cast<int>(rules_[r].pos.size()) : -1;
    if (cnt_[r] == 0) push(rules_[r].head);
  }
  for (std::size_t i = 0; i < work_.size(); ++i)
    for (Occ o : rp_[work_[i]]) {
      int r = o.body;
      if (cnt_[r] > 0 && --cnt_[r] == 0) push(rules_[r].head);
    }
  for (int a = 0; a < n_; ++a)
    if ((val_[a] == Val::tru) != (in_set_[a] != 0)) return false;
  return true;
}

bool Engine::handle_model() {
  std::vector<bool> model(n_);
  for (int a = 0; a < n_; ++a) model[a] = val_[a] == Val::tru;

  if (!opt_.optimize) {
    result_.models.emplace_back(std::move(model), 0);
    if (opt_.on_model && !opt_.on_model(result_.models.back().first)) return false;
    if (opt_.first_hit) return false;
    if (opt_.limit && result_.models.size() >= *opt_.limit) {
      result_.stopped_early = true;
      return false;
    }
    return true;
  }

  long long cost = lb_;
  if (cost > opt_.upper_bound.value_or(kInf)) return true;  // out of bounds
  if (cost < incumbent_) {
    incumbent_ = cost;
    result_.models.clear();
    if (opt_.on_improve) opt_.on_improve(model, cost);
  }
  if (cost == incumbent_) result_.models.emplace_back(std::move(model), cost);
  if (opt_.first_hit) return false;
  return true;
}

SearchResult Engine::run() {
  // root propagation: facts, unsupported atoms, unit constraints
  for (std::size_t r = 0; r < rules_.size(); ++r)
    if (rule_undec_[r] == 0) {
      if (!enqueue(rules_[r].head, Val::tru)) return result_;
    }
  for (std::size_t c = 0; c < cons_.size(); ++c) {
    if (con_undec_[c] == 0) return result_;  // unconditionally violated
    if (con_undec_[c] == 1 && !force_last_con_literal(c)) return result_;
  }
  for (int a = 0; a < n_; ++a)
    if (supp_[a] == 0) {
      if (!enqueue(a, Val::fls)) return result_;
    }
  for (std::size_t w = 0; w < weaks_.size(); ++w)
    if (weak_undec_[w] == 0) lb_ += weaks_[w].weight;
  if (opt_.optimize && lb_ > prune_bound()) return result_;

  bool conflict = !propagate();
  if (!conflict && any_pos_cycle_) conflict = !unfounded_check();

  while (true) {
    if (conflict) {
      // chronological backtracking to the deepest unflipped decision
      while (!decisions_.empty() && decisions_.back().flipped) {
        undo_to(decisions_.back().mark);
        decisions_.pop_back();
      }
      if (decisions_.empty()) break;
      Frame& f = decisions_.back();
      undo_to(f.mark);
      f.flipped = true;
      f.scan = f.scan0;  // assignments justifying a larger scan were undone
      conflict = !(assign(f.atom, Val::tru) && propagate());
      if (!conflict && any_pos_cycle_) conflict = !unfounded_check();
      continue;
    }

    if (at_leaf()) {
      if (leaf_is_stable() && !handle_model()) break;
      conflict = true;
      continue;
    }

    int scan = decisions_.empty() ? 0 : decisions_.back().scan;
    while (val_[decision_order_[scan]] != Val::undef) ++scan;
    if (!decisions_.empty()) decisions_.back().scan = scan;
    int atom = decision_order_[scan];
    decisions_.push_back({atom, false, trail_.size(), scan, scan});
    conflict = !(assign(atom, Val::fls) && propagate());
    if (!conflict && any_pos_cycle_) conflict = !unfounded_check();
  }

  undo_to(0);
  if (opt_.optimize && incumbent_ == kInf) result_.models.clear();
  return result_;
}

}  // namespace

SearchResult search_stable(const GroundProgram& g, const SearchOptions& opt) {
  Engine e(g, opt);
  return e.run();
}

std::vector<bool> least_model_of_reduct(const GroundProgram& g, const std::vector<bool>& in) {
  std::size_t n = g.size();
  std::vector<int> cnt(g.rules.size());
  std::vector<std::vector<int>> occ(n);
  std::vector<bool> out(n, false);
  std::vector<int> work;
  auto push = [&](int h) {
    if (!out[h]) {
      out[h] = true;
      work.push_back(h);
    }
  };
  for (std::size_t r = 0; r < g.rules.size(); ++r) {
    const GroundRule& rule = g.rules[r];
    bool kept = true;
    for (int a : rule.neg)
      if (in[a]) {
        kept = false;
        break;
      }
    if (!kept) {
      cnt[r] = -1;
      continue;
    }
    cnt[r] = static_cast<int>(rule.pos.size());
    if (cnt[r] == 0) {
      push(rule.head);
    } else {
      for (int a : rule.pos) occ[a].push_back(static_cast<int>(r));
    }
  }
  for (std::size_t i = 0; i < work.size(); ++i)
    for (int r : occ[work[i]])
      if (cnt[r] > 0 && --cnt[r] == 0) push(g.rules[r].head);
  return out;
}

}  // namespace pap::detail
