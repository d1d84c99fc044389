#include "pap/grounder.h"

#include <algorithm>
#include <cassert>
#include <functional>

namespace pap {
namespace {

// Hard ceilings; hitting one means the instance is far outside the sizes
// this engine is meant for, and a clean error beats thrashing.
constexpr std::size_t kMaxOpenRelation = 2000000;
constexpr std::size_t kMaxGroundRules = 10000000;

using Tuple = std::vector<Term>;
using Relation = std::set<Tuple>;
using Subst = std::map<std::string, Term>;

void collect_vars(const Atom& a, std::set<std::string>& out) {
  for (const Term& t : a.args)
    if (t.kind == TermKind::variable) out.insert(t.name);
}

Term substitute(const Term& t, const Subst& s) {
  if (t.kind != TermKind::variable) return t;
  auto it = s.find(t.name);
  assert(it != s.end());
  return it->second;
}

Atom substitute(const Atom& a, const Subst& s) {
  Atom out;
  out.predicate = a.predicate;
  out.args.reserve(a.args.size());
  for (const Term& t : a.args) out.args.push_back(substitute(t, s));
  return out;
}

// Matches args against a ground tuple, extending s. Returns the variables
// newly bound here so the caller can undo the extension.
bool unify(const std::vector<Term>& args, const Tuple& tuple, Subst& s,
           std::vector<std::string>& bound_here) {
  for (std::size_t k = 0; k < args.size(); ++k) {
    const Term& t = args[k];
    if (t.kind != TermKind::variable) {
      if (t != tuple[k]) return false;
      continue;
    }
    auto [it, fresh] = s.emplace(t.name, tuple[k]);
    if (fresh)
      bound_here.push_back(t.name);
    else if (it->second != tuple[k])
      return false;
  }
  return true;
}

struct BodyView {
  const Atom* head = nullptr;              // null for constraints and weaks
  const std::vector<Literal>* body = nullptr;
  std::vector<std::size_t> positive;       // positive non-built-in literal indices
  std::vector<std::size_t> builtins;
};

BodyView make_view(const Atom* head, const std::vector<Literal>& body) {
  BodyView v;
  v.head = head;
  v.body = &body;
  for (std::size_t k = 0; k < body.size(); ++k) {
    if (body[k].atom.is_builtin())
      v.builtins.push_back(k);
    else if (body[k].positive)
      v.positive.push_back(k);
  }
  return v;
}

// Safe variables: those in positive non-built-in literals, closed under
// binding through V = A + B.
std::set<std::string> safe_vars(const BodyView& v) {
  std::set<std::string> bound;
  for (std::size_t k : v.positive) collect_vars((*v.body)[k].atom, bound);
  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t k : v.builtins) {
      const Atom& b = (*v.body)[k].atom;
      if (b.predicate != kPlus || b.args[0].kind != TermKind::variable) continue;
      if (bound.count(b.args[0].name)) continue;
      std::set<std::string> rhs;
      if (b.args[1].kind == TermKind::variable) rhs.insert(b.args[1].name);
      if (b.args[2].kind == TermKind::variable) rhs.insert(b.args[2].name);
      if (std::all_of(rhs.begin(), rhs.end(),
                      [&](const std::string& x) { return bound.count(x) != 0; })) {
        bound.insert(b.args[0].name);
        grew = true;
      }
    }
  }
  return bound;
}

std::set<std::string> all_vars(const BodyView& v) {
  std::set<std::string> vars;
  if (v.head) collect_vars(*v.head, vars);
  for (const Literal& l : *v.body) collect_vars(l.atom, vars);
  return vars;
}

class Grounder {
 public:
  Grounder(const Program& p, const std::set<std::string>& extra, long long bound)
      : p_(p), bound_(bound) {
    for (const Rule& r : p.rules) views_.push_back(make_view(r.head ? &*r.head : nullptr, r.body));
    for (const WeakConstraint& w : p.weak_constraints) weak_views_.push_back(make_view(nullptr, w.body));
    collect_universe(extra);
    for (const Rule& r : p.rules)
      if (r.head) defined_.insert(r.head->predicate);
  }

  GroundProgram run() {
    derive();
    GroundProgram g;
    for (std::size_t k = 0; k < p_.rules.size(); ++k)
      emit(views_[k], [&](const Subst& s) { emit_rule(g, p_.rules[k], s); });
    for (std::size_t k = 0; k < p_.weak_constraints.size(); ++k)
      emit(weak_views_[k], [&](const Subst& s) { emit_weak(g, p_.weak_constraints[k], s); });
    return g;
  }

 private:
  void collect_universe(const std::set<std::string>& extra) {
    auto add_atom = [&](const Atom& a) {
      for (const Term& t : a.args)
        if (t.kind != TermKind::variable) universe_.insert(t);
    };
    for (const Rule& r : p_.rules) {
      if (r.head) add_atom(*r.head);
      for (const Literal& l : r.body) add_atom(l.atom);
    }
    for (const WeakConstraint& w : p_.weak_constraints)
      for (const Literal& l : w.body) add_atom(l.atom);
    for (const std::string& c : extra) {
      bool digits = !c.empty() && std::all_of(c.begin(), c.end(), [](char ch) {
        return ch >= '0' && ch <= '9';
      });
      universe_.insert(digits ? Term::integer(std::stoll(c)) : Term::constant(c));
    }
  }

  // The relation a positive literal draws its tuples from: derivable atoms
  // for defined predicates, the full universe product for open ones.
  const Relation& relation(const Atom& a) {
    if (defined_.count(a.predicate)) return rel_[a.predicate];
    auto it = open_.find(a.predicate);
    if (it != open_.end()) return it->second;
    Relation r;
    double budget = 1;
    for (std::size_t k = 0; k < a.arity(); ++k) budget *= static_cast<double>(universe_.size());
    if (budget > static_cast<double>(kMaxOpenRelation))
      throw Error(Errc::too_large, "open predicate " + a.predicate + "/" +
                                       std::to_string(a.arity()) + " over " +
                                       std::to_string(universe_.size()) + " constants");
    Tuple cur(a.arity());
    std::function<void(std::size_t)> fill = [&](std::size_t k) {
      if (k == a.arity()) {
        r.insert(cur);
        return;
      }
      for (const Term& t : universe_) {
        cur[k] = t;
        fill(k + 1);
      }
    };
    fill(0);
    return open_.emplace(a.predicate, std::move(r)).first->second;
  }

  // Evaluates pending built-ins under s; binds V = A + B results. Returns
  // false when some fully-ground built-in is false or a sum exceeds the
  // integer bound. `done` and `bound_here` let the caller undo.
  bool eval_builtins(const BodyView& v, Subst& s, std::vector<bool>& done,
                     std::vector<std::string>& bound_here) {
    bool progress = true;
    while (progress) {
      progress = false;
      for (std::size_t bi = 0; bi < v.builtins.size(); ++bi) {
        if (done[bi]) continue;
        const Atom& b = (*v.body)[v.builtins[bi]].atom;
        bool args_ground = true;
        for (std::size_t k = (b.predicate == kPlus ? 1 : 0); k < b.args.size(); ++k) {
          const Term& t = b.args[k];
          if (t.kind == TermKind::variable && !s.count(t.name)) args_ground = false;
        }
        if (!args_ground) continue;
        if (b.predicate == kPlus) {
          const Term x = substitute(b.args[1], s), y = substitute(b.args[2], s);
          if (x.kind != TermKind::integer || y.kind != TermKind::integer) return false;
          long long sum;
          if (__builtin_add_overflow(x.value, y.value, &sum))
            throw Error(Errc::integer_overflow, "in " + to_string(b));
          if (sum > bound_) return false;
          const Term& lhs = b.args[0];
          if (lhs.kind == TermKind::variable && !s.count(lhs.name)) {
            s.emplace(lhs.name, Term::integer(sum));
            bound_here.push_back(lhs.name);
          } else if (substitute(lhs, s) != Term::integer(sum)) {
            return false;
          }
        } else if (!builtin_true(substitute(b, s))) {
          return false;
        }
        done[bi] = true;
        progress = true;
      }
    }
    return true;
  }

  // Enumerates all substitutions for the view's variables and calls out for
  // each. Literal `delta_at`, when set, draws from `delta` instead of the
  // full relation (the semi-naive frontier). In emission mode literals that
  // are ground in the source are kept as written, without a membership test.
  void join(const BodyView& v, bool emission, std::optional<std::size_t> delta_at,
            const Relation* delta, const std::function<void(const Subst&)>& out) {
    std::vector<std::size_t> order;  // positions into v.positive
    for (std::size_t k = 0; k < v.positive.size(); ++k) {
      const Atom& a = (*v.body)[v.positive[k]].atom;
      if (emission && a.is_ground() && (!delta_at || *delta_at != k)) continue;
      order.push_back(k);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      auto size_of = [&](std::size_t k) {
        if (delta_at && *delta_at == k) return delta->size();
        return relation((*v.body)[v.positive[k]].atom).size();
      };
      return size_of(x) < size_of(y);
    });

    Subst s;
    std::vector<bool> done(v.builtins.size(), false);
    std::function<void(std::size_t)> step = [&](std::size_t idx) {
      std::vector<std::string> bound_here;
      std::vector<bool> done_before = done;
      if (!eval_builtins(v, s, done, bound_here)) {
        for (const std::string& x : bound_here) s.erase(x);
        done = std::move(done_before);
        return;
      }
      if (idx == order.size()) {
        if (std::all_of(done.begin(), done.end(), [](bool b) { return b; })) out(s);
      } else {
        std::size_t k = order[idx];
        const Atom& a = (*v.body)[v.positive[k]].atom;
        const Relation& r = (delta_at && *delta_at == k) ? *delta : relation(a);
        for (const Tuple& t : r) {
          std::vector<std::string> b2;
          if (unify(a.args, t, s, b2))
            step(idx + 1);
          for (const std::string& x : b2) s.erase(x);
        }
      }
      for (const std::string& x : bound_here) s.erase(x);
      done = std::move(done_before);
    };
    step(0);
  }

  // Fixpoint of derivable atoms. Round 0 joins every rule over the initial
  // facts; later rounds require one positive literal to match the previous
  // round's delta.
  void derive() {
    Relation empty;
    std::map<std::string, Relation> delta;
    for (const Rule& r : p_.rules)
      if (r.head && r.body.empty()) {
        if (!r.head->is_ground()) throw Error(Errc::unsafe_program, "non-ground fact " + to_string(*r.head));
        Tuple t(r.head->args.begin(), r.head->args.end());
        if (rel_[r.head->predicate].insert(t).second) delta[r.head->predicate].insert(t);
      }

    bool first = true;
    while (true) {
      std::map<std::string, Relation> next_delta;
      auto derive_head = [&](const Atom& head, const Subst& s) {
        Atom h = substitute(head, s);
        Tuple t(h.args.begin(), h.args.end());
        if (rel_[h.predicate].insert(t).second) next_delta[h.predicate].insert(t);
      };
      for (std::size_t k = 0; k < p_.rules.size(); ++k) {
        const Rule& r = p_.rules[k];
        if (!r.head || r.body.empty()) continue;
        const BodyView& v = views_[k];
        if (first) {
          join(v, false, std::nullopt, nullptr, [&](const Subst& s) { derive_head(*r.head, s); });
          continue;
        }
        for (std::size_t d = 0; d < v.positive.size(); ++d) {
          const std::string& pred = (*v.body)[v.positive[d]].atom.predicate;
          if (!defined_.count(pred)) continue;
          auto it = delta.find(pred);
          if (it == delta.end() || it->second.empty()) continue;
          join(v, false, d, &it->second, [&](const Subst& s) { derive_head(*r.head, s); });
        }
      }
      first = false;
      if (next_delta.empty()) return;
      for (auto& [pred, tuples] : next_delta) delta[pred] = std::move(tuples);
      for (auto& [pred, tuples] : delta)
        if (!next_delta.count(pred)) tuples.clear();
    }
  }

  void emit(const BodyView& v, const std::function<void(const Subst&)>& out) {
    join(v, true, std::nullopt, nullptr, out);
  }

  void emit_rule(GroundProgram& g, const Rule& r, const Subst& s) {
    GroundRule out;
    if (r.head) out.head = g.intern(substitute(*r.head, s));
    for (const Literal& l : r.body) {
      if (l.atom.is_builtin()) continue;
      int id = g.intern(substitute(l.atom, s));
      (l.positive ? out.pos : out.neg).push_back(id);
    }
    if (g.rules.size() + g.constraints.size() >= kMaxGroundRules)
      throw Error(Errc::too_large, "ground program exceeds rule budget");
    (out.head >= 0 ? g.rules : g.constraints).push_back(std::move(out));
  }

  void emit_weak(GroundProgram& g, const WeakConstraint& w, const Subst& s) {
    GroundWeak out;
    out.weight = w.weight;
    for (const Literal& l : w.body) {
      if (l.atom.is_builtin()) continue;
      int id = g.intern(substitute(l.atom, s));
      (l.positive ? out.pos : out.neg).push_back(id);
    }
    g.weak.push_back(std::move(out));
  }

  const Program& p_;
  long long bound_;
  std::vector<BodyView> views_, weak_views_;
  std::set<std::string> defined_;
  std::set<Term> universe_;
  std::map<std::string, Relation> rel_;
  std::map<std::string, Relation> open_;
};

}  // namespace

std::vector<SafetyViolation> check_safety(const Program& p) {
  std::vector<SafetyViolation> out;
  auto check = [&](const BodyView& v, std::size_t index, bool in_weak, const std::string& text) {
    std::set<std::string> bound = safe_vars(v);
    for (const std::string& x : all_vars(v))
      if (!bound.count(x)) out.push_back({index, in_weak, x, text});
  };
  for (std::size_t k = 0; k < p.rules.size(); ++k) {
    const Rule& r = p.rules[k];
    check(make_view(r.head ? &*r.head : nullptr, r.body), k, false, to_string(r));
  }
  for (std::size_t k = 0; k < p.weak_constraints.size(); ++k)
    check(make_view(nullptr, p.weak_constraints[k].body), k, true, to_string(p.weak_constraints[k]));
  return out;
}

int GroundProgram::intern(const Atom& a) {
  assert(a.is_ground() && !a.is_builtin());
  auto it = ids_.find(a);
  if (it != ids_.end()) return it->second;
  int id = static_cast<int>(base_.size());
  base_.push_back(a);
  ids_.emplace(a, id);
  return id;
}

int GroundProgram::id_of(const Atom& a) const {
  auto it = ids_.find(a);
  return it == ids_.end() ? -1 : it->second;
}

Program GroundProgram::to_program() const {
  Program p;
  auto body_of = [&](const GroundRule& r) {
    std::vector<Literal> body;
    for (int id : r.pos) body.push_back({atom_of(id), true});
    for (int id : r.neg) body.push_back({atom_of(id), false});
    return body;
  };
  for (const GroundRule& r : rules) p.rules.push_back({atom_of(r.head), body_of(r)});
  for (const GroundRule& c : constraints) p.rules.push_back({std::nullopt, body_of(c)});
  for (const GroundWeak& w : weak) {
    WeakConstraint wc;
    wc.weight = w.weight;
    for (int id : w.pos) wc.body.push_back({atom_of(id), true});
    for (int id : w.neg) wc.body.push_back({atom_of(id), false});
    p.weak_constraints.push_back(std::move(wc));
  }
  return p;
}

Interpretation GroundProgram::decode(const std::vector<bool>& in) const {
  Interpretation i;
  for (std::size_t k = 0; k < base_.size(); ++k)
    if (in[k]) i.insert(base_[k]);
  return i;
}

std::vector<bool> GroundProgram::encode(const Interpretation& i, std::size_t* extra) const {
  std::vector<bool> in(base_.size(), false);
  std::size_t outside = 0;
  for (const Atom& a : i.atoms) {
    int id = id_of(a);
    if (id < 0)
      ++outside;
    else
      in[static_cast<std::size_t>(id)] = true;
  }
  if (extra) *extra = outside;
  return in;
}

GroundProgram ground(const Program& p, const std::set<std::string>& extra_constants,
                     std::optional<long long> integer_bound) {
  std::vector<SafetyViolation> violations = check_safety(p);
  if (!violations.empty())
    throw Error(Errc::unsafe_program,
                "variable " + violations[0].variable + " in " + violations[0].rule_text);
  long long bound = integer_bound ? *integer_bound : default_int_bound(p, 0);
  return Grounder(p, extra_constants, bound).run();
}

long long default_int_bound(const Program& p, std::size_t n_hypotheses) {
  long long mx = 0;
  auto scan = [&](const Atom& a) {
    for (const Term& t : a.args)
      if (t.kind == TermKind::integer) mx = std::max(mx, t.value);
  };
  for (const Rule& r : p.rules) {
    if (r.head) scan(*r.head);
    for (const Literal& l : r.body) scan(l.atom);
  }
  for (const WeakConstraint& w : p.weak_constraints)
    for (const Literal& l : w.body) scan(l.atom);
  return mx + static_cast<long long>(n_hypotheses);
}

}  // namespace pap
