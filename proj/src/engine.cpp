#include "icheck/engine.hpp"

#include <algorithm>
#include <functional>

namespace icheck {

// ---------------------------------------------------------------------------
// Model

Model::Model(const Database& db)
    : signatures_(db.signatures()),
      counter_(std::make_unique<std::atomic<std::uint64_t>>(0)) {
  for (const auto& [pred, arity] : signatures_)
    if (db.is_extensional(pred)) extensional_.insert(pred);
  for (const Atom& f : db.facts()) edb_[f.predicate].push_back(f);
  for (auto& [pred, atoms] : edb_) std::sort(atoms.begin(), atoms.end());
}

const std::vector<Atom>* Model::extensional_store(const std::string& pred) const {
  auto it = edb_.find(pred);
  return it == edb_.end() ? nullptr : &it->second;
}

const std::vector<Atom>* Model::derived_store(const std::string& pred) const {
  auto it = idb_.find(pred);
  return it == idb_.end() ? nullptr : &it->second;
}

bool Model::contains(const Atom& a) const {
  if (is_extensional(a.predicate)) {
    const std::vector<Atom>* store = extensional_store(a.predicate);
    if (store && std::binary_search(store->begin(), store->end(), a)) {
      counter_->fetch_add(1);
      return true;
    }
    return false;
  }
  return derived_contains(a);
}

bool Model::derived_contains(const Atom& a) const {
  const std::vector<Atom>* store = derived_store(a.predicate);
  return store && std::binary_search(store->begin(), store->end(), a);
}

void Model::add_derived(const std::vector<Atom>& atoms) {
  for (const Atom& a : atoms) idb_[a.predicate].push_back(a);
  for (auto& [pred, store] : idb_) std::sort(store.begin(), store.end());
}

std::set<Atom> Model::true_atoms() const {
  std::set<Atom> out;
  for (const auto& [pred, atoms] : edb_) out.insert(atoms.begin(), atoms.end());
  for (const auto& [pred, atoms] : idb_) out.insert(atoms.begin(), atoms.end());
  return out;
}

bool same_model(const Model& a, const Model& b) { return a.true_atoms() == b.true_atoms(); }

// ---------------------------------------------------------------------------
// Stratification

namespace {

struct DepEdge {
  std::string from, to;  // body predicate -> head predicate
  bool negative;
};

struct SccState {
  std::map<std::string, int> index, low, comp;
  std::vector<std::string> stack;
  std::map<std::string, bool> on_stack;
  int next_index = 0, next_comp = 0;
  std::vector<std::vector<std::string>> members;
};

void tarjan(const std::string& v, const std::map<std::string, std::vector<std::pair<std::string, bool>>>& adj,
            SccState& s) {
  s.index[v] = s.low[v] = s.next_index++;
  s.stack.push_back(v);
  s.on_stack[v] = true;
  auto it = adj.find(v);
  if (it != adj.end()) {
    for (const auto& [w, negative] : it->second) {
      if (s.index.count(w) == 0) {
        tarjan(w, adj, s);
        s.low[v] = std::min(s.low[v], s.low[w]);
      } else if (s.on_stack[w]) {
        s.low[v] = std::min(s.low[v], s.index[w]);
      }
    }
  }
  if (s.low[v] == s.index[v]) {
    std::vector<std::string> comp;
    while (true) {
      std::string w = s.stack.back();
      s.stack.pop_back();
      s.on_stack[w] = false;
      s.comp[w] = s.next_comp;
      comp.push_back(w);
      if (w == v) break;
    }
    std::sort(comp.begin(), comp.end());
    s.members.push_back(std::move(comp));
    ++s.next_comp;
  }
}

std::map<std::string, int> stratum_levels(const Database& db) {
  std::map<std::string, std::vector<std::pair<std::string, bool>>> adj;
  std::vector<DepEdge> edges;
  for (const auto& [pred, arity] : db.signatures()) adj[pred];  // ensure node
  for (const Rule& r : db.rules()) {
    for (const Literal& l : r.body) {
      adj[l.atom.predicate].emplace_back(r.head.predicate, l.negative);
      edges.push_back({l.atom.predicate, r.head.predicate, l.negative});
    }
  }

  SccState s;
  for (const auto& [pred, targets] : adj)
    if (s.index.count(pred) == 0) tarjan(pred, adj, s);

  for (const DepEdge& e : edges) {
    if (e.negative && s.comp[e.from] == s.comp[e.to]) {
      std::string cycle;
      for (const std::string& p : s.members[s.comp[e.from]])
        cycle += (cycle.empty() ? "" : ", ") + p;
      throw NotStratifiableError("not stratifiable: negative dependency cycle through "
                                 "predicates: " + cycle);
    }
  }

  // Longest path over the condensation, negative edges adding one level.
  std::vector<int> level(s.next_comp, 0);
  // Tarjan emits components in reverse topological order of the condensation
  // (a component is completed only after everything it reaches), so a single
  // backward sweep settles all levels.
  for (int c = s.next_comp - 1; c >= 0; --c) {
    for (const std::string& p : s.members[c]) {
      auto it = adj.find(p);
      if (it == adj.end()) continue;
      for (const auto& [q, negative] : it->second) {
        int qc = s.comp[q];
        if (qc == c) continue;
        level[qc] = std::max(level[qc], level[c] + (negative ? 1 : 0));
      }
    }
  }

  std::map<std::string, int> out;
  for (const auto& [pred, c] : s.comp) out[pred] = level[c];
  return out;
}

}  // namespace

std::vector<std::vector<std::string>> stratify(const Database& db) {
  std::map<std::string, int> levels = stratum_levels(db);
  if (levels.empty()) return {};
  int max_level = 0;
  for (const auto& [pred, l] : levels) max_level = std::max(max_level, l);
  std::vector<std::vector<std::string>> out(static_cast<std::size_t>(max_level) + 1);
  for (const auto& [pred, l] : levels) out[static_cast<std::size_t>(l)].push_back(pred);
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const std::vector<std::string>& v) { return v.empty(); }),
            out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

using Bindings = std::map<std::string, Term>;

Term resolve(const Term& t, const Bindings& b) {
  if (t.is_variable()) {
    auto it = b.find(t.name);
    if (it != b.end()) return it->second;
  }
  return t;
}

Atom substitute(const Atom& a, const Bindings& b) {
  Atom out = a;
  for (Term& t : out.args) t = resolve(t, b);
  return out;
}

bool ground_under(const Atom& a, const Bindings& b) {
  for (const Term& t : a.args)
    if (resolve(t, b).is_variable()) return false;
  return true;
}

struct PlanItem {
  enum Kind { Positive, Negative, Constraint } kind;
  std::size_t index;
};

// Positive literals keep their written order; each negative literal or side
// condition is scheduled as soon as its variables are covered.
std::vector<PlanItem> make_plan(const std::vector<Literal>& body,
                                const std::vector<TermConstraint>& conds) {
  std::set<std::string> bound;
  std::vector<bool> done_lit(body.size(), false), done_cond(conds.size(), false);
  std::size_t remaining = body.size() + conds.size();
  std::vector<PlanItem> plan;
  plan.reserve(remaining);

  auto covered = [&bound](const std::set<std::string>& vars) {
    return std::all_of(vars.begin(), vars.end(),
                       [&bound](const std::string& v) { return bound.count(v) != 0; });
  };

  while (remaining > 0) {
    bool progressed = false;
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (done_lit[i] || body[i].positive()) continue;
      std::set<std::string> vars;
      collect_variables(body[i].atom, vars);
      if (covered(vars)) {
        plan.push_back({PlanItem::Negative, i});
        done_lit[i] = true;
        --remaining;
        progressed = true;
      }
    }
    for (std::size_t i = 0; i < conds.size(); ++i) {
      if (done_cond[i]) continue;
      std::set<std::string> vars;
      collect_variables(conds[i], vars);
      if (covered(vars)) {
        plan.push_back({PlanItem::Constraint, i});
        done_cond[i] = true;
        --remaining;
        progressed = true;
      }
    }
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (done_lit[i] || body[i].negative) continue;
      plan.push_back({PlanItem::Positive, i});
      done_lit[i] = true;
      --remaining;
      std::set<std::string> vars;
      collect_variables(body[i].atom, vars);
      bound.insert(vars.begin(), vars.end());
      progressed = true;
      break;
    }
    if (!progressed)
      throw SafetyError("internal: unsafe body reached the evaluator");
  }
  return plan;
}

// Backtracking join over the model's stores, counting extensional
// retrievals into `reads`. Optionally one body literal (the semi-naive
// pivot) scans a delta store instead of the full derived store.
struct Evaluator {
  const Model& model;
  const std::vector<Literal>& body;
  const std::vector<TermConstraint>& conds;
  std::uint64_t reads = 0;
  std::size_t pivot_index = static_cast<std::size_t>(-1);
  const std::vector<Atom>* pivot_store = nullptr;

  // on_solution returns true to stop the search.
  bool search(const std::vector<PlanItem>& plan, std::size_t step, Bindings& bind,
              const std::function<bool(const Bindings&)>& on_solution) {
    if (step == plan.size()) return on_solution(bind);
    const PlanItem& item = plan[step];

    if (item.kind == PlanItem::Constraint) {
      const TermConstraint& c = conds[item.index];
      Term l = resolve(c.lhs, bind), r = resolve(c.rhs, bind);
      bool equal = l == r;
      if (c.rel == TermConstraint::Rel::Equal ? !equal : equal) return false;
      return search(plan, step + 1, bind, on_solution);
    }

    const Literal& lit = body[item.index];
    Atom pattern = substitute(lit.atom, bind);

    if (item.kind == PlanItem::Negative) {
      // Ground by plan construction.
      bool present;
      if (model.is_extensional(pattern.predicate)) {
        const std::vector<Atom>* store = model.extensional_store(pattern.predicate);
        present = store && std::binary_search(store->begin(), store->end(), pattern);
        if (present) ++reads;
      } else {
        const std::vector<Atom>* store = model.derived_store(pattern.predicate);
        present = store && std::binary_search(store->begin(), store->end(), pattern);
      }
      if (present) return false;
      return search(plan, step + 1, bind, on_solution);
    }

    // Positive literal.
    bool extensional = model.is_extensional(pattern.predicate);
    const std::vector<Atom>* store;
    if (item.index == pivot_index)
      store = pivot_store;
    else
      store = extensional ? model.extensional_store(pattern.predicate)
                          : model.derived_store(pattern.predicate);
    if (!store || store->empty()) return false;

    if (ground_under(pattern, bind)) {
      if (std::binary_search(store->begin(), store->end(), pattern)) {
        if (extensional) ++reads;
        return search(plan, step + 1, bind, on_solution);
      }
      return false;
    }

    for (const Atom& fact : *store) {
      std::vector<std::string> trail;
      bool ok = true;
      for (std::size_t i = 0; i < pattern.args.size() && ok; ++i) {
        Term pt = resolve(pattern.args[i], bind);
        if (pt.is_variable()) {
          bind.emplace(pt.name, fact.args[i]);
          trail.push_back(pt.name);
        } else if (pt != fact.args[i]) {
          ok = false;
        }
      }
      if (ok) {
        if (extensional) ++reads;
        if (search(plan, step + 1, bind, on_solution)) {
          for (const std::string& v : trail) bind.erase(v);
          return true;
        }
      }
      for (const std::string& v : trail) bind.erase(v);
    }
    return false;
  }
};

// Satisfiability of a denial body in the model.
bool body_satisfiable(const Model& m, const Denial& d, std::uint64_t& reads) {
  std::vector<PlanItem> plan = make_plan(d.body(), d.side_conditions());
  Evaluator ev{m, d.body(), d.side_conditions()};
  Bindings bind;
  bool found = ev.search(plan, 0, bind, [](const Bindings&) { return true; });
  reads += ev.reads;
  return found;
}

void require_parameter_free(const IntegrityTheory& t) {
  if (t.has_parameters())
    throw InstantiationError("theory contains parameters; instantiate them before evaluation");
}

void check_vocabulary(const Model& m, const Denial& d) {
  auto check = [&m](const Atom& a) {
    auto it = m.signatures().find(a.predicate);
    if (it == m.signatures().end())
      throw VocabularyError("unknown predicate '" + a.predicate + "' in constraint");
    if (it->second != a.arity())
      throw VocabularyError("arity mismatch for predicate '" + a.predicate + "' in constraint");
  };
  for (const Literal& l : d.body()) check(l.atom);
}

}  // namespace

CheckResult holds(const Model& m, const Denial& d) {
  if (d.has_parameters())
    throw InstantiationError("denial contains parameters; instantiate them before evaluation");
  check_vocabulary(m, d);
  std::uint64_t reads = 0;
  bool violated = body_satisfiable(m, d, reads);
  m.note_retrievals(reads);
  return {!violated, reads};
}

CheckResult holds(const Model& m, const IntegrityTheory& gamma) {
  require_parameter_free(gamma);
  std::uint64_t reads = 0;
  for (const Denial& d : gamma.denials) {
    check_vocabulary(m, d);
    if (body_satisfiable(m, d, reads)) {
      m.note_retrievals(reads);
      return {false, reads};
    }
  }
  m.note_retrievals(reads);
  return {true, reads};
}

CheckResult holds(const Database& db, const IntegrityTheory& gamma) {
  Model m = standard_model(db);
  return holds(m, gamma);
}

std::set<std::vector<Literal>> violated_instances(const Database& db, const Denial& d) {
  if (d.has_parameters())
    throw InstantiationError("denial contains parameters; instantiate them before evaluation");
  Model m = standard_model(db);
  check_vocabulary(m, d);
  std::vector<PlanItem> plan = make_plan(d.body(), d.side_conditions());
  Evaluator ev{m, d.body(), d.side_conditions()};
  Bindings bind;
  std::set<std::vector<Literal>> out;
  ev.search(plan, 0, bind, [&](const Bindings& b) {
    std::vector<Literal> ground;
    ground.reserve(d.body().size());
    for (const Literal& l : d.body()) ground.push_back(Literal{l.negative, substitute(l.atom, b)});
    out.insert(std::move(ground));
    return false;  // enumerate exhaustively
  });
  m.note_retrievals(ev.reads);
  return out;
}

// ---------------------------------------------------------------------------
// Fixpoint computation

namespace {

std::vector<Atom> eval_rule(const Model& m, const Rule& r, std::size_t pivot_index,
                            const std::vector<Atom>* pivot_store, std::uint64_t& reads) {
  static const std::vector<TermConstraint> no_conds;
  std::vector<PlanItem> plan = make_plan(r.body, no_conds);
  Evaluator ev{m, r.body, no_conds, 0, pivot_index, pivot_store};
  Bindings bind;
  std::vector<Atom> heads;
  ev.search(plan, 0, bind, [&](const Bindings& b) {
    heads.push_back(substitute(r.head, b));
    return false;
  });
  reads += ev.reads;
  return heads;
}

std::map<int, std::vector<Rule>> rules_by_level(const Database& db,
                                                const std::map<std::string, int>& levels) {
  std::map<int, std::vector<Rule>> out;
  for (const Rule& r : db.rules()) out[levels.at(r.head.predicate)].push_back(r);
  return out;
}

}  // namespace

Model standard_model(const Database& db) {
  std::map<std::string, int> levels = stratum_levels(db);
  Model m(db);
  std::uint64_t reads = 0;

  for (const auto& [level, rules] : rules_by_level(db, levels)) {
    // Full round first, then semi-naive rounds driven by the delta.
    std::set<Atom> known;
    std::vector<Atom> delta;
    for (const Rule& r : rules)
      for (Atom& a : eval_rule(m, r, static_cast<std::size_t>(-1), nullptr, reads))
        if (known.insert(a).second) delta.push_back(a);
    m.add_derived(delta);

    while (!delta.empty()) {
      std::map<std::string, std::vector<Atom>> delta_by_pred;
      for (const Atom& a : delta) delta_by_pred[a.predicate].push_back(a);
      for (auto& [pred, atoms] : delta_by_pred) std::sort(atoms.begin(), atoms.end());

      std::vector<Atom> next;
      for (const Rule& r : rules) {
        for (std::size_t i = 0; i < r.body.size(); ++i) {
          const Literal& l = r.body[i];
          if (l.negative) continue;
          auto lit_level = levels.find(l.atom.predicate);
          if (lit_level == levels.end() || lit_level->second != level) continue;
          if (db.is_extensional(l.atom.predicate)) continue;
          auto dit = delta_by_pred.find(l.atom.predicate);
          if (dit == delta_by_pred.end()) continue;
          for (Atom& a : eval_rule(m, r, i, &dit->second, reads))
            if (known.insert(a).second) next.push_back(a);
        }
      }
      m.add_derived(next);
      delta = std::move(next);
    }
  }
  m.note_retrievals(reads);
  return m;
}

Model naive_standard_model(const Database& db) {
  std::map<std::string, int> levels = stratum_levels(db);
  Model m(db);
  std::uint64_t reads = 0;

  for (const auto& [level, rules] : rules_by_level(db, levels)) {
    std::set<Atom> known;
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<Atom> fresh;
      for (const Rule& r : rules)
        for (Atom& a : eval_rule(m, r, static_cast<std::size_t>(-1), nullptr, reads))
          if (known.insert(a).second) fresh.push_back(a);
      if (!fresh.empty()) {
        m.add_derived(fresh);
        changed = true;
      }
    }
  }
  m.note_retrievals(reads);
  return m;
}

}  // namespace icheck
