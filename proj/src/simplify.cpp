#include "icheck/simplify.hpp"

#include <algorithm>
#include <memory>

namespace icheck {

namespace {

// ---------------------------------------------------------------------------
// Formula tree over literal and comparison leaves. Built by unfolding and
// regression, then distributed to DNF.

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind { True, False, Lit, Cmp, And, Or } kind;
  Literal lit;        // Kind::Lit
  std::optional<TermConstraint> cmp;  // Kind::Cmp
  std::vector<FormulaPtr> children;   // And/Or
};

FormulaPtr f_true() {
  static FormulaPtr t = std::make_shared<Formula>(Formula{Formula::Kind::True, {}, {}, {}});
  return t;
}
FormulaPtr f_false() {
  static FormulaPtr f = std::make_shared<Formula>(Formula{Formula::Kind::False, {}, {}, {}});
  return f;
}
FormulaPtr f_lit(Literal l) {
  return std::make_shared<Formula>(Formula{Formula::Kind::Lit, std::move(l), {}, {}});
}
FormulaPtr f_cmp(TermConstraint c) {
  return std::make_shared<Formula>(Formula{Formula::Kind::Cmp, {}, std::move(c), {}});
}
FormulaPtr f_and(std::vector<FormulaPtr> cs) {
  std::vector<FormulaPtr> flat;
  for (FormulaPtr& c : cs) {
    if (c->kind == Formula::Kind::False) return f_false();
    if (c->kind == Formula::Kind::True) continue;
    if (c->kind == Formula::Kind::And)
      flat.insert(flat.end(), c->children.begin(), c->children.end());
    else
      flat.push_back(std::move(c));
  }
  if (flat.empty()) return f_true();
  if (flat.size() == 1) return flat[0];
  return std::make_shared<Formula>(Formula{Formula::Kind::And, {}, {}, std::move(flat)});
}
FormulaPtr f_or(std::vector<FormulaPtr> cs) {
  std::vector<FormulaPtr> flat;
  for (FormulaPtr& c : cs) {
    if (c->kind == Formula::Kind::True) return f_true();
    if (c->kind == Formula::Kind::False) continue;
    if (c->kind == Formula::Kind::Or)
      flat.insert(flat.end(), c->children.begin(), c->children.end());
    else
      flat.push_back(std::move(c));
  }
  if (flat.empty()) return f_false();
  if (flat.size() == 1) return flat[0];
  return std::make_shared<Formula>(Formula{Formula::Kind::Or, {}, {}, std::move(flat)});
}

// ---------------------------------------------------------------------------
// View unfolding

struct Unfolder {
  std::map<std::string, std::vector<Rule>> rules_by_pred;
  std::set<std::string> used_vars;
  std::size_t fresh_counter = 0;

  explicit Unfolder(const std::vector<Rule>& rules) {
    for (const Rule& r : rules) rules_by_pred[r.head.predicate].push_back(r);
  }

  std::string fresh_var() {
    std::string name;
    do {
      name = "V" + std::to_string(++fresh_counter);
    } while (used_vars.count(name) != 0);
    used_vars.insert(name);
    return name;
  }

  Rule rename_fresh(const Rule& r, std::set<std::string>& fresh_names) {
    std::set<std::string> vars;
    collect_variables(r.head, vars);
    for (const Literal& l : r.body) collect_variables(l.atom, vars);
    std::map<std::string, Term> renaming;
    for (const std::string& v : vars) {
      std::string f = fresh_var();
      fresh_names.insert(f);
      renaming.emplace(v, Term::variable(f));
    }
    Substitution s{std::move(renaming)};
    std::vector<Literal> body;
    for (const Literal& l : r.body) body.push_back(s.apply(l));
    return Rule(s.apply(r.head), std::move(body));
  }

  // Unifies the renamed rule head with the atom, preferring the rule's own
  // fresh variables as binding keys so that outer variables survive in the
  // result. Returns the bindings or nothing when the head cannot match.
  static std::optional<std::map<std::string, Term>> head_match(
      const Atom& head, const Atom& atom, const std::set<std::string>& fresh_names) {
    if (head.predicate != atom.predicate || head.arity() != atom.arity()) return std::nullopt;
    std::map<std::string, Term> bind;
    auto walk = [&bind](Term t) {
      while (t.is_variable()) {
        auto it = bind.find(t.name);
        if (it == bind.end()) break;
        t = it->second;
      }
      return t;
    };
    for (std::size_t i = 0; i < head.args.size(); ++i) {
      Term x = walk(head.args[i]);
      Term y = walk(atom.args[i]);
      if (x == y) continue;
      bool xv = x.is_variable(), yv = y.is_variable();
      if (xv && yv) {
        bool xf = fresh_names.count(x.name) != 0, yf = fresh_names.count(y.name) != 0;
        if (xf == yf) {
          if (y.name < x.name) std::swap(x, y);
          bind.insert_or_assign(x.name, y);
        } else if (xf) {
          bind.insert_or_assign(x.name, y);
        } else {
          bind.insert_or_assign(y.name, x);
        }
      } else if (xv) {
        bind.insert_or_assign(x.name, y);
      } else if (yv) {
        bind.insert_or_assign(y.name, x);
      } else {
        return std::nullopt;
      }
    }
    for (auto& [v, t] : bind) t = walk(t);
    return bind;
  }

  FormulaPtr unfold(const Literal& l, std::vector<std::string>& stack) {
    auto it = rules_by_pred.find(l.atom.predicate);
    if (it == rules_by_pred.end()) return f_lit(l);

    if (std::find(stack.begin(), stack.end(), l.atom.predicate) != stack.end()) {
      std::string cycle;
      for (const std::string& p : stack) cycle += p + " -> ";
      throw UnsupportedError("constraint refers to recursive view '" + l.atom.predicate +
                             "' (cycle: " + cycle + l.atom.predicate +
                             "); recursive views cannot be simplified");
    }
    stack.push_back(l.atom.predicate);

    std::set<std::string> outer;
    collect_variables(l.atom, outer);
    used_vars.insert(outer.begin(), outer.end());

    std::vector<FormulaPtr> per_rule;
    for (const Rule& rule : it->second) {
      if (l.negative) {
        std::set<std::string> head_vars, body_vars;
        collect_variables(rule.head, head_vars);
        for (const Literal& b : rule.body) collect_variables(b.atom, body_vars);
        for (const std::string& v : body_vars)
          if (head_vars.count(v) == 0)
            throw UnsupportedError("negated view '" + l.atom.predicate +
                                   "' has rule-local variables and is not expressible "
                                   "in denial form");
      }
      std::set<std::string> fresh_names;
      Rule renamed = rename_fresh(rule, fresh_names);
      auto bind = head_match(renamed.head, l.atom, fresh_names);
      if (!bind) {
        if (l.negative) continue;  // this rule can never derive the instance
        per_rule.push_back(f_false());
        continue;
      }
      Substitution theta{std::map<std::string, Term>(*bind)};

      std::vector<FormulaPtr> eqs;
      for (const std::string& v : outer) {
        auto b = bind->find(v);
        if (b != bind->end()) {
          eqs.push_back(l.negative ? f_cmp(neq(Term::variable(v), b->second))
                                   : f_cmp(eq(Term::variable(v), b->second)));
        }
      }

      if (!l.negative) {
        std::vector<FormulaPtr> parts = std::move(eqs);
        for (const Literal& b : rule.body) parts.push_back(unfold(theta.apply(b), stack));
        per_rule.push_back(f_and(std::move(parts)));
      } else {
        // Not derivable via this rule: the head fails to match, or some
        // body literal fails.
        std::vector<FormulaPtr> parts = std::move(eqs);
        for (const Literal& b : rule.body) {
          Literal flipped{!b.negative, b.atom};
          parts.push_back(unfold(theta.apply(flipped), stack));
        }
        per_rule.push_back(f_or(std::move(parts)));
      }
    }
    stack.pop_back();
    return l.negative ? f_and(std::move(per_rule)) : f_or(std::move(per_rule));
  }
};

// ---------------------------------------------------------------------------
// Regression through an update, one step at a time, last step first.

FormulaPtr tuple_eq(const std::vector<Term>& ts, const Atom& ground) {
  std::vector<FormulaPtr> parts;
  for (std::size_t i = 0; i < ts.size(); ++i) parts.push_back(f_cmp(eq(ts[i], ground.args[i])));
  return f_and(std::move(parts));
}

FormulaPtr tuple_neq(const std::vector<Term>& ts, const Atom& ground) {
  std::vector<FormulaPtr> parts;
  for (std::size_t i = 0; i < ts.size(); ++i) parts.push_back(f_cmp(neq(ts[i], ground.args[i])));
  return f_or(std::move(parts));
}

FormulaPtr regress_leaf(const Literal& l, const UpdateStep& step) {
  if (const RelationMap* m = std::get_if<RelationMap>(&step)) {
    auto it = m->mapping.find(l.atom.predicate);
    if (it == m->mapping.end()) return f_lit(l);
    return f_lit(Literal{l.negative, Atom{it->second, l.atom.args}});
  }

  const FactDelta& d = std::get<FactDelta>(step);
  std::vector<const Atom*> ins, del;
  for (const Atom& a : d.insertions)
    if (a.predicate == l.atom.predicate && a.arity() == l.atom.arity()) ins.push_back(&a);
  for (const Atom& a : d.deletions)
    if (a.predicate == l.atom.predicate && a.arity() == l.atom.arity()) del.push_back(&a);
  if (ins.empty() && del.empty()) return f_lit(l);

  if (l.positive()) {
    // held before and not deleted, or freshly inserted
    std::vector<FormulaPtr> keep{f_lit(l)};
    for (const Atom* a : del) keep.push_back(tuple_neq(l.atom.args, *a));
    std::vector<FormulaPtr> branches{f_and(std::move(keep))};
    for (const Atom* a : ins) branches.push_back(tuple_eq(l.atom.args, *a));
    return f_or(std::move(branches));
  }
  // absent before or deleted, and not inserted
  std::vector<FormulaPtr> gone{f_lit(l)};
  for (const Atom* a : del) gone.push_back(tuple_eq(l.atom.args, *a));
  std::vector<FormulaPtr> parts{f_or(std::move(gone))};
  for (const Atom* a : ins) parts.push_back(tuple_neq(l.atom.args, *a));
  return f_and(std::move(parts));
}

FormulaPtr regress(const FormulaPtr& f, const UpdateStep& step) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Cmp:
      return f;
    case Formula::Kind::Lit:
      return regress_leaf(f->lit, step);
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<FormulaPtr> children;
      children.reserve(f->children.size());
      for (const FormulaPtr& c : f->children) children.push_back(regress(c, step));
      return f->kind == Formula::Kind::And ? f_and(std::move(children))
                                           : f_or(std::move(children));
    }
  }
  return f;
}

FormulaPtr regress(FormulaPtr f, const Update& u) {
  const auto& steps = u.steps();
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) f = regress(f, *it);
  return f;
}

// ---------------------------------------------------------------------------
// DNF distribution

struct Branch {
  std::vector<Literal> lits;
  std::vector<TermConstraint> cmps;
};

void dnf(const FormulaPtr& f, std::vector<Branch>& out, std::size_t cap,
         const std::string& origin) {
  auto guard = [&out, cap, &origin]() {
    if (out.size() > cap)
      throw ResourceError("simplification of denial '" + origin + "' expanded past the cap of " +
                          std::to_string(cap) + " branches; raise the cap to proceed");
  };
  switch (f->kind) {
    case Formula::Kind::False:
      return;
    case Formula::Kind::True:
      out.push_back({});
      guard();
      return;
    case Formula::Kind::Lit:
      out.push_back(Branch{{f->lit}, {}});
      guard();
      return;
    case Formula::Kind::Cmp:
      out.push_back(Branch{{}, {*f->cmp}});
      guard();
      return;
    case Formula::Kind::Or:
      for (const FormulaPtr& c : f->children) dnf(c, out, cap, origin);
      return;
    case Formula::Kind::And: {
      std::vector<Branch> acc{{}};
      for (const FormulaPtr& c : f->children) {
        std::vector<Branch> child;
        dnf(c, child, cap, origin);
        std::vector<Branch> next;
        next.reserve(acc.size() * child.size());
        for (const Branch& a : acc)
          for (const Branch& b : child) {
            Branch merged = a;
            merged.lits.insert(merged.lits.end(), b.lits.begin(), b.lits.end());
            merged.cmps.insert(merged.cmps.end(), b.cmps.begin(), b.cmps.end());
            next.push_back(std::move(merged));
            if (next.size() > cap)
              throw ResourceError("simplification of denial '" + origin +
                                  "' expanded past the cap of " + std::to_string(cap) +
                                  " branches; raise the cap to proceed");
          }
        acc = std::move(next);
      }
      for (Branch& b : acc) out.push_back(std::move(b));
      guard();
      return;
    }
  }
}

// ---------------------------------------------------------------------------
// Branch resolution: equalities bind variables or merge ground symbols,
// disequalities simplify or remain as side conditions, literals are
// deduplicated, contradictions kill the branch.

struct SymbolClasses {
  std::map<Term, Term> parent;

  Term find(Term t) {
    auto it = parent.find(t);
    if (it == parent.end()) return t;
    Term root = find(it->second);
    it->second = root;
    return root;
  }

  // Returns false when the merge equates two distinct constants.
  bool unite(const Term& a, const Term& b) {
    Term ra = find(a), rb = find(b);
    if (ra == rb) return true;
    if (ra.is_constant() && rb.is_constant()) return false;
    if (rb.is_constant())
      parent.insert_or_assign(ra, rb);
    else if (ra.is_constant())
      parent.insert_or_assign(rb, ra);
    else
      parent.insert_or_assign(std::max(ra, rb), std::min(ra, rb));
    return true;
  }
};

std::optional<Denial> resolve_branch(const Branch& branch) {
  std::map<std::string, Term> bind;
  SymbolClasses classes;

  auto canon = [&](Term t) {
    while (t.is_variable()) {
      auto it = bind.find(t.name);
      if (it == bind.end()) break;
      t = it->second;
    }
    if (t.is_ground()) t = classes.find(t);
    return t;
  };

  std::vector<TermConstraint> pending_neq;
  for (const TermConstraint& c : branch.cmps) {
    if (c.rel == TermConstraint::Rel::NotEqual) {
      pending_neq.push_back(c);
      continue;
    }
    Term l = canon(c.lhs), r = canon(c.rhs);
    if (l == r) continue;
    if (l.is_variable() || r.is_variable()) {
      if (l.is_variable() && r.is_variable()) {
        if (r.name < l.name) std::swap(l, r);
        bind.insert_or_assign(l.name, r);
      } else if (l.is_variable()) {
        bind.insert_or_assign(l.name, r);
      } else {
        bind.insert_or_assign(r.name, l);
      }
    } else if (!classes.unite(l, r)) {
      return std::nullopt;  // two distinct constants forced equal
    }
  }

  // Parameter classes become equality side conditions against their
  // representative.
  std::vector<TermConstraint> conds;
  {
    std::set<Term> seen;
    for (const auto& [t, p] : classes.parent) seen.insert(t);
    for (const Term& t : seen) {
      if (!t.is_parameter()) continue;
      Term root = classes.find(t);
      if (root != t) conds.push_back(eq(t, root));
    }
  }

  for (const TermConstraint& c : pending_neq) {
    Term l = canon(c.lhs), r = canon(c.rhs);
    if (l == r) return std::nullopt;
    if (l.is_variable() || r.is_variable()) {
      conds.push_back(neq(l, r));
    } else if (l.is_constant() && r.is_constant()) {
      continue;  // distinct constants, trivially true
    } else {
      conds.push_back(neq(l, r));  // parameter against constant or parameter
    }
  }

  std::vector<Literal> lits;
  std::set<Atom> pos_seen, neg_seen;
  for (const Literal& l : branch.lits) {
    Atom a = l.atom;
    for (Term& t : a.args) t = canon(t);
    if (l.positive()) {
      if (neg_seen.count(a) != 0) return std::nullopt;
      if (pos_seen.insert(a).second) lits.push_back(Literal{false, a});
    } else {
      if (pos_seen.count(a) != 0) return std::nullopt;
      if (neg_seen.insert(a).second) lits.push_back(Literal{true, a});
    }
  }
  // A second pass: contradictions may pair a later positive with an earlier
  // negative occurrence.
  for (const Atom& a : pos_seen)
    if (neg_seen.count(a) != 0) return std::nullopt;

  std::sort(conds.begin(), conds.end());
  conds.erase(std::unique(conds.begin(), conds.end()), conds.end());
  return Denial(std::move(lits), std::move(conds));
}

// ---------------------------------------------------------------------------
// Theory assembly

IntegrityTheory assemble(std::vector<Denial> denials) {
  std::set<Denial> unique(std::make_move_iterator(denials.begin()),
                          std::make_move_iterator(denials.end()));
  std::vector<Denial> kept;
  for (const Denial& d : unique) {
    bool redundant = std::any_of(kept.begin(), kept.end(),
                                 [&d](const Denial& k) { return subsumes(k, d); });
    if (redundant) continue;
    std::erase_if(kept, [&d](const Denial& k) { return subsumes(d, k); });
    kept.push_back(d);
  }
  for (const Denial& d : kept)
    if (d.is_falsum()) return IntegrityTheory::falsum();
  return IntegrityTheory(std::set<Denial>(kept.begin(), kept.end()));
}

std::string origin_label(const Denial& d) {
  if (d.body().empty()) return "true";
  std::string s = d.body()[0].atom.predicate;
  if (d.body().size() > 1) s += ", ...";
  return s;
}

// Unfold every denial of gamma against the rules and normalize to denials,
// optionally regressing through an update in between.
std::vector<Denial> unfold_normalize(const IntegrityTheory& gamma, const Update* u,
                                     const std::vector<Rule>& db_rules,
                                     const SimplifyOptions& opt) {
  std::vector<Denial> out;
  for (const Denial& d : gamma.denials) {
    Unfolder unfolder(db_rules);
    for (const Literal& l : d.body()) collect_variables(l.atom, unfolder.used_vars);

    std::vector<FormulaPtr> parts;
    for (const Literal& l : d.body()) {
      std::vector<std::string> stack;
      parts.push_back(unfolder.unfold(l, stack));
    }
    for (const TermConstraint& c : d.side_conditions()) parts.push_back(f_cmp(c));
    FormulaPtr f = f_and(std::move(parts));
    if (u) f = regress(f, *u);

    std::vector<Branch> branches;
    dnf(f, branches, opt.dnf_cap, origin_label(d));
    for (const Branch& b : branches)
      if (std::optional<Denial> resolved = resolve_branch(b)) out.push_back(std::move(*resolved));
  }
  return out;
}

Test make_test(IntegrityTheory theory, EvalState state, Plainness plainness, const Update& u,
               const IntegrityTheory& gamma) {
  return Test{std::move(theory), state, plainness, u, gamma};
}

}  // namespace

Test plain_pre_test(const IntegrityTheory& gamma, const Update& u,
                    const std::vector<Rule>& db_rules, const SimplifyOptions& opt) {
  IntegrityTheory theory = assemble(unfold_normalize(gamma, &u, db_rules, opt));
  return make_test(std::move(theory), EvalState::Pre, Plainness::Plain, u, gamma);
}

Test optimized_pre_test(const IntegrityTheory& gamma, const Update& u,
                        const std::vector<Rule>& db_rules, const SimplifyOptions& opt) {
  Test plain = plain_pre_test(gamma, u, db_rules, opt);
  std::vector<Denial> originals = unfold_normalize(gamma, nullptr, db_rules, opt);

  // A generated denial subsumed by an original constraint can only fire on
  // an inconsistent old state, which the premise excludes.
  std::set<Denial> kept;
  for (const Denial& d : plain.theory.denials) {
    bool covered = std::any_of(originals.begin(), originals.end(),
                               [&d](const Denial& o) { return subsumes(o, d); });
    if (!covered) kept.insert(d);
  }
  return make_test(IntegrityTheory(std::move(kept)), EvalState::Pre, Plainness::Optimized, u,
                   gamma);
}

Test plain_post_test(const IntegrityTheory& gamma, const Update& u,
                     const std::vector<Rule>& db_rules, const SimplifyOptions& opt) {
  if (opt.prefer_regressed_post && idempotent_by_construction(u)) {
    Test pre = plain_pre_test(gamma, u, db_rules, opt);
    return make_test(std::move(pre.theory), EvalState::Post, Plainness::Plain, u, gamma);
  }
  return make_test(gamma, EvalState::Post, Plainness::Plain, u, gamma);
}

namespace {

// Conditional match of a body literal against an update atom: variables of
// the literal bind, constants must coincide, parameter/constant and
// parameter/parameter pairs become equality side conditions.
std::optional<std::pair<Substitution, std::vector<TermConstraint>>> match_against_update(
    const Atom& lit_atom, const Atom& upd_atom) {
  if (lit_atom.predicate != upd_atom.predicate || lit_atom.arity() != upd_atom.arity())
    return std::nullopt;
  std::map<std::string, Term> bind;
  SymbolClasses classes;
  auto canon = [&](Term t) {
    while (t.is_variable()) {
      auto it = bind.find(t.name);
      if (it == bind.end()) break;
      t = it->second;
    }
    if (t.is_ground()) t = classes.find(t);
    return t;
  };
  for (std::size_t i = 0; i < lit_atom.args.size(); ++i) {
    Term l = canon(lit_atom.args[i]), r = canon(upd_atom.args[i]);
    if (l == r) continue;
    if (l.is_variable())
      bind.insert_or_assign(l.name, r);
    else if (r.is_variable())
      bind.insert_or_assign(r.name, l);
    else if (!classes.unite(l, r))
      return std::nullopt;
  }
  for (auto& [v, t] : bind) t = canon(t);

  std::vector<TermConstraint> conds;
  std::set<Term> seen;
  for (const auto& [t, p] : classes.parent) seen.insert(t);
  for (const Term& t : seen) {
    if (!t.is_parameter()) continue;
    Term root = classes.find(t);
    if (root != t) conds.push_back(eq(t, root));
  }
  return std::make_pair(Substitution{std::move(bind)}, std::move(conds));
}

}  // namespace

Test optimized_post_test(const IntegrityTheory& gamma, const Update& u,
                         const std::vector<Rule>& db_rules, const SimplifyOptions& opt) {
  // Relation maps move whole extensions, so old-state consistency says
  // nothing about untouched-looking denials; gamma itself is the valid
  // post-test then.
  if (!u.is_pure_fact_delta())
    return make_test(gamma, EvalState::Post, Plainness::Optimized, u, gamma);
  const FactDelta& delta = *u.as_fact_delta();

  std::vector<Denial> unfolded = unfold_normalize(gamma, nullptr, db_rules, opt);
  std::vector<Denial> emitted;
  for (const Denial& d : unfolded) {
    for (std::size_t i = 0; i < d.body().size(); ++i) {
      const Literal& l = d.body()[i];
      const std::set<Atom>& candidates = l.positive() ? delta.insertions : delta.deletions;
      for (const Atom& a : candidates) {
        auto match = match_against_update(l.atom, a);
        if (!match) continue;
        const auto& [theta, eq_conds] = *match;

        // The matched literal is true in the new state by construction of
        // the update, so it drops out of the instantiated denial.
        std::vector<Literal> body;
        for (std::size_t j = 0; j < d.body().size(); ++j)
          if (j != i) body.push_back(theta.apply(d.body()[j]));
        std::vector<TermConstraint> conds = eq_conds;
        for (const TermConstraint& c : d.side_conditions())
          conds.emplace_back(c.rel, theta.apply(c.lhs), theta.apply(c.rhs));

        // Re-run the branch machinery to simplify resolved (dis)equalities.
        Branch b{std::move(body), std::move(conds)};
        if (std::optional<Denial> resolved = resolve_branch(b))
          emitted.push_back(std::move(*resolved));
      }
    }
  }
  return make_test(assemble(std::move(emitted)), EvalState::Post, Plainness::Optimized, u,
                   gamma);
}

CostReport cost_compare(const Test& t, const IntegrityTheory& gamma, const Database& db) {
  Model m = standard_model(db);
  CostReport report;
  report.retrievals_test = holds(m, t.theory).retrievals;
  report.retrievals_original = holds(m, gamma).retrievals;
  report.literal_count_test = t.theory.literal_count();
  report.literal_count_original = gamma.literal_count();
  return report;
}

}  // namespace icheck
