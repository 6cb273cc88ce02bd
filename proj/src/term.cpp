#include "icheck/term.hpp"

#include <algorithm>

namespace icheck {

bool Atom::is_ground() const {
  return std::none_of(args.begin(), args.end(),
                      [](const Term& t) { return t.is_variable(); });
}

bool Atom::has_parameters() const {
  return std::any_of(args.begin(), args.end(),
                     [](const Term& t) { return t.is_parameter(); });
}

Substitution::Substitution(std::map<std::string, Term> bindings)
    : bindings_(std::move(bindings)) {
  for (const auto& [var, term] : bindings_) {
    if (term.is_variable()) {
      if (term.name == var)
        throw InputError("substitution binds variable " + var + " to itself");
      if (bindings_.count(term.name) != 0)
        throw InputError("substitution is not idempotent: " + var + " maps into the domain");
    }
  }
}

Term Substitution::apply(const Term& t) const {
  if (t.is_variable()) {
    auto it = bindings_.find(t.name);
    if (it != bindings_.end()) return it->second;
  }
  return t;
}

Atom Substitution::apply(const Atom& a) const {
  Atom out = a;
  for (Term& t : out.args) t = apply(t);
  return out;
}

Literal Substitution::apply(const Literal& l) const {
  return Literal{l.negative, apply(l.atom)};
}

namespace {

// Follow variable bindings to the end of the chain.
Term walk(Term t, const std::map<std::string, Term>& bind) {
  while (t.is_variable()) {
    auto it = bind.find(t.name);
    if (it == bind.end()) break;
    t = it->second;
  }
  return t;
}

}  // namespace

std::optional<Substitution> unify(const Atom& a, const Atom& b) {
  if (a.predicate == b.predicate && a.arity() != b.arity())
    throw VocabularyError("arity mismatch for predicate '" + a.predicate + "': " +
                          std::to_string(a.arity()) + " vs " + std::to_string(b.arity()));
  if (a.predicate != b.predicate) return std::nullopt;

  std::map<std::string, Term> bind;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    Term x = walk(a.args[i], bind);
    Term y = walk(b.args[i], bind);
    if (x == y) continue;
    if (x.is_variable() && y.is_variable()) {
      if (y.name < x.name) std::swap(x, y);
      bind.insert_or_assign(x.name, y);
    } else if (x.is_variable()) {
      bind.insert_or_assign(x.name, y);
    } else if (y.is_variable()) {
      bind.insert_or_assign(y.name, x);
    } else {
      return std::nullopt;  // distinct constants/parameters
    }
  }
  // Flatten chains so the result is idempotent.
  for (auto& [var, term] : bind) term = walk(term, bind);
  return Substitution(std::move(bind));
}

void collect_variables(const Term& t, std::set<std::string>& out) {
  if (t.is_variable()) out.insert(t.name);
}

void collect_variables(const Atom& a, std::set<std::string>& out) {
  for (const Term& t : a.args) collect_variables(t, out);
}

void collect_variables(const Literal& l, std::set<std::string>& out) {
  collect_variables(l.atom, out);
}

void collect_constants(const Term& t, std::set<std::string>& out) {
  if (t.is_constant()) out.insert(t.name);
}

void collect_constants(const Atom& a, std::set<std::string>& out) {
  for (const Term& t : a.args) collect_constants(t, out);
}

void collect_parameters(const Term& t, std::set<std::string>& out) {
  if (t.is_parameter()) out.insert(t.name);
}

void collect_parameters(const Atom& a, std::set<std::string>& out) {
  for (const Term& t : a.args) collect_parameters(t, out);
}

}  // namespace icheck
