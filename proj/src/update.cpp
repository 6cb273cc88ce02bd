#include "icheck/update.hpp"

#include <algorithm>

namespace icheck {

namespace {

bool delta_is_ground(const FactDelta& d) {
  auto ground = [](const Atom& a) { return a.is_ground() && !a.has_parameters(); };
  return std::all_of(d.insertions.begin(), d.insertions.end(), ground) &&
         std::all_of(d.deletions.begin(), d.deletions.end(), ground);
}

void validate_delta(const FactDelta& d) {
  for (const Atom& a : d.insertions) {
    if (!a.is_ground())
      throw InputError("update atom " + a.predicate + " contains variables");
    if (d.deletions.count(a) != 0 && !a.has_parameters())
      throw InputError("update inserts and deletes the same fact for predicate '" +
                       a.predicate + "'");
  }
  for (const Atom& a : d.deletions)
    if (!a.is_ground())
      throw InputError("update atom " + a.predicate + " contains variables");
}

// Sequential composition of two ground deltas collapses to one: a fact is
// present afterwards iff the second step inserts it, or keeps it and the
// first step's verdict lets it through.
FactDelta merge_deltas(const FactDelta& first, const FactDelta& second) {
  FactDelta out;
  out.insertions = second.insertions;
  for (const Atom& a : first.insertions)
    if (second.deletions.count(a) == 0) out.insertions.insert(a);
  for (const Atom& a : first.deletions)
    if (out.insertions.count(a) == 0) out.deletions.insert(a);
  for (const Atom& a : second.deletions)
    if (out.insertions.count(a) == 0) out.deletions.insert(a);
  return out;
}

void validate_map(const RelationMap& m) {
  if (m.mapping.empty()) throw InputError("relation mapping must be nonempty");
}

}  // namespace

void Update::push(UpdateStep step) {
  if (const FactDelta* d = std::get_if<FactDelta>(&step)) {
    validate_delta(*d);
    if (d->empty()) return;
    if (!steps_.empty()) {
      if (FactDelta* prev = std::get_if<FactDelta>(&steps_.back());
          prev && delta_is_ground(*prev) && delta_is_ground(*d)) {
        FactDelta merged = merge_deltas(*prev, *d);
        validate_delta(merged);
        if (merged.empty())
          steps_.pop_back();
        else
          steps_.back() = std::move(merged);
        return;
      }
    }
  } else {
    validate_map(std::get<RelationMap>(step));
  }
  steps_.push_back(std::move(step));
}

Update Update::fact_delta(std::set<Atom> insertions, std::set<Atom> deletions) {
  Update u;
  u.push(FactDelta{std::move(insertions), std::move(deletions)});
  return u;
}

Update Update::insertion(std::set<Atom> atoms) { return fact_delta(std::move(atoms), {}); }
Update Update::deletion(std::set<Atom> atoms) { return fact_delta({}, std::move(atoms)); }

Update Update::relation_map(std::map<std::string, std::string> target_to_source) {
  Update u;
  u.push(RelationMap{std::move(target_to_source)});
  return u;
}

Update Update::swap(const std::string& p, const std::string& q) {
  return relation_map({{p, q}, {q, p}});
}

Update Update::then(const Update& next) const {
  Update u = *this;
  for (const UpdateStep& s : next.steps_) u.push(s);
  return u;
}

bool Update::is_pure_fact_delta() const {
  return steps_.empty() ||
         (steps_.size() == 1 && std::holds_alternative<FactDelta>(steps_[0]));
}

const FactDelta* Update::as_fact_delta() const {
  static const FactDelta empty;
  if (steps_.empty()) return &empty;
  if (steps_.size() == 1) return std::get_if<FactDelta>(&steps_[0]);
  return nullptr;
}

bool Update::has_parameters() const { return !parameter_names().empty(); }

std::set<std::string> Update::parameter_names() const {
  std::set<std::string> out;
  for (const UpdateStep& s : steps_) {
    if (const FactDelta* d = std::get_if<FactDelta>(&s)) {
      for (const Atom& a : d->insertions) collect_parameters(a, out);
      for (const Atom& a : d->deletions) collect_parameters(a, out);
    }
  }
  return out;
}

Database apply(const Update& u, const Database& db) {
  if (u.has_parameters())
    throw InstantiationError("update contains parameters; instantiate them before applying");
  std::set<Atom> facts = db.facts();
  for (const UpdateStep& s : u.steps()) {
    if (const FactDelta* d = std::get_if<FactDelta>(&s)) {
      auto check = [&db](const Atom& a) {
        auto it = db.signatures().find(a.predicate);
        if (it == db.signatures().end())
          throw VocabularyError("update mentions unknown predicate '" + a.predicate + "'");
        if (it->second != a.arity())
          throw VocabularyError("arity mismatch for predicate '" + a.predicate + "' in update");
        if (db.is_intensional(a.predicate))
          throw InputError("update touches intensional predicate '" + a.predicate + "'");
      };
      for (const Atom& a : d->deletions) {
        check(a);
        facts.erase(a);
      }
      for (const Atom& a : d->insertions) {
        check(a);
        facts.insert(a);
      }
    } else {
      const RelationMap& m = std::get<RelationMap>(s);
      for (const auto& [target, source] : m.mapping) {
        for (const std::string& pred : {target, source}) {
          if (!db.knows(pred))
            throw VocabularyError("update mentions unknown predicate '" + pred + "'");
          if (db.is_intensional(pred))
            throw InputError("update touches intensional predicate '" + pred + "'");
        }
        if (db.signatures().at(target) != db.signatures().at(source))
          throw VocabularyError("relation mapping " + target + " <- " + source +
                                " joins predicates of different arities");
      }
      std::set<Atom> snapshot = facts;
      for (const auto& [target, source] : m.mapping)
        std::erase_if(facts, [&target](const Atom& a) { return a.predicate == target; });
      for (const auto& [target, source] : m.mapping)
        for (const Atom& a : snapshot)
          if (a.predicate == source) facts.insert(Atom{target, a.args});
    }
  }
  return db.with_facts(std::move(facts));
}

Update instantiate(const Update& u, const std::map<std::string, std::string>& binding) {
  auto ground_atom = [&binding](const Atom& a) {
    Atom out = a;
    for (Term& t : out.args) {
      if (!t.is_parameter()) continue;
      auto it = binding.find(t.name);
      if (it == binding.end())
        throw InstantiationError("parameter $" + t.name + " has no binding");
      t = Term::constant(it->second);
    }
    return out;
  };
  Update out;
  for (const UpdateStep& s : u.steps()) {
    if (const FactDelta* d = std::get_if<FactDelta>(&s)) {
      FactDelta g;
      for (const Atom& a : d->insertions) g.insertions.insert(ground_atom(a));
      for (const Atom& a : d->deletions) g.deletions.insert(ground_atom(a));
      out = out.then(Update::fact_delta(std::move(g.insertions), std::move(g.deletions)));
    } else {
      out = out.then(Update::relation_map(std::get<RelationMap>(s).mapping));
    }
  }
  return out;
}

bool idempotent_by_construction(const Update& u) { return u.is_pure_fact_delta(); }

Verdict is_idempotent(const Update& u, const EnumerationSpace& space) {
  if (u.has_parameters())
    throw InstantiationError("update contains parameters; instantiate them before checking");
  if (idempotent_by_construction(u))
    return Verdict::certify(0, "idempotent by construction: a fact delta has a fixed image",
                            /*bounded=*/false);
  space.ensure_within_budget();
  const std::uint64_t n = space.database_count();
  for (std::uint64_t mask = 0; mask < n; ++mask) {
    Database d = space.database_at(mask);
    Database once = apply(u, d);
    Database twice = apply(u, once);
    if (!(once == twice))
      return Verdict::refute(std::move(d), "D^U != (D^U)^U", n);
  }
  return Verdict::certify(n, "D^U = (D^U)^U on every database of the space");
}

void collect_constants(const Update& u, std::set<std::string>& out) {
  for (const UpdateStep& s : u.steps()) {
    if (const FactDelta* d = std::get_if<FactDelta>(&s)) {
      for (const Atom& a : d->insertions) collect_constants(a, out);
      for (const Atom& a : d->deletions) collect_constants(a, out);
    }
  }
}

std::map<std::string, std::size_t> update_signatures(const Update& u) {
  std::map<std::string, std::size_t> out;
  auto note = [&out](const std::string& pred, std::size_t arity) {
    auto [it, inserted] = out.emplace(pred, arity);
    if (!inserted && it->second != arity)
      throw VocabularyError("arity mismatch for predicate '" + pred + "' in update");
  };
  for (const UpdateStep& s : u.steps()) {
    if (const FactDelta* d = std::get_if<FactDelta>(&s)) {
      for (const Atom& a : d->insertions) note(a.predicate, a.arity());
      for (const Atom& a : d->deletions) note(a.predicate, a.arity());
    }
  }
  return out;
}

}  // namespace icheck
