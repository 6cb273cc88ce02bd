#include "icheck/database.hpp"

namespace icheck {

namespace {

void note_signature(std::map<std::string, std::size_t>& sig, const Atom& a) {
  auto [it, inserted] = sig.emplace(a.predicate, a.arity());
  if (!inserted && it->second != a.arity())
    throw VocabularyError("arity mismatch for predicate '" + a.predicate + "': " +
                          std::to_string(it->second) + " vs " + std::to_string(a.arity()));
}

}  // namespace

Database::Database(std::set<Atom> facts, std::vector<Rule> rules,
                   std::map<std::string, std::size_t> declared)
    : facts_(std::move(facts)), rules_(std::move(rules)), signatures_(std::move(declared)) {
  for (const Rule& r : rules_) {
    note_signature(signatures_, r.head);
    intensional_.insert(r.head.predicate);
    for (const Literal& l : r.body) note_signature(signatures_, l.atom);
  }
  for (const Atom& f : facts_) {
    if (!f.is_ground() || f.has_parameters())
      throw InputError("fact " + f.predicate + "/" + std::to_string(f.arity()) +
                       " is not ground");
    note_signature(signatures_, f);
    if (intensional_.count(f.predicate) != 0)
      throw InputError("predicate '" + f.predicate +
                       "' has both facts and rules; extensional and intensional "
                       "predicates must be disjoint");
  }
}

Database Database::with_facts(std::set<Atom> facts) const {
  Database out;
  out.rules_ = rules_;
  out.signatures_ = signatures_;
  out.intensional_ = intensional_;
  for (const Atom& f : facts) {
    if (!f.is_ground() || f.has_parameters())
      throw InputError("fact " + f.predicate + " is not ground");
    auto it = out.signatures_.find(f.predicate);
    if (it == out.signatures_.end())
      out.signatures_.emplace(f.predicate, f.arity());
    else if (it->second != f.arity())
      throw VocabularyError("arity mismatch for predicate '" + f.predicate + "'");
    if (out.intensional_.count(f.predicate) != 0)
      throw InputError("cannot store facts for intensional predicate '" + f.predicate + "'");
  }
  out.facts_ = std::move(facts);
  return out;
}

}  // namespace icheck
