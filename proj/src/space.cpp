#include "icheck/space.hpp"

#include <algorithm>

namespace icheck {

namespace {

void ground_atoms(const std::string& pred, std::size_t arity,
                  const std::vector<std::string>& universe, std::vector<Term>& prefix,
                  std::vector<Atom>& out) {
  if (prefix.size() == arity) {
    out.push_back(Atom{pred, prefix});
    return;
  }
  for (const std::string& c : universe) {
    prefix.push_back(Term::constant(c));
    ground_atoms(pred, arity, universe, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

EnumerationSpace::EnumerationSpace(std::vector<std::string> universe,
                                   std::map<std::string, std::size_t> vocabulary,
                                   std::vector<Rule> rules, std::uint64_t max_databases)
    : universe_(std::move(universe)),
      vocabulary_(std::move(vocabulary)),
      rules_(std::move(rules)),
      max_databases_(max_databases) {
  if (universe_.empty()) throw InputError("enumeration universe must be nonempty");
  std::sort(universe_.begin(), universe_.end());
  universe_.erase(std::unique(universe_.begin(), universe_.end()), universe_.end());

  signatures_ = vocabulary_;
  std::set<std::string> intensional;
  for (const Rule& r : rules_) {
    intensional.insert(r.head.predicate);
    auto note = [this](const Atom& a) {
      auto [it, inserted] = signatures_.emplace(a.predicate, a.arity());
      if (!inserted && it->second != a.arity())
        throw VocabularyError("arity mismatch for predicate '" + a.predicate + "'");
    };
    note(r.head);
    for (const Literal& l : r.body) note(l.atom);
  }
  for (const auto& [pred, arity] : vocabulary_) {
    if (intensional.count(pred) != 0)
      throw InputError("predicate '" + pred +
                       "' is defined by rules and cannot be enumerated extensionally");
    std::vector<Term> prefix;
    ground_atoms(pred, arity, universe_, prefix, base_);
  }
  std::sort(base_.begin(), base_.end());
}

std::uint64_t EnumerationSpace::database_count() const {
  ensure_within_budget();
  return 1ull << base_.size();
}

void EnumerationSpace::ensure_within_budget() const {
  if (base_.size() >= 63 || (1ull << base_.size()) > max_databases_)
    throw ResourceError("enumeration space has 2^" + std::to_string(base_.size()) +
                        " databases, exceeding the budget of " +
                        std::to_string(max_databases_));
}

Database EnumerationSpace::database_at(std::uint64_t mask) const {
  std::set<Atom> facts;
  for (std::size_t j = 0; j < base_.size(); ++j)
    if (mask & (1ull << j)) facts.insert(base_[j]);
  return Database(std::move(facts), rules_, signatures_);
}

}  // namespace icheck
