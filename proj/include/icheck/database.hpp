#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "icheck/clause.hpp"

namespace icheck {

// A deductive database: a set of ground extensional facts plus a rule set
// defining intensional predicates. Extensional and intensional predicate
// names are disjoint; arities are fixed per predicate. Immutable after
// construction.
//
// `declared` lets callers put predicates into the vocabulary that happen to
// have no facts in this state (an empty database can still be asked about
// p/1).
class Database {
 public:
  Database() = default;
  Database(std::set<Atom> facts, std::vector<Rule> rules = {},
           std::map<std::string, std::size_t> declared = {});

  const std::set<Atom>& facts() const { return facts_; }
  const std::vector<Rule>& rules() const { return rules_; }

  // Every known predicate, extensional and intensional, with its arity.
  const std::map<std::string, std::size_t>& signatures() const { return signatures_; }

  bool knows(const std::string& predicate) const { return signatures_.count(predicate) != 0; }
  bool is_intensional(const std::string& predicate) const { return intensional_.count(predicate) != 0; }
  bool is_extensional(const std::string& predicate) const {
    return knows(predicate) && !is_intensional(predicate);
  }

  // Same rules and vocabulary, different fact set.
  Database with_facts(std::set<Atom> facts) const;

  // Equality of content: fact set and rule set.
  bool operator==(const Database& o) const { return facts_ == o.facts_ && rules_ == o.rules_; }

 private:
  std::set<Atom> facts_;
  std::vector<Rule> rules_;
  std::map<std::string, std::size_t> signatures_;
  std::set<std::string> intensional_;
};

}  // namespace icheck
