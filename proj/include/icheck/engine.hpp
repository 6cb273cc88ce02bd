#pragma once

#include <atomic>
#include <cstdint>
#include <memory>

#include "icheck/database.hpp"

namespace icheck {

// The standard model of a stratified database. Atoms are split into the
// extensional store (the database's facts) and the derived store; queries
// against the extensional store count fact retrievals, queries against
// derived atoms do not ("stored facts" are what the cost meter measures).
//
// Models are immutable once built; the retrieval counter is atomic, so
// concurrent checks against a shared model are safe.
class Model {
 public:
  bool is_extensional(const std::string& pred) const { return extensional_.count(pred) != 0; }

  // Sorted extensions; null when the predicate has no atoms in that store.
  const std::vector<Atom>* extensional_store(const std::string& pred) const;
  const std::vector<Atom>* derived_store(const std::string& pred) const;

  // Membership in the model; counts one retrieval for an extensional hit.
  bool contains(const Atom& ground_atom) const;

  const std::map<std::string, std::size_t>& signatures() const { return signatures_; }

  // Cumulative extensional reads: model construction plus every check run
  // against this model so far.
  std::uint64_t retrievals() const { return counter_->load(); }
  void note_retrievals(std::uint64_t n) const { counter_->fetch_add(n); }

  std::set<Atom> true_atoms() const;

 private:
  friend Model standard_model(const Database& db);
  friend Model naive_standard_model(const Database& db);

  explicit Model(const Database& db);
  void add_derived(const std::vector<Atom>& atoms);
  bool derived_contains(const Atom& a) const;

  std::map<std::string, std::vector<Atom>> edb_;
  std::map<std::string, std::vector<Atom>> idb_;
  std::map<std::string, std::size_t> signatures_;
  std::set<std::string> extensional_;
  std::unique_ptr<std::atomic<std::uint64_t>> counter_;
};

struct CheckResult {
  bool satisfied;
  std::uint64_t retrievals;  // extensional reads consumed by this check alone
};

// Ordered partition of all known predicates: positive dependencies stay
// within or below a stratum, negative dependencies point strictly below.
// Throws NotStratifiableError naming the offending cycle.
std::vector<std::vector<std::string>> stratify(const Database& db);

// Iterated least fixpoint, stratum by stratum, with semi-naive evaluation.
Model standard_model(const Database& db);

// Naive fixpoint recomputation; reference implementation kept for
// differential testing against the semi-naive path.
Model naive_standard_model(const Database& db);

bool same_model(const Model& a, const Model& b);

// D |= Gamma: no denial body is satisfiable in the standard model. Stops at
// the first violated denial. Theories must be parameter-free.
CheckResult holds(const Model& m, const IntegrityTheory& gamma);
CheckResult holds(const Database& db, const IntegrityTheory& gamma);
CheckResult holds(const Model& m, const Denial& d);

// All ground instantiations of d's body that are true in the model;
// empty iff d is satisfied.
std::set<std::vector<Literal>> violated_instances(const Database& db, const Denial& d);

}  // namespace icheck
