#pragma once

#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "icheck/database.hpp"
#include "icheck/space.hpp"

namespace icheck {

// Insert/delete sets of extensional atoms, ground or parameterized.
// Ground insertions and deletions must be disjoint.
struct FactDelta {
  std::set<Atom> insertions;
  std::set<Atom> deletions;

  bool empty() const { return insertions.empty() && deletions.empty(); }
  auto operator<=>(const FactDelta&) const = default;
};

// Reassigns relation contents: the new extension of each mapped predicate
// is the old extension of its source; unmapped predicates are unchanged.
// swap(p, q) is the mapping {p <- q, q <- p}.
struct RelationMap {
  std::map<std::string, std::string> mapping;  // target -> source

  auto operator<=>(const RelationMap&) const = default;
};

using UpdateStep = std::variant<FactDelta, RelationMap>;

// A total deterministic mapping on databases: a sequence of steps applied
// in order. Adjacent ground fact deltas are normalized into one, so a
// composition of pure deltas is again a single delta. Rules and integrity
// constraints are never touched.
class Update {
 public:
  Update() = default;  // identity

  static Update fact_delta(std::set<Atom> insertions, std::set<Atom> deletions);
  static Update insertion(std::set<Atom> atoms);
  static Update deletion(std::set<Atom> atoms);
  static Update relation_map(std::map<std::string, std::string> target_to_source);
  static Update swap(const std::string& p, const std::string& q);

  // this, then next.
  Update then(const Update& next) const;

  const std::vector<UpdateStep>& steps() const { return steps_; }
  bool is_identity() const { return steps_.empty(); }

  // True when the update normalizes to a single fact delta (or identity).
  bool is_pure_fact_delta() const;
  const FactDelta* as_fact_delta() const;

  bool has_parameters() const;
  std::set<std::string> parameter_names() const;

  bool operator==(const Update&) const = default;

 private:
  void push(UpdateStep step);

  std::vector<UpdateStep> steps_;
};

// D^U. The update must be ground; atoms must be over extensional
// predicates of db's vocabulary.
Database apply(const Update& u, const Database& db);

// Replaces every parameter by the constant it is bound to. Distinct
// parameters may be bound to the same constant. Throws InstantiationError
// when a parameter has no binding, and InputError when grounding makes an
// insertion collide with a deletion.
Update instantiate(const Update& u, const std::map<std::string, std::string>& binding);

// Pure fact deltas are idempotent by construction: (F \ D u I) is a fixed
// point of the same delta.
bool idempotent_by_construction(const Update& u);

// Decides D^U = (D^U)^U. Fact deltas certify constructively (unbounded);
// anything else is settled by enumerating the space, refuting with the
// first witness in enumeration order.
Verdict is_idempotent(const Update& u, const EnumerationSpace& space);

void collect_constants(const Update& u, std::set<std::string>& out);
std::map<std::string, std::size_t> update_signatures(const Update& u);

}  // namespace icheck
