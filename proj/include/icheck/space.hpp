#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "icheck/database.hpp"

namespace icheck {

// The bounded realization of "for every database D": all 2^|HB| subsets of
// the Herbrand base HB, the ground extensional atoms over a finite constant
// universe and a predicate vocabulary. Every enumerated database carries
// the same fixed rule set. Enumeration order is lexicographic over HB
// bitmasks (bit j of the mask is atom j of the sorted base), so the empty
// database comes first and reported witnesses are minimal in that order.
class EnumerationSpace {
 public:
  static constexpr std::uint64_t kDefaultBudget = 1ull << 20;

  EnumerationSpace(std::vector<std::string> universe,
                   std::map<std::string, std::size_t> vocabulary,
                   std::vector<Rule> rules = {},
                   std::uint64_t max_databases = kDefaultBudget);

  const std::vector<std::string>& universe() const { return universe_; }
  const std::map<std::string, std::size_t>& vocabulary() const { return vocabulary_; }
  const std::vector<Rule>& rules() const { return rules_; }
  const std::vector<Atom>& herbrand_base() const { return base_; }
  std::uint64_t max_databases() const { return max_databases_; }

  // 2^|HB|; meaningful only within budget.
  std::uint64_t database_count() const;

  // Throws ResourceError naming the bound when 2^|HB| exceeds the budget.
  void ensure_within_budget() const;

  Database database_at(std::uint64_t mask) const;

 private:
  std::vector<std::string> universe_;
  std::map<std::string, std::size_t> vocabulary_;
  std::vector<Rule> rules_;
  std::uint64_t max_databases_;
  std::vector<Atom> base_;
  std::map<std::string, std::size_t> signatures_;  // vocabulary + rule predicates
};

// Outcome of a bounded check. A certification is valid only over the space
// that was enumerated unless `bounded` is false (constructive arguments,
// e.g. fact-delta idempotence, hold universally). A refutation always
// carries a witness database that replays: re-evaluating the violated
// definition on the witness reproduces the recorded truth values.
struct Verdict {
  enum class Status : unsigned char { Certified, Refuted };

  Status status = Status::Certified;
  bool bounded = true;
  std::optional<Database> witness;
  std::string detail;
  std::uint64_t space_size = 0;

  bool certified() const { return status == Status::Certified; }
  bool refuted() const { return status == Status::Refuted; }

  static Verdict certify(std::uint64_t space_size, std::string detail = {}, bool bounded = true) {
    return Verdict{Status::Certified, bounded, std::nullopt, std::move(detail), space_size};
  }
  static Verdict refute(Database witness, std::string detail, std::uint64_t space_size) {
    return Verdict{Status::Refuted, true, std::move(witness), std::move(detail), space_size};
  }
};

}  // namespace icheck
