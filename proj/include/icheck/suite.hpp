#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "icheck/oracle.hpp"

namespace icheck {

enum class SuiteKind : unsigned char { Default, Empty, Swaps };

struct SuiteOptions {
  SuiteKind kind = SuiteKind::Default;
  std::size_t random_pairs = 40;
  std::uint64_t seed = 20240101;
  std::uint64_t max_databases = EnumerationSpace::kDefaultBudget;
  // Keep the Herbrand base at or below this many atoms so derived plain
  // tests stay enumerable.
  std::size_t max_base_atoms = 10;
};

// One random (gamma, update) pair over a small universe/vocabulary.
// idempotent_only restricts updates to fact deltas.
SuiteEntry random_suite_entry(std::mt19937_64& rng, bool idempotent_only,
                              const SuiteOptions& opt = {});

// The fixed counterexample pairs, with their designated member theories and
// witness databases.
SuiteEntry swap_example_entry(std::uint64_t max_databases = EnumerationSpace::kDefaultBudget);
SuiteEntry insertion_example_entry(std::uint64_t max_databases = EnumerationSpace::kDefaultBudget);

// Suite for one column of the summary table. The Default kind puts the
// fixed pair for the class first, then random pairs.
std::vector<SuiteEntry> table_suite(bool idempotent_class, const SuiteOptions& opt = {});

}  // namespace icheck
