#pragma once

#include <optional>
#include <string>
#include <vector>

#include "icheck/engine.hpp"
#include "icheck/space.hpp"
#include "icheck/update.hpp"

namespace icheck {

// Which databases a definition quantifies over: all of them (plain tests)
// or only those consistent with the constraint theory.
enum class Premise : unsigned char { AllDatabases, ConsistentOnly };

// Pre-test check: D^U |= Gamma iff D |= Sigma, over the space.
// threads <= 0 picks automatically; results are identical regardless of
// partitioning (the minimal witness wins).
Verdict check_pre_test(const IntegrityTheory& sigma, const IntegrityTheory& gamma,
                       const Update& u, const EnumerationSpace& space, Premise premise,
                       int threads = 0);

// Post-test check: D^U |= Gamma iff D^U |= Upsilon, over the space.
Verdict check_post_test(const IntegrityTheory& upsilon, const IntegrityTheory& gamma,
                        const Update& u, const EnumerationSpace& space, Premise premise,
                        int threads = 0);

// A canonical plain pre-test obtained semantically: one denial per fact set
// whose updated state violates gamma, each denial describing that fact set
// exactly (positive atoms present, negative atoms absent, over the whole
// base). Independent of the simplifier's regression construction.
IntegrityTheory derive_plain_pre_test(const IntegrityTheory& gamma, const Update& u,
                                      const EnumerationSpace& space);

// Dual construction for post-tests: one denial per reachable violating
// post-state.
IntegrityTheory derive_plain_post_test(const IntegrityTheory& gamma, const Update& u,
                                       const EnumerationSpace& space);

// Bounded logical equivalence: same satisfaction value on every database of
// the space, optionally restricted to databases consistent with a theory.
Verdict theory_equivalent_on(const IntegrityTheory& t1, const IntegrityTheory& t2,
                             const EnumerationSpace& space,
                             const IntegrityTheory* consistent_with = nullptr,
                             int threads = 0);
Verdict theory_equivalent_on(const IntegrityTheory& t1, const IntegrityTheory& t2,
                             const std::vector<std::string>& universe,
                             const std::map<std::string, std::size_t>& vocabulary);

// ---------------------------------------------------------------------------
// Summary-table machinery: the five containment relations between the sets
// of (plain) pre-tests and (plain) post-tests, checked per update class.

enum class TableRow : unsigned char {
  PreInPost,    // every pre-test a post-test?
  PostInPre,    // every post-test a pre-test?
  Pre0InPre,    // every plain pre-test a pre-test?
  Post0InPost,  // every plain post-test a post-test?
  Pre0InPost,   // every plain pre-test a post-test?
};

std::string table_row_name(TableRow row);

// One (gamma, update, space) instance of the suite. Members of the smaller
// set default to the oracle's own derivations; the fixed witness pairs
// carry designated member theories and the witness database they are known
// to refute with.
struct SuiteEntry {
  IntegrityTheory gamma;
  Update update;
  EnumerationSpace space;
  std::optional<IntegrityTheory> pre_member;
  std::optional<IntegrityTheory> post_member;
  std::optional<Database> designated_witness;
  std::string label;
};

struct RowReport {
  TableRow row;
  bool idempotent_class = false;
  bool yes = true;
  std::size_t pairs_checked = 0;
  std::string witness_label;
  std::optional<IntegrityTheory> witness_member;
  std::optional<IntegrityTheory> witness_gamma;
  std::optional<Update> witness_update;
  std::optional<Database> witness;
  std::string detail;
  bool degenerate = false;  // certified, but on a suite known not to separate the sets
};

// Checks one containment over the suite. "Yes" means every entry's member
// theory passed the membership check; "no" carries the first refuting entry
// and a replayable witness database.
RowReport table_row_check(TableRow row, const std::vector<SuiteEntry>& suite,
                          bool idempotent_class, int threads = 0);

}  // namespace icheck
