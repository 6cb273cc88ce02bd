#pragma once

#include <cstdint>

#include "icheck/engine.hpp"
#include "icheck/update.hpp"

namespace icheck {

enum class EvalState : unsigned char { Pre, Post };
enum class Plainness : unsigned char { Plain, Optimized };

// A generated integrity theory together with the contract it was built
// for: which state it is evaluated in (old or new) and whether it assumes
// the old state consistent (optimized) or not (plain).
struct Test {
  IntegrityTheory theory;
  EvalState state;
  Plainness plainness;
  Update for_update;
  IntegrityTheory of_theory;
};

// The two rules of thumb for "simpler": stored facts retrieved while
// evaluating, and static literal counts.
struct CostReport {
  std::uint64_t retrievals_test = 0;
  std::uint64_t retrievals_original = 0;
  std::size_t literal_count_test = 0;
  std::size_t literal_count_original = 0;
};

struct SimplifyOptions {
  // Generated-denial cap per input denial during DNF distribution;
  // exceeding it raises ResourceError rather than truncating.
  std::size_t dnf_cap = 256;

  // plain_post_test: when the update is idempotent by construction, return
  // the regressed plain pre-test re-tagged for the new state instead of
  // gamma itself.
  bool prefer_regressed_post = false;
};

// Plain pre-test by regression: D |= result iff D^U |= gamma, for every
// database. Intensional predicates are unfolded against db_rules first
// (recursion is rejected); fact deltas substitute each extensional literal
// by its weakest precondition, relation maps rename predicates to their
// sources; the result is distributed to a set of safe denials, simplified
// and subsumption-pruned.
Test plain_pre_test(const IntegrityTheory& gamma, const Update& u,
                    const std::vector<Rule>& db_rules = {}, const SimplifyOptions& opt = {});

// Pre-test under the old-state-consistency assumption: the plain pre-test
// minus every denial subsumed by a (unfolded) constraint of gamma, whose
// violation would contradict consistency of the old state.
Test optimized_pre_test(const IntegrityTheory& gamma, const Update& u,
                        const std::vector<Rule>& db_rules = {}, const SimplifyOptions& opt = {});

// Plain post-test: gamma itself re-tagged, or (with prefer_regressed_post,
// for constructively idempotent updates) the plain pre-test re-tagged for
// the new state.
Test plain_post_test(const IntegrityTheory& gamma, const Update& u,
                     const std::vector<Rule>& db_rules = {}, const SimplifyOptions& opt = {});

// Post-test under the consistency assumption, by unification: for each
// unfolded denial, every match of an inserted atom against a positive
// literal (or a deleted atom against a negative literal) emits the
// instantiated denial with the matched literal dropped; denials that no
// update atom can touch are dropped entirely. Parameter/constant matches
// emit equality side conditions. Updates involving relation maps fall back
// to gamma itself, which is a post-test of itself for any update.
Test optimized_post_test(const IntegrityTheory& gamma, const Update& u,
                         const std::vector<Rule>& db_rules = {}, const SimplifyOptions& opt = {});

// Evaluates both theories on db through the engine's counting mode. The
// caller supplies the state the test is tagged for.
CostReport cost_compare(const Test& t, const IntegrityTheory& gamma, const Database& db);

}  // namespace icheck
