#include "icheck/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace icheck {

namespace {

int pick_threads(int requested, std::uint64_t n) {
  if (requested > 0) return requested;
  if (n < 4096) return 1;
  unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::min<unsigned>(hw == 0 ? 1 : hw, 8));
}

// Scans the space in mask order and returns the first mask for which
// `violates` is true. Partitioned runs merge by taking the minimal mask, so
// the result does not depend on the thread count.
template <class F>
std::optional<std::uint64_t> first_violation(const EnumerationSpace& space, int threads,
                                             F&& violates) {
  space.ensure_within_budget();
  const std::uint64_t n = space.database_count();
  const int nt = pick_threads(threads, n);

  if (nt <= 1) {
    for (std::uint64_t mask = 0; mask < n; ++mask)
      if (violates(space.database_at(mask), mask)) return mask;
    return std::nullopt;
  }

  std::atomic<std::uint64_t> best{n};
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(nt));
  const std::uint64_t chunk = (n + static_cast<std::uint64_t>(nt) - 1) / static_cast<std::uint64_t>(nt);
  for (int t = 0; t < nt; ++t) {
    const std::uint64_t lo = chunk * static_cast<std::uint64_t>(t);
    const std::uint64_t hi = std::min(n, lo + chunk);
    workers.emplace_back([&space, &best, lo, hi, &violates]() {
      for (std::uint64_t mask = lo; mask < hi; ++mask) {
        if ((mask & 0xFF) == 0 && best.load(std::memory_order_relaxed) <= mask) return;
        if (violates(space.database_at(mask), mask)) {
          std::uint64_t cur = best.load(std::memory_order_relaxed);
          while (mask < cur && !best.compare_exchange_weak(cur, mask)) {
          }
          return;  // first hit in an ascending range is the range's minimum
        }
      }
    });
  }
  for (std::thread& w : workers) w.join();
  const std::uint64_t found = best.load();
  if (found < n) return found;
  return std::nullopt;
}

std::string side(bool v) { return v ? "|=" : "|/="; }

}  // namespace

Verdict check_pre_test(const IntegrityTheory& sigma, const IntegrityTheory& gamma,
                       const Update& u, const EnumerationSpace& space, Premise premise,
                       int threads) {
  const std::uint64_t n = space.database_count();
  auto violates = [&](const Database& d, std::uint64_t) {
    if (premise == Premise::ConsistentOnly && !holds(d, gamma).satisfied) return false;
    bool lhs = holds(apply(u, d), gamma).satisfied;
    bool rhs = holds(d, sigma).satisfied;
    return lhs != rhs;
  };
  std::optional<std::uint64_t> mask = first_violation(space, threads, violates);
  if (!mask) {
    return Verdict::certify(n, premise == Premise::ConsistentOnly
                                   ? "D^U |= Gamma iff D |= Sigma on every consistent database"
                                   : "D^U |= Gamma iff D |= Sigma on every database");
  }
  Database witness = space.database_at(*mask);
  bool lhs = holds(apply(u, witness), gamma).satisfied;
  bool rhs = holds(witness, sigma).satisfied;
  return Verdict::refute(std::move(witness),
                         "D " + side(rhs) + " Sigma but D^U " + side(lhs) + " Gamma", n);
}

Verdict check_post_test(const IntegrityTheory& upsilon, const IntegrityTheory& gamma,
                        const Update& u, const EnumerationSpace& space, Premise premise,
                        int threads) {
  const std::uint64_t n = space.database_count();
  auto violates = [&](const Database& d, std::uint64_t) {
    if (premise == Premise::ConsistentOnly && !holds(d, gamma).satisfied) return false;
    Database du = apply(u, d);
    bool lhs = holds(du, gamma).satisfied;
    bool rhs = holds(du, upsilon).satisfied;
    return lhs != rhs;
  };
  std::optional<std::uint64_t> mask = first_violation(space, threads, violates);
  if (!mask) {
    return Verdict::certify(n, premise == Premise::ConsistentOnly
                                   ? "D^U |= Gamma iff D^U |= Upsilon on every consistent database"
                                   : "D^U |= Gamma iff D^U |= Upsilon on every database");
  }
  Database witness = space.database_at(*mask);
  Database du = apply(u, witness);
  bool lhs = holds(du, gamma).satisfied;
  bool rhs = holds(du, upsilon).satisfied;
  return Verdict::refute(std::move(witness),
                         "D^U " + side(rhs) + " Upsilon but D^U " + side(lhs) + " Gamma", n);
}

namespace {

// The denial that fires exactly on one fact set: every atom of `atoms`
// appears positively if present and negatively if absent.
Denial describe_state(const std::vector<Atom>& atoms, const std::set<Atom>& facts) {
  std::vector<Literal> body;
  body.reserve(atoms.size());
  for (const Atom& a : atoms)
    body.push_back(Literal{facts.count(a) == 0, a});
  return Denial(std::move(body));
}

}  // namespace

IntegrityTheory derive_plain_pre_test(const IntegrityTheory& gamma, const Update& u,
                                      const EnumerationSpace& space) {
  space.ensure_within_budget();
  const std::uint64_t n = space.database_count();
  std::set<Denial> denials;
  for (std::uint64_t mask = 0; mask < n; ++mask) {
    Database d = space.database_at(mask);
    if (!holds(apply(u, d), gamma).satisfied)
      denials.insert(describe_state(space.herbrand_base(), d.facts()));
  }
  return IntegrityTheory(std::move(denials));
}

IntegrityTheory derive_plain_post_test(const IntegrityTheory& gamma, const Update& u,
                                       const EnumerationSpace& space) {
  space.ensure_within_budget();
  // Post-states can mention inserted atoms outside the base.
  std::vector<Atom> atoms = space.herbrand_base();
  for (const UpdateStep& s : u.steps())
    if (const FactDelta* d = std::get_if<FactDelta>(&s))
      for (const Atom& a : d->insertions) atoms.push_back(a);
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());

  const std::uint64_t n = space.database_count();
  std::set<Denial> denials;
  for (std::uint64_t mask = 0; mask < n; ++mask) {
    Database du = apply(u, space.database_at(mask));
    if (!holds(du, gamma).satisfied) denials.insert(describe_state(atoms, du.facts()));
  }
  return IntegrityTheory(std::move(denials));
}

Verdict theory_equivalent_on(const IntegrityTheory& t1, const IntegrityTheory& t2,
                             const EnumerationSpace& space,
                             const IntegrityTheory* consistent_with, int threads) {
  const std::uint64_t n = space.database_count();
  auto violates = [&](const Database& d, std::uint64_t) {
    if (consistent_with && !holds(d, *consistent_with).satisfied) return false;
    return holds(d, t1).satisfied != holds(d, t2).satisfied;
  };
  std::optional<std::uint64_t> mask = first_violation(space, threads, violates);
  if (!mask) return Verdict::certify(n, "same satisfaction value on every enumerated database");
  Database witness = space.database_at(*mask);
  bool lhs = holds(witness, t1).satisfied;
  return Verdict::refute(std::move(witness),
                         "D " + side(lhs) + " first theory but D " + side(!lhs) + " second", n);
}

Verdict theory_equivalent_on(const IntegrityTheory& t1, const IntegrityTheory& t2,
                             const std::vector<std::string>& universe,
                             const std::map<std::string, std::size_t>& vocabulary) {
  return theory_equivalent_on(t1, t2, EnumerationSpace(universe, vocabulary));
}

// ---------------------------------------------------------------------------
// Summary table

std::string table_row_name(TableRow row) {
  switch (row) {
    case TableRow::PreInPost: return "pre c post";
    case TableRow::PostInPre: return "post c pre";
    case TableRow::Pre0InPre: return "plain-pre c pre";
    case TableRow::Post0InPost: return "plain-post c post";
    case TableRow::Pre0InPost: return "plain-pre c post";
  }
  return "?";
}

namespace {

// Re-checks that a stored witness database actually refutes the membership
// claim, so that reported counterexamples always replay.
bool replays(TableRow row, const IntegrityTheory& member, const IntegrityTheory& gamma,
             const Update& u, const Database& d) {
  if (!holds(d, gamma).satisfied) return false;  // premise: consistent old state
  Database du = apply(u, d);
  bool new_consistent = holds(du, gamma).satisfied;
  switch (row) {
    case TableRow::PreInPost:
    case TableRow::Pre0InPost:
    case TableRow::Post0InPost:
      return holds(du, member).satisfied != new_consistent;
    case TableRow::PostInPre:
    case TableRow::Pre0InPre:
      return holds(d, member).satisfied != new_consistent;
  }
  return false;
}

}  // namespace

RowReport table_row_check(TableRow row, const std::vector<SuiteEntry>& suite,
                          bool idempotent_class, int threads) {
  RowReport rep;
  rep.row = row;
  rep.idempotent_class = idempotent_class;

  for (const SuiteEntry& entry : suite) {
    ++rep.pairs_checked;

    IntegrityTheory member;
    Verdict membership = Verdict::certify(0);
    switch (row) {
      case TableRow::PreInPost: {
        member = entry.pre_member
                     ? *entry.pre_member
                     : derive_plain_pre_test(entry.gamma, entry.update, entry.space);
        Verdict is_pre = check_pre_test(member, entry.gamma, entry.update, entry.space,
                                        Premise::ConsistentOnly, threads);
        if (!is_pre.certified())
          throw InputError("suite entry '" + entry.label +
                           "' designates a pre-test member that is not a pre-test");
        membership = check_post_test(member, entry.gamma, entry.update, entry.space,
                                     Premise::ConsistentOnly, threads);
        break;
      }
      case TableRow::PostInPre: {
        member = entry.post_member ? *entry.post_member : entry.gamma;
        Verdict is_post = check_post_test(member, entry.gamma, entry.update, entry.space,
                                          Premise::ConsistentOnly, threads);
        if (!is_post.certified())
          throw InputError("suite entry '" + entry.label +
                           "' designates a post-test member that is not a post-test");
        membership = check_pre_test(member, entry.gamma, entry.update, entry.space,
                                    Premise::ConsistentOnly, threads);
        break;
      }
      case TableRow::Pre0InPre: {
        member = derive_plain_pre_test(entry.gamma, entry.update, entry.space);
        Verdict is_plain = check_pre_test(member, entry.gamma, entry.update, entry.space,
                                          Premise::AllDatabases, threads);
        if (!is_plain.certified())
          throw InputError("derived plain pre-test failed its own definition on '" +
                           entry.label + "'");
        membership = check_pre_test(member, entry.gamma, entry.update, entry.space,
                                    Premise::ConsistentOnly, threads);
        break;
      }
      case TableRow::Post0InPost: {
        member = derive_plain_post_test(entry.gamma, entry.update, entry.space);
        Verdict is_plain = check_post_test(member, entry.gamma, entry.update, entry.space,
                                           Premise::AllDatabases, threads);
        if (!is_plain.certified())
          throw InputError("derived plain post-test failed its own definition on '" +
                           entry.label + "'");
        membership = check_post_test(member, entry.gamma, entry.update, entry.space,
                                     Premise::ConsistentOnly, threads);
        break;
      }
      case TableRow::Pre0InPost: {
        member = derive_plain_pre_test(entry.gamma, entry.update, entry.space);
        Verdict is_plain = check_pre_test(member, entry.gamma, entry.update, entry.space,
                                          Premise::AllDatabases, threads);
        if (!is_plain.certified())
          throw InputError("derived plain pre-test failed its own definition on '" +
                           entry.label + "'");
        membership = check_post_test(member, entry.gamma, entry.update, entry.space,
                                     Premise::ConsistentOnly, threads);
        break;
      }
    }

    if (membership.refuted()) {
      rep.yes = false;
      rep.witness_label = entry.label;
      rep.witness_member = member;
      rep.witness_gamma = entry.gamma;
      rep.witness_update = entry.update;
      rep.detail = membership.detail;
      // Prefer the entry's designated witness when it replays; otherwise
      // keep the enumeration-minimal one.
      if (entry.designated_witness &&
          replays(row, member, entry.gamma, entry.update, *entry.designated_witness)) {
        rep.witness = entry.designated_witness;
      } else {
        rep.witness = membership.witness;
      }
      if (!rep.witness || !replays(row, member, entry.gamma, entry.update, *rep.witness))
        throw Error("internal: refutation witness for row '" + table_row_name(row) +
                    "' does not replay");
      return rep;
    }
  }

  // Containment certified over the whole suite. Flag certifications that a
  // richer suite is known to overturn.
  bool separable = row == TableRow::PreInPost || row == TableRow::PostInPre ||
                   (row == TableRow::Pre0InPost && !idempotent_class);
  rep.degenerate = separable;
  return rep;
}

}  // namespace icheck
