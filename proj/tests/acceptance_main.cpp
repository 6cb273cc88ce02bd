// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion carries its own runtime bound.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "generators.hpp"
#include "icheck/cli.hpp"
#include "icheck/oracle.hpp"
#include "icheck/simplify.hpp"
#include "icheck/suite.hpp"
#include "test_util.hpp"
#include "json.hpp"

using namespace icheck;
using tu::den;
using tu::fact;
using tu::theory;

namespace {

struct Criterion {
  std::string name;
  double limit_seconds;
  std::function<void(std::string&)> body;  // throws or appends failures
};

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& msg) {
  if (!cond) throw Failure(msg);
}

// --------------------------------------------------------------------------

void swap_counterexample_replay(std::string& note) {
  Database d = tu::db("p(a). p(b). q(a).", {{"q", 1}});
  IntegrityTheory gamma = theory({":- p(a), q(b)."});
  IntegrityTheory sigma = theory({":- q(a), p(b)."});
  Update u = Update::swap("p", "q");

  require(holds(d, gamma).satisfied, "D |= Gamma");
  Database du = apply(u, d);
  require(!holds(du, gamma).satisfied, "D^U |/= Gamma");
  require(holds(du, sigma).satisfied, "D^U |= Sigma");

  EnumerationSpace space({"a", "b"}, {{"p", 1}, {"q", 1}});
  require(check_pre_test(sigma, gamma, u, space, Premise::ConsistentOnly).certified(),
          "Sigma certified as a pre-test");

  Verdict post = check_post_test(sigma, gamma, u, space, Premise::ConsistentOnly);
  require(post.refuted(), "Sigma refuted as a post-test");
  // The designated witness replays exactly.
  require(holds(d, gamma).satisfied && holds(du, sigma).satisfied &&
              !holds(du, gamma).satisfied,
          "witness D = {p(a),p(b),q(a)} replays: D^U |= Sigma, D^U |/= Gamma");

  require(check_post_test(gamma, gamma, u, space, Premise::ConsistentOnly).certified(),
          "Upsilon = Gamma certified as a post-test");
  Verdict as_pre = check_pre_test(gamma, gamma, u, space, Premise::ConsistentOnly);
  require(as_pre.refuted(), "Upsilon = Gamma refuted as a pre-test");
  require(holds(d, gamma).satisfied && !holds(du, gamma).satisfied,
          "witness replays: D |= Upsilon yet D^U |/= Gamma");
  note = "all six verdicts reproduced";
}

void insertion_counterexample_witnesses(std::string& note) {
  IntegrityTheory gamma = theory({":- p(a)."});
  IntegrityTheory sigma = theory({":- not p(a)."});
  Update u = Update::insertion({fact("p(a).")});
  Database d({}, {}, {{"p", 1}});

  require(!holds(d, sigma).satisfied, "D |/= Sigma");
  Database du = apply(u, d);
  require(holds(du, sigma).satisfied, "D^U |= Sigma");
  require(!holds(du, gamma).satisfied, "D^U |/= Gamma");

  EnumerationSpace space({"a"}, {{"p", 1}});
  require(check_pre_test(sigma, gamma, u, space, Premise::ConsistentOnly).certified(),
          "Sigma certified as a pre-test over {a}");
  require(check_post_test(gamma, gamma, u, space, Premise::AllDatabases).certified(),
          "Upsilon = Gamma certified as a plain post-test");
  Verdict as_pre = check_pre_test(gamma, gamma, u, space, Premise::ConsistentOnly);
  require(as_pre.refuted(), "Upsilon = Gamma refuted as a pre-test");
  require(as_pre.witness && as_pre.witness->facts().empty(), "witness is exactly D = {}");
  Verdict sigma_post = check_post_test(sigma, gamma, u, space, Premise::ConsistentOnly);
  require(sigma_post.refuted() && sigma_post.witness->facts().empty(),
          "Sigma refuted as a post-test with witness D = {}");
  note = "witness situation D |/= Sigma, D^U |= Sigma, D^U |/= Gamma reproduced";
}

void plain_pre_uniqueness(std::string& note) {
  std::mt19937_64 rng(0xC0FFEE);
  const int pairs = 220;
  for (int i = 0; i < pairs; ++i) {
    SuiteEntry e = random_suite_entry(rng, /*idempotent_only=*/false);
    Test regressed = plain_pre_test(e.gamma, e.update);
    IntegrityTheory derived = derive_plain_pre_test(e.gamma, e.update, e.space);
    Verdict equiv = theory_equivalent_on(regressed.theory, derived, e.space);
    if (!equiv.certified()) {
      std::ostringstream ss;
      ss << "pair " << i << ": regression and derivation disagree\n  gamma: " << print(e.gamma)
         << "  update: " << print(e.update) << "  witness: " << print(*equiv.witness);
      throw Failure(ss.str());
    }
    // Both must satisfy the plain pre-test definition outright.
    require(check_pre_test(regressed.theory, e.gamma, e.update, e.space,
                           Premise::AllDatabases)
                .certified(),
            "regressed plain pre-test satisfies its biconditional on pair " +
                std::to_string(i));
  }
  note = std::to_string(pairs) + " random pairs, zero discrepancies";
}

void idempotent_pre_as_post(std::string& note) {
  std::mt19937_64 rng(0xBEEF);
  const int pairs = 220;
  for (int i = 0; i < pairs; ++i) {
    SuiteEntry e = random_suite_entry(rng, /*idempotent_only=*/true);
    Test pre0 = plain_pre_test(e.gamma, e.update);
    require(check_post_test(pre0.theory, e.gamma, e.update, e.space, Premise::AllDatabases)
                .certified(),
            "pre0 is a plain post-test for idempotent pair " + std::to_string(i));
    // Evaluation of pre0 must be unaffected by an idempotent update.
    const std::uint64_t n = e.space.database_count();
    for (std::uint64_t mask = 0; mask < n; ++mask) {
      Database d = e.space.database_at(mask);
      bool before = holds(d, pre0.theory).satisfied;
      bool after = holds(apply(e.update, d), pre0.theory).satisfied;
      if (before != after)
        throw Failure("pair " + std::to_string(i) +
                      ": D |= pre0 differs from D^U |= pre0 on mask " + std::to_string(mask));
    }
  }
  note = std::to_string(pairs) + " idempotent pairs, zero failures";
}

void containment_table(std::string& note) {
  std::ostringstream out, err;
  int code = run_cli({"table", "--pairs", "40", "--seed", "20240101"}, out, err);
  require(code == 0, "table command exits 0 (matrix matches)");

  std::string dump = out.str();
  std::size_t sep = dump.rfind("---\n");
  require(sep != std::string::npos, "machine report present");
  nlohmann::json doc = nlohmann::json::parse(dump.substr(sep + 4));
  require(doc.at("matches_expected").get<bool>(), "matches_expected is true");

  const std::vector<std::pair<std::string, std::pair<std::string, std::string>>> expected = {
      {"pre c post", {"no", "no"}},        {"post c pre", {"no", "no"}},
      {"plain-pre c pre", {"yes", "yes"}}, {"plain-post c post", {"yes", "yes"}},
      {"plain-pre c post", {"no", "yes"}},
  };
  const auto& rows = doc.at("rows");
  require(rows.size() == 5, "five rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i].at("relation") == expected[i].first, "row order");
    require(rows[i].at("any_u").at("verdict") == expected[i].second.first,
            "any-U verdict for " + expected[i].first);
    require(rows[i].at("idempotent_u").at("verdict") == expected[i].second.second,
            "idempotent verdict for " + expected[i].first);
    // Every "no" cell carries a stored witness (replay is enforced inside
    // table_row_check before it is reported).
    for (const char* cls : {"any_u", "idempotent_u"}) {
      if (rows[i].at(cls).at("verdict") == "no")
        require(!rows[i].at(cls).at("witness_database").empty() ||
                    rows[i].at(cls).at("witness_database").is_array(),
                "witness stored for a no cell");
    }
  }
  note = "matrix (no,no,yes,yes,no) / (no,no,yes,yes,yes) with stored witnesses";
}

void coauthor_policy_reproduction(std::string& note) {
  IntegrityTheory gamma = theory({":- rev(S,R), sub(S,R).",
                                  ":- rev(S,R), sub(S,A), pub(P,R), pub(P,A)."});
  Update u = Update::insertion({fact("sub(c,a)."), fact("rev(c,b).")});
  IntegrityTheory reference_sigma = theory({":- sub(c,b).",
                                        ":- rev(c,a).",
                                        ":- pub(P,b), pub(P,a).",
                                        ":- sub(c,A), pub(P,b), pub(P,A).",
                                        ":- rev(c,R), pub(P,R), pub(P,a)."});
  Test generated = optimized_pre_test(gamma, u);

  // Full enumeration of the 2^108 fact sets over this vocabulary is out of
  // reach; the documented fallback is a seeded sample of at least one
  // million distinct consistent databases, stratified by density.
  const std::vector<std::string> universe{"a", "b", "c", "d", "p1", "p2"};
  std::map<std::string, std::size_t> vocab{{"rev", 2}, {"sub", 2}, {"pub", 2}};
  std::vector<Atom> base;
  for (const auto& [pred, arity] : vocab)
    for (const std::string& x : universe)
      for (const std::string& y : universe)
        base.push_back(Atom{pred, {Term::constant(x), Term::constant(y)}});
  std::sort(base.begin(), base.end());
  require(base.size() == 108, "Herbrand base has 108 atoms");

  std::map<std::string, std::size_t> declared = vocab;
  auto db_from_mask = [&](const std::vector<bool>& in) {
    std::set<Atom> facts;
    for (std::size_t i = 0; i < base.size(); ++i)
      if (in[i]) facts.insert(base[i]);
    return Database(std::move(facts), {}, declared);
  };

  std::mt19937_64 rng(0xE1);
  const double densities[] = {0.02, 0.05, 0.08, 0.12, 0.16, 0.20};
  const std::size_t target = 1'000'000;
  std::size_t consistent_checked = 0, discrepancies = 0;
  std::uint64_t drawn = 0;

  // Systematic floor: the empty database and every singleton.
  std::vector<std::vector<bool>> systematic;
  systematic.emplace_back(base.size(), false);
  for (std::size_t i = 0; i < base.size(); ++i) {
    std::vector<bool> one(base.size(), false);
    one[i] = true;
    systematic.push_back(std::move(one));
  }

  auto check_db = [&](const Database& d) {
    if (!holds(d, gamma).satisfied) return;  // restricted to consistent states
    ++consistent_checked;
    Database du = apply(u, d);
    bool gen_pre = holds(d, generated.theory).satisfied;
    bool ref_pre = holds(d, reference_sigma).satisfied;
    bool gen_post = holds(du, generated.theory).satisfied;
    bool ref_post = holds(du, reference_sigma).satisfied;
    bool new_state = holds(du, gamma).satisfied;
    if (gen_pre != ref_pre) ++discrepancies;     // pre-state equivalence
    if (gen_post != ref_post) ++discrepancies;   // post-state equivalence
    if (gen_pre != new_state) ++discrepancies;    // the pre-test contract itself
  };

  for (const auto& mask : systematic) check_db(db_from_mask(mask));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (consistent_checked < target) {
    double density = densities[rng() % 6];
    std::vector<bool> in(base.size(), false);
    for (std::size_t i = 0; i < base.size(); ++i) in[i] = unit(rng) < density;
    ++drawn;
    check_db(db_from_mask(in));
  }
  require(discrepancies == 0, "zero discrepancies over the sampled sub-space");

  std::ostringstream ss;
  ss << consistent_checked << " consistent databases sampled (from " << drawn + systematic.size()
     << " draws, seed 0xE1), zero discrepancies in both states and the pre-test contract";
  note = ss.str();
}

void cost_claim(std::string& note) {
  // Synthetic state: 12,000 facts whose constants avoid a, b and c, so the
  // instantiated test touches almost nothing while the full theory scans.
  std::set<Atom> facts;
  for (int i = 0; i < 4000; ++i) {
    std::string s = "s" + std::to_string(i), r = "r" + std::to_string(i % 911);
    std::string t = "t" + std::to_string(i), w = "w" + std::to_string(i % 797);
    std::string v = "v" + std::to_string(i);
    facts.insert(Atom{"rev", {Term::constant(s), Term::constant(r)}});
    facts.insert(Atom{"sub", {Term::constant(t), Term::constant(w)}});
    facts.insert(Atom{"pub", {Term::constant(v), Term::constant(w)}});
  }
  Database d(std::move(facts));
  require(d.facts().size() >= 10000, "at least 10,000 stored facts");

  IntegrityTheory gamma = theory({":- rev(S,R), sub(S,R).",
                                  ":- rev(S,R), sub(S,A), pub(P,R), pub(P,A)."});
  Test generated = optimized_pre_test(gamma, Update::insertion({fact("sub(c,a)."),
                                                                fact("rev(c,b).")}));
  CostReport cost = cost_compare(generated, gamma, d);
  std::ostringstream ss;
  ss << "test retrievals " << cost.retrievals_test << " vs " << cost.retrievals_original
     << " for the full theory";
  note = ss.str();
  require(cost.retrievals_test * 10 <= cost.retrievals_original,
          "test costs at most 10% of the full theory (" + ss.str() + ")");
}

void engine_differential(std::string& note) {
  tu::ProgramGen gen(0xD1FF);
  const int programs = 500;
  for (int i = 0; i < programs; ++i) {
    Database d = gen.random_database(/*max_strata=*/3, /*max_rules=*/8);
    if (!same_model(standard_model(d), naive_standard_model(d)))
      throw Failure("semi-naive and naive models differ on program " + std::to_string(i));
  }
  note = std::to_string(programs) + " random stratified programs agree";
}

}  // namespace

int main(int argc, char** argv) {
  std::string only = argc > 1 ? argv[1] : "";
  std::vector<Criterion> criteria = {
      {"swap-counterexample-replay", 1.0, swap_counterexample_replay},
      {"insertion-counterexample-witnesses", 1.0, insertion_counterexample_witnesses},
      {"plain-pre-test-uniqueness", 300.0, plain_pre_uniqueness},
      {"idempotent-pre-as-post", 300.0, idempotent_pre_as_post},
      {"containment-table-reproduction", 600.0, containment_table},
      {"coauthor-policy-reproduction", 900.0, coauthor_policy_reproduction},
      {"cost-claim", 60.0, cost_claim},
      {"engine-differential", 120.0, engine_differential},
  };

  int failures = 0;
  for (Criterion& c : criteria) {
    if (!only.empty() && c.name != only) continue;
    auto start = std::chrono::steady_clock::now();
    std::string note;
    bool ok = true;
    std::string why;
    try {
      c.body(note);
    } catch (const std::exception& e) {
      ok = false;
      why = e.what();
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && seconds > c.limit_seconds) {
      ok = false;
      why = "runtime " + std::to_string(seconds) + "s exceeds the " +
            std::to_string(c.limit_seconds) + "s bound";
    }
    std::printf("[%s] %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", c.name.c_str(), seconds,
                note.empty() && why.empty() ? "" : " - ",
                ok ? note.c_str() : why.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
