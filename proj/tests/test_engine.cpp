#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <thread>

#include "generators.hpp"
#include "icheck/engine.hpp"
#include "test_util.hpp"

using namespace icheck;
using tu::den;
using tu::fact;

TEST_CASE("a single negative dependency forces two strata") {
  Database d = tu::db("r(X) :- p(X), not q(X).", {{"p", 1}, {"q", 1}});
  auto strata = stratify(d);
  REQUIRE(strata.size() == 2);
  CHECK(strata[0] == std::vector<std::string>{"p", "q"});
  CHECK(strata[1] == std::vector<std::string>{"r"});
}

TEST_CASE("a facts-only database has a single stratum") {
  Database d = tu::db("p(a). q(b).");
  auto strata = stratify(d);
  REQUIRE(strata.size() == 1);
  CHECK(strata[0] == std::vector<std::string>{"p", "q"});
}

TEST_CASE("negative self-dependency is not stratifiable and names the cycle") {
  // A bare p(X) :- not p(X) is already unsafe under range restriction,
  // so ground and guarded variants exercise the cycle check.
  Database ground({}, {tu::rule("p(a) :- not p(a).")});
  CHECK_THROWS_WITH_AS(stratify(ground), doctest::Contains("p"), NotStratifiableError);

  Database guarded({}, {tu::rule("p(X) :- q(X), not p(X).")}, {{"q", 1}});
  CHECK_THROWS_AS(stratify(guarded), NotStratifiableError);

  Database mutual({}, {tu::rule("p(X) :- q(X), not r(X)."), tu::rule("r(X) :- q(X), not p(X).")},
                  {{"q", 1}});
  try {
    stratify(mutual);
    FAIL("expected NotStratifiableError");
  } catch (const NotStratifiableError& e) {
    CHECK(std::string(e.what()).find("p") != std::string::npos);
    CHECK(std::string(e.what()).find("r") != std::string::npos);
  }
}

TEST_CASE("one-step derivation") {
  Database d = tu::db("p(a). q(X) :- p(X).");
  Model m = standard_model(d);
  CHECK(m.true_atoms() == std::set<Atom>{fact("p(a)."), fact("q(a).")});
}

TEST_CASE("a rule-free database is its own model") {
  Database d = tu::db("p(a). p(b). q(a).");
  CHECK(standard_model(d).true_atoms() ==
        std::set<Atom>{fact("p(a)."), fact("p(b)."), fact("q(a).")});
}

TEST_CASE("transitive closure reaches two-step edges") {
  Database d = tu::db("e(a,b). e(b,c). t(X,Y) :- e(X,Y). t(X,Y) :- e(X,Z), t(Z,Y).");
  Model m = standard_model(d);
  CHECK(m.contains(fact("t(a,c).")));
  CHECK(same_model(m, naive_standard_model(d)));
}

TEST_CASE("negation across strata") {
  Database d = tu::db("p(a). p(b). q(a). r(X) :- p(X), not q(X).");
  Model m = standard_model(d);
  CHECK(m.contains(fact("r(b).")));
  CHECK_FALSE(m.contains(fact("r(a).")));
  CHECK(same_model(m, naive_standard_model(d)));
}

TEST_CASE("the swap example database satisfies and then violates the constraint") {
  IntegrityTheory gamma{den(":- p(a), q(b).")};
  Database d = tu::db("p(a). p(b). q(a).", {{"q", 1}});
  CHECK(holds(d, gamma).satisfied);
  Database after = tu::db("q(a). q(b). p(a).", {{"p", 1}});
  CHECK_FALSE(holds(after, gamma).satisfied);
}

TEST_CASE("the empty theory holds vacuously with zero retrievals") {
  Database d = tu::db("p(a). p(b).");
  CheckResult r = holds(d, IntegrityTheory{});
  CHECK(r.satisfied);
  CHECK(r.retrievals == 0);
}

TEST_CASE("unknown predicates in a theory are vocabulary errors") {
  Database d = tu::db("p(a).");
  CHECK_THROWS_AS(holds(d, IntegrityTheory{den(":- nosuch(a).")}), VocabularyError);
}

TEST_CASE("violated_instances enumerates ground violations") {
  Database d = tu::db("p(a).");
  auto instances = violated_instances(d, den(":- p(X)."));
  REQUIRE(instances.size() == 1);
  CHECK(*instances.begin() == std::vector<Literal>{pos(fact("p(a)."))});

  Database empty({}, {}, {{"p", 1}});
  CHECK(violated_instances(empty, den(":- p(a).")).empty());

  Database with_pa = tu::db("p(a).");
  CHECK(violated_instances(with_pa, den(":- not p(a).")).empty());
}

TEST_CASE("violated_instances with joins and side conditions") {
  Database d = tu::db("p(a). p(b). q(a). q(b).");
  auto instances = violated_instances(d, den(":- p(X), q(X), X != a."));
  REQUIRE(instances.size() == 1);
  CHECK(*instances.begin() == std::vector<Literal>{pos(fact("p(b).")), pos(fact("q(b)."))});
}

TEST_CASE("semi-naive equals naive on random stratified programs") {
  tu::ProgramGen gen(42);
  for (int i = 0; i < 80; ++i) {
    Database d = gen.random_database();
    CHECK(same_model(standard_model(d), naive_standard_model(d)));
  }
}

TEST_CASE("adding a fact never removes derived atoms in positive programs") {
  tu::ProgramGen gen(99);
  int checked = 0;
  for (int i = 0; i < 60 && checked < 30; ++i) {
    Database d = gen.random_database();
    bool positive = true;
    for (const Rule& r : d.rules())
      for (const Literal& l : r.body)
        if (l.negative) positive = false;
    if (!positive || d.facts().empty()) continue;
    ++checked;

    std::set<Atom> before = standard_model(d).true_atoms();
    // Add one more fact over an extensional predicate.
    Atom extra = *d.facts().begin();
    extra.args[0] = Term::constant("d");
    std::set<Atom> facts = d.facts();
    facts.insert(extra);
    std::set<Atom> after = standard_model(d.with_facts(facts)).true_atoms();
    for (const Atom& a : before) CHECK(after.count(a) == 1);
  }
  CHECK(checked > 0);
}

TEST_CASE("holds distributes over theory union") {
  tu::ProgramGen gen(123);
  for (int i = 0; i < 40; ++i) {
    Database d = gen.random_database();
    std::map<std::string, std::size_t> ext;
    for (const auto& [pred, arity] : d.signatures())
      if (d.is_extensional(pred)) ext[pred] = arity;
    if (ext.empty()) continue;
    auto it = ext.begin();
    IntegrityTheory g1{Denial({pos(Atom{it->first, std::vector<Term>(
                                  it->second, Term::variable("X"))})})};
    auto it2 = std::next(it) == ext.end() ? it : std::next(it);
    IntegrityTheory g2{Denial({pos(Atom{it2->first, std::vector<Term>(
                                  it2->second, Term::variable("Y"))})})};
    IntegrityTheory both;
    both.denials.insert(g1.denials.begin(), g1.denials.end());
    both.denials.insert(g2.denials.begin(), g2.denials.end());
    Model m = standard_model(d);
    CHECK(holds(m, both).satisfied == (holds(m, g1).satisfied && holds(m, g2).satisfied));
  }
}

TEST_CASE("retrieval counting is additive over sequential checks") {
  Database d = tu::db("p(a). p(b). q(a).");
  Model m = standard_model(d);
  std::uint64_t base = m.retrievals();
  CHECK(base == 0);  // no rules, construction reads nothing

  IntegrityTheory g1{den(":- p(X), q(X).")};
  IntegrityTheory g2{den(":- q(X).")};
  CheckResult r1 = holds(m, g1);
  CheckResult r2 = holds(m, g2);
  CHECK(m.retrievals() == r1.retrievals + r2.retrievals);
  CHECK(holds(m, IntegrityTheory{}).retrievals == 0);
}

TEST_CASE("an instantiated lookup retrieves fewer facts than an open scan") {
  std::string text;
  for (int i = 0; i < 50; ++i) text += "p(c" + std::to_string(i) + ").\n";
  Database d = tu::db(text, {{"q", 1}});
  Model m = standard_model(d);
  CheckResult open = holds(m, IntegrityTheory{den(":- p(X), q(X).")});
  CHECK(open.retrievals == 50);  // scans the whole extension
  CheckResult ground = holds(m, IntegrityTheory{den(":- p(c7), q(c7).")});
  CHECK(ground.retrievals == 1);  // indexed probe
}

TEST_CASE("concurrent checks against a shared model are safe and consistent") {
  Database d = tu::db("p(a). p(b). q(a). r(X) :- p(X), not q(X).");
  Model m = standard_model(d);
  IntegrityTheory gamma{den(":- r(X).")};
  std::uint64_t before = m.retrievals();

  std::vector<std::thread> workers;
  std::vector<CheckResult> results(8, CheckResult{false, 0});
  for (int i = 0; i < 8; ++i)
    workers.emplace_back([&m, &gamma, &results, i]() { results[i] = holds(m, gamma); });
  for (auto& w : workers) w.join();

  std::uint64_t total = 0;
  for (const CheckResult& r : results) {
    CHECK_FALSE(r.satisfied);  // r(b) is derivable
    total += r.retrievals;
  }
  CHECK(m.retrievals() == before + total);
}
