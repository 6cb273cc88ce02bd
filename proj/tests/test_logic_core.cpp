#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "icheck/oracle.hpp"
#include "test_util.hpp"

using namespace icheck;
using tu::den;
using tu::fact;

TEST_CASE("unify against a ground atom forces the pattern bindings") {
  Atom a{"rev", {Term::variable("S"), Term::variable("R")}};
  Atom b{"rev", {Term::constant("c"), Term::constant("b")}};
  auto theta = unify(a, b);
  REQUIRE(theta.has_value());
  CHECK(theta->apply(a) == b);
  CHECK(theta->bindings().at("S") == Term::constant("c"));
  CHECK(theta->bindings().at("R") == Term::constant("b"));
}

TEST_CASE("unify identical ground atoms yields the empty substitution") {
  Atom a = fact("p(a).");
  auto theta = unify(a, a);
  REQUIRE(theta.has_value());
  CHECK(theta->empty());
}

TEST_CASE("distinct predicates never unify") {
  CHECK_FALSE(unify(fact("p(a)."), fact("q(a).")).has_value());
}

TEST_CASE("constants and parameters unify only with themselves") {
  CHECK_FALSE(unify(fact("p(a)."), fact("p(b).")).has_value());
  Atom pa{"p", {Term::parameter("x")}};
  Atom pb{"p", {Term::parameter("y")}};
  CHECK_FALSE(unify(pa, pb).has_value());
  CHECK(unify(pa, pa)->empty());
  CHECK_FALSE(unify(pa, fact("p(a).")).has_value());
}

TEST_CASE("arity clash on the same predicate is a malformed program") {
  Atom unary{"p", {Term::constant("a")}};
  Atom binary{"p", {Term::constant("a"), Term::constant("b")}};
  CHECK_THROWS_AS(unify(unary, binary), VocabularyError);
}

TEST_CASE("variable pairs bind the lexicographically earlier name") {
  Atom a{"p", {Term::variable("X")}};
  Atom b{"p", {Term::variable("B")}};
  auto theta = unify(a, b);
  REQUIRE(theta.has_value());
  CHECK(theta->bindings().count("B") == 1);
  CHECK(theta->bindings().at("B") == Term::variable("X"));
}

TEST_CASE("apply_subst instantiates the conflict-of-interest denial") {
  Denial d = den(":- rev(S,R), sub(S,R).");
  Substitution theta({{"S", Term::constant("c")}, {"R", Term::constant("b")}});
  CHECK(apply_subst(theta, d) == den(":- rev(c,b), sub(c,b)."));
}

TEST_CASE("apply_subst with the empty substitution is the identity") {
  Denial d = den(":- sub(c,A), pub(P,b), pub(P,A).");
  CHECK(apply_subst(Substitution{}, d) == d);
}

TEST_CASE("apply_subst replaces only bound variables") {
  Denial d = den(":- sub(c,A), pub(P,b), pub(P,A).");
  Substitution theta({{"A", Term::constant("a")}});
  CHECK(apply_subst(theta, d) == den(":- sub(c,a), pub(P,b), pub(P,a)."));
}

TEST_CASE("substitutions reject self-bindings and non-idempotent maps") {
  CHECK_THROWS_AS(Substitution({{"X", Term::variable("X")}}), InputError);
  CHECK_THROWS_AS(Substitution({{"X", Term::variable("Y")}, {"Y", Term::constant("a")}}),
                  InputError);
}

TEST_CASE("unification soundness and generality on random atom pairs") {
  std::mt19937_64 rng(7);
  const std::vector<std::string> consts{"a", "b", "c"};
  const std::vector<std::string> vars{"X", "Y", "Z", "W"};
  auto random_atom = [&](std::size_t arity) {
    Atom a{"p", {}};
    for (std::size_t i = 0; i < arity; ++i) {
      if (rng() % 2)
        a.args.push_back(Term::variable(vars[rng() % vars.size()]));
      else
        a.args.push_back(Term::constant(consts[rng() % consts.size()]));
    }
    return a;
  };

  int unified = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t arity = 1 + rng() % 3;
    Atom a = random_atom(arity), b = random_atom(arity);
    auto theta = unify(a, b);
    if (!theta) continue;
    ++unified;
    CHECK(theta->apply(a) == theta->apply(b));

    // Idempotence: applying twice equals applying once.
    CHECK(theta->apply(theta->apply(a)) == theta->apply(a));

    // Generality: any other unifier factors through theta; build one by
    // grounding the unified atom and exhibit the factor directly.
    std::map<std::string, Term> grounding;
    std::set<std::string> leftover;
    collect_variables(theta->apply(a), leftover);
    for (const std::string& v : leftover)
      grounding.emplace(v, Term::constant(consts[rng() % consts.size()]));
    Substitution delta(std::move(grounding));

    Atom ground_a = delta.apply(theta->apply(a));
    Atom ground_b = delta.apply(theta->apply(b));
    CHECK(ground_a == ground_b);
    CHECK(ground_a.is_ground());
  }
  CHECK(unified > 50);
}

TEST_CASE("duplicate denials are redundant for bounded equivalence") {
  IntegrityTheory t1{den(":- p(a).")};
  IntegrityTheory t2{den(":- p(a)."), den(":- p(a).")};
  Verdict v = theory_equivalent_on(t1, t2, {"a"}, {{"p", 1}});
  CHECK(v.certified());
  CHECK(v.space_size == 2);
}

TEST_CASE("a satisfiable theory is not equivalent to falsum; the empty database witnesses it") {
  IntegrityTheory t1{den(":- p(a).")};
  Verdict v = theory_equivalent_on(t1, IntegrityTheory::falsum(), {"a"}, {{"p", 1}});
  REQUIRE(v.refuted());
  CHECK(v.witness->facts().empty());
}

TEST_CASE("bounded equivalence distinguishes swapped constants") {
  Verdict v = theory_equivalent_on(IntegrityTheory{den(":- p(a).")},
                                   IntegrityTheory{den(":- p(b).")}, {"a", "b"}, {{"p", 1}});
  CHECK(v.refuted());
}

TEST_CASE("bounded equivalence is an equivalence relation on sampled theories") {
  std::mt19937_64 rng(11);
  EnumerationSpace space({"a", "b"}, {{"p", 1}, {"q", 1}});
  std::vector<IntegrityTheory> sample = {
      IntegrityTheory{den(":- p(a).")},
      IntegrityTheory{den(":- p(a), q(a).")},
      IntegrityTheory{den(":- p(X).")},
      IntegrityTheory{den(":- p(X), not q(X).")},
      IntegrityTheory{den(":- q(b).")},
      IntegrityTheory{},
  };
  for (const IntegrityTheory& t : sample)
    CHECK(theory_equivalent_on(t, t, space).certified());  // reflexive
  for (int i = 0; i < 40; ++i) {
    const IntegrityTheory& x = sample[rng() % sample.size()];
    const IntegrityTheory& y = sample[rng() % sample.size()];
    const IntegrityTheory& z = sample[rng() % sample.size()];
    bool xy = theory_equivalent_on(x, y, space).certified();
    bool yx = theory_equivalent_on(y, x, space).certified();
    CHECK(xy == yx);  // symmetric
    if (xy && theory_equivalent_on(y, z, space).certified())
      CHECK(theory_equivalent_on(x, z, space).certified());  // transitive
  }
}

TEST_CASE("subsumption covers instances and supersets") {
  CHECK(subsumes(den(":- p(X)."), den(":- p(a).")));
  CHECK(subsumes(den(":- p(X)."), den(":- p(a), q(b).")));
  CHECK(subsumes(den(":- p(X), q(X)."), den(":- p(a), q(a), r(b).")));
  CHECK_FALSE(subsumes(den(":- p(a)."), den(":- p(X).")));
  CHECK_FALSE(subsumes(den(":- p(X), q(X)."), den(":- p(a), q(b).")));
  CHECK(subsumes(den(":- p(X), X != a."), den(":- p(Y), q(Y), Y != a.")));
  CHECK_FALSE(subsumes(den(":- p(X), X != a."), den(":- p(Y), q(Y).")));
  CHECK(subsumes(Denial::falsum(), den(":- p(a).")));
}

TEST_CASE("safety violations are rejected at construction") {
  CHECK_THROWS_AS(den(":- not p(X)."), ParseError);      // variable only under negation
  CHECK_THROWS_AS(den(":- p(a), X != a."), ParseError);  // side-condition variable unbound
  CHECK_THROWS_AS(tu::rule("h(X) :- not p(X)."), ParseError);
  CHECK_THROWS_AS(tu::rule("h(Y) :- p(X)."), ParseError);
}
