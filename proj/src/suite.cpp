#include "icheck/suite.hpp"

#include <algorithm>

#include "icheck/parser.hpp"

namespace icheck {

namespace {

std::size_t base_size(std::size_t universe, const std::vector<std::size_t>& arities) {
  std::size_t n = 0;
  for (std::size_t a : arities) {
    std::size_t cells = 1;
    for (std::size_t i = 0; i < a; ++i) cells *= universe;
    n += cells;
  }
  return n;
}

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[rng() % v.size()];
}

bool chance(std::mt19937_64& rng, int percent) {
  return static_cast<int>(rng() % 100) < percent;
}

Atom random_pattern(std::mt19937_64& rng, const std::string& pred, std::size_t arity,
                    const std::vector<std::string>& universe,
                    const std::vector<std::string>& var_pool, bool ground_only) {
  Atom a{pred, {}};
  for (std::size_t i = 0; i < arity; ++i) {
    if (!ground_only && chance(rng, 60))
      a.args.push_back(Term::variable(pick(rng, var_pool)));
    else
      a.args.push_back(Term::constant(pick(rng, universe)));
  }
  return a;
}

Denial random_denial(std::mt19937_64& rng, const std::map<std::string, std::size_t>& vocab,
                     const std::vector<std::string>& universe) {
  std::vector<std::pair<std::string, std::size_t>> preds(vocab.begin(), vocab.end());
  std::vector<std::string> var_pool{"X", "Y"};

  std::size_t n_pos = 1 + rng() % 2;
  std::vector<Literal> body;
  std::set<std::string> bound;
  for (std::size_t i = 0; i < n_pos; ++i) {
    const auto& [pred, arity] = pick(rng, preds);
    Atom a = random_pattern(rng, pred, arity, universe, var_pool, false);
    collect_variables(a, bound);
    body.push_back(pos(std::move(a)));
  }
  std::vector<std::string> bound_pool(bound.begin(), bound.end());

  if (chance(rng, 35)) {
    const auto& [pred, arity] = pick(rng, preds);
    Atom a{pred, {}};
    for (std::size_t i = 0; i < arity; ++i) {
      if (!bound_pool.empty() && chance(rng, 60))
        a.args.push_back(Term::variable(pick(rng, bound_pool)));
      else
        a.args.push_back(Term::constant(pick(rng, universe)));
    }
    body.push_back(neg(std::move(a)));
  }

  std::vector<TermConstraint> conds;
  if (!bound_pool.empty() && chance(rng, 25)) {
    Term lhs = Term::variable(pick(rng, bound_pool));
    Term rhs = chance(rng, 50) && bound_pool.size() > 1
                   ? Term::variable(pick(rng, bound_pool))
                   : Term::constant(pick(rng, universe));
    if (lhs != rhs) conds.push_back(neq(lhs, rhs));
  }
  return Denial(std::move(body), std::move(conds));
}

std::set<Atom> random_ground_atoms(std::mt19937_64& rng, const EnumerationSpace& space,
                                   std::size_t max_count) {
  std::set<Atom> out;
  const std::vector<Atom>& base = space.herbrand_base();
  std::size_t n = rng() % (max_count + 1);
  for (std::size_t i = 0; i < n && !base.empty(); ++i) out.insert(base[rng() % base.size()]);
  return out;
}

Update random_update(std::mt19937_64& rng, const EnumerationSpace& space,
                     const std::map<std::string, std::size_t>& vocab, bool idempotent_only) {
  auto delta = [&]() {
    std::set<Atom> ins = random_ground_atoms(rng, space, 2);
    std::set<Atom> del = random_ground_atoms(rng, space, 2);
    for (const Atom& a : ins) del.erase(a);
    return Update::fact_delta(std::move(ins), std::move(del));
  };
  if (idempotent_only) return delta();

  auto swap = [&]() -> Update {
    std::map<std::size_t, std::vector<std::string>> by_arity;
    for (const auto& [pred, arity] : vocab) by_arity[arity].push_back(pred);
    for (const auto& [arity, preds] : by_arity)
      if (preds.size() >= 2) {
        std::size_t i = rng() % preds.size();
        std::size_t j = rng() % preds.size();
        if (i == j) j = (j + 1) % preds.size();
        return Update::swap(preds[i], preds[j]);
      }
    return delta();
  };

  int roll = static_cast<int>(rng() % 100);
  if (roll < 45) return delta();
  if (roll < 80) return swap();
  return delta().then(swap());
}

}  // namespace

SuiteEntry random_suite_entry(std::mt19937_64& rng, bool idempotent_only,
                              const SuiteOptions& opt) {
  // Universe and vocabulary templates are sized so the Herbrand base stays
  // enumerable together with the derived plain tests.
  struct Shape {
    std::vector<std::string> universe;
    std::map<std::string, std::size_t> vocab;
  };
  static const std::vector<Shape> shapes = {
      {{"a", "b"}, {{"p", 1}, {"q", 1}}},
      {{"a", "b", "c"}, {{"p", 1}, {"q", 1}}},
      {{"a", "b", "c"}, {{"p", 1}, {"q", 1}, {"s", 1}}},
      {{"a", "b"}, {{"p", 1}, {"q", 1}, {"r", 2}}},
      {{"a", "b"}, {{"r", 2}, {"s", 2}}},
      {{"a", "b", "c"}, {{"p", 1}, {"r", 2}}},
  };

  while (true) {
    const Shape& shape = shapes[rng() % shapes.size()];
    std::vector<std::size_t> arities;
    for (const auto& [pred, arity] : shape.vocab) arities.push_back(arity);
    if (base_size(shape.universe.size(), arities) > opt.max_base_atoms) continue;

    EnumerationSpace space(shape.universe, shape.vocab, {}, opt.max_databases);
    std::set<Denial> denials;
    std::size_t n = 1 + rng() % 2;
    for (std::size_t i = 0; i < n; ++i)
      denials.insert(random_denial(rng, shape.vocab, shape.universe));
    Update u = random_update(rng, space, shape.vocab, idempotent_only);

    SuiteEntry entry{IntegrityTheory(std::move(denials)), std::move(u), std::move(space),
                     std::nullopt, std::nullopt, std::nullopt, "random"};
    return entry;
  }
}

SuiteEntry swap_example_entry(std::uint64_t max_databases) {
  IntegrityTheory gamma{parse_denial(":- p(a), q(b).")};
  IntegrityTheory sigma{parse_denial(":- q(a), p(b).")};
  Update u = Update::swap("p", "q");
  EnumerationSpace space({"a", "b"}, {{"p", 1}, {"q", 1}}, {}, max_databases);
  Database witness(
      {parse_fact("p(a)."), parse_fact("p(b)."), parse_fact("q(a).")}, {},
      space.vocabulary());
  return SuiteEntry{gamma, u, space, sigma, gamma, witness, "swap of p and q"};
}

SuiteEntry insertion_example_entry(std::uint64_t max_databases) {
  IntegrityTheory gamma{parse_denial(":- p(a).")};
  IntegrityTheory sigma{parse_denial(":- not p(a).")};
  Update u = Update::insertion({parse_fact("p(a).")});
  EnumerationSpace space({"a"}, {{"p", 1}}, {}, max_databases);
  Database witness({}, {}, space.vocabulary());
  return SuiteEntry{gamma, u, space, sigma, gamma, witness, "insertion of p(a)"};
}

std::vector<SuiteEntry> table_suite(bool idempotent_class, const SuiteOptions& opt) {
  std::vector<SuiteEntry> suite;
  std::mt19937_64 rng(opt.seed + (idempotent_class ? 1 : 0));

  switch (opt.kind) {
    case SuiteKind::Default:
      // The fixed counterexample pair for the class comes first, so the
      // reported witnesses are the canonical ones.
      suite.push_back(idempotent_class ? insertion_example_entry(opt.max_databases)
                                       : swap_example_entry(opt.max_databases));
      for (std::size_t i = 0; i < opt.random_pairs; ++i)
        suite.push_back(random_suite_entry(rng, idempotent_class, opt));
      break;
    case SuiteKind::Empty:
      for (std::size_t i = 0; i < opt.random_pairs; ++i) {
        SuiteEntry e = random_suite_entry(rng, idempotent_class, opt);
        e.update = Update();
        e.label = "random, empty update";
        suite.push_back(std::move(e));
      }
      break;
    case SuiteKind::Swaps:
      if (!idempotent_class) {
        suite.push_back(swap_example_entry(opt.max_databases));
        for (std::size_t i = 0; i + 1 < opt.random_pairs; ++i) {
          SuiteEntry e = random_suite_entry(rng, false, opt);
          std::vector<std::string> preds;
          for (const auto& [pred, arity] : e.space.vocabulary())
            if (arity == e.space.vocabulary().begin()->second) preds.push_back(pred);
          if (preds.size() >= 2)
            e.update = Update::swap(preds[0], preds[1]);
          else
            e.update = Update();
          e.label = "random, swap update";
          suite.push_back(std::move(e));
        }
      }
      // Swaps are never idempotent; the idempotent column gets an empty
      // (vacuous) suite.
      break;
  }
  return suite;
}

}  // namespace icheck
