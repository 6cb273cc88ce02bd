#pragma once

#include <set>
#include <vector>

#include "icheck/term.hpp"

namespace icheck {

// A (dis)equality between two terms, attached to a denial as a side
// condition. Equalities arise only from parameterized updates, where the
// check "the denial fires when parameter x equals constant a" enforces the
// constraint x != a. Operands are stored in normalized order.
struct TermConstraint {
  enum class Rel : unsigned char { NotEqual, Equal };

  Rel rel;
  Term lhs, rhs;

  // Canonical orientation: variables before parameters before constants,
  // names tie-breaking, so X != a and $x = a print the natural way round.
  TermConstraint(Rel r, Term a, Term b)
      : rel(r), lhs(std::move(a)), rhs(std::move(b)) {
    auto key = [](const Term& t) {
      return std::pair<int, const std::string&>(-static_cast<int>(t.kind), t.name);
    };
    if (key(rhs) < key(lhs)) std::swap(lhs, rhs);
  }

  auto operator<=>(const TermConstraint&) const = default;
};

inline TermConstraint neq(Term a, Term b) {
  return TermConstraint(TermConstraint::Rel::NotEqual, std::move(a), std::move(b));
}
inline TermConstraint eq(Term a, Term b) {
  return TermConstraint(TermConstraint::Rel::Equal, std::move(a), std::move(b));
}

// head :- body. Safety: every variable of the head and of every negative
// body literal occurs in a positive body literal.
struct Rule {
  Atom head;
  std::vector<Literal> body;

  Rule(Atom h, std::vector<Literal> b);

  auto operator<=>(const Rule&) const = default;
};

// An integrity constraint as a headless clause: the body (together with the
// side conditions) describes a forbidden situation, so the denial is
// violated in a model exactly when the body is satisfiable there.
//
// An empty body with no side conditions is the always-violated denial
// ("falsum", printed ":- true."), which generated theories use to express
// the integrity theory that no database satisfies.
class Denial {
 public:
  explicit Denial(std::vector<Literal> body, std::vector<TermConstraint> side_conditions = {});

  static Denial falsum() { return Denial({}, {}); }

  const std::vector<Literal>& body() const { return body_; }
  const std::vector<TermConstraint>& side_conditions() const { return side_conditions_; }
  bool is_falsum() const { return body_.empty() && side_conditions_.empty(); }
  bool has_parameters() const;

  auto operator<=>(const Denial&) const = default;

 private:
  std::vector<Literal> body_;
  std::vector<TermConstraint> side_conditions_;
};

// A finite set of integrity constraints. A database satisfies the theory
// iff it satisfies every member.
struct IntegrityTheory {
  std::set<Denial> denials;

  IntegrityTheory() = default;
  IntegrityTheory(std::initializer_list<Denial> ds) : denials(ds) {}
  explicit IntegrityTheory(std::set<Denial> ds) : denials(std::move(ds)) {}

  static IntegrityTheory falsum() { return IntegrityTheory{Denial::falsum()}; }

  bool empty() const { return denials.empty(); }
  bool is_falsum() const;
  bool has_parameters() const;
  std::size_t literal_count() const;  // body literals, summed over denials

  auto operator<=>(const IntegrityTheory&) const = default;
};

Denial apply_subst(const Substitution& s, const Denial& d);
inline Atom apply_subst(const Substitution& s, const Atom& a) { return s.apply(a); }
inline Literal apply_subst(const Substitution& s, const Literal& l) { return s.apply(l); }

// Syntactic theta-subsumption: c subsumes d iff some substitution of c's
// variables maps every literal of c onto a literal of d and every side
// condition of c onto a side condition of d. When it holds, every violation
// of d is a violation of c, so d is redundant next to c.
bool subsumes(const Denial& c, const Denial& d);

void collect_variables(const TermConstraint& c, std::set<std::string>& out);
void collect_constants(const Denial& d, std::set<std::string>& out);
void collect_constants(const IntegrityTheory& t, std::set<std::string>& out);
void collect_parameters(const Denial& d, std::set<std::string>& out);

}  // namespace icheck
