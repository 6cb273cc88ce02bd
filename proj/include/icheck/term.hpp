#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "icheck/errors.hpp"

namespace icheck {

enum class TermKind : unsigned char { Constant, Parameter, Variable };

// A term of the clause language: a constant, a variable, or a parameter.
// Parameters are placeholder constants whose identity is fixed only when an
// update pattern is instantiated; two distinct parameters may later denote
// the same constant, so they never unify with anything but themselves.
struct Term {
  TermKind kind;
  std::string name;

  Term(TermKind k, std::string n) : kind(k), name(std::move(n)) {
    if (name.empty()) throw InputError("term name must be nonempty");
  }

  static Term variable(std::string n) { return Term(TermKind::Variable, std::move(n)); }
  static Term constant(std::string n) { return Term(TermKind::Constant, std::move(n)); }
  static Term parameter(std::string n) { return Term(TermKind::Parameter, std::move(n)); }

  bool is_variable() const { return kind == TermKind::Variable; }
  bool is_constant() const { return kind == TermKind::Constant; }
  bool is_parameter() const { return kind == TermKind::Parameter; }
  bool is_ground() const { return kind != TermKind::Variable; }

  auto operator<=>(const Term&) const = default;
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  std::size_t arity() const { return args.size(); }
  bool is_ground() const;
  bool has_parameters() const;

  auto operator<=>(const Atom&) const = default;
};

// The `negative` flag comes first so that the synthesized ordering sorts
// positive literals before negative ones.
struct Literal {
  bool negative = false;
  Atom atom;

  bool positive() const { return !negative; }
  auto operator<=>(const Literal&) const = default;
};

inline Literal pos(Atom a) { return Literal{false, std::move(a)}; }
inline Literal neg(Atom a) { return Literal{true, std::move(a)}; }

// An idempotent finite mapping from variables to terms: no key maps to
// itself and no term in the range mentions a key.
class Substitution {
 public:
  Substitution() = default;
  explicit Substitution(std::map<std::string, Term> bindings);

  const std::map<std::string, Term>& bindings() const { return bindings_; }
  bool empty() const { return bindings_.empty(); }

  Term apply(const Term& t) const;
  Atom apply(const Atom& a) const;
  Literal apply(const Literal& l) const;

  bool operator==(const Substitution&) const = default;

 private:
  std::map<std::string, Term> bindings_;
};

// Most general unifier of two atoms. Constants and parameters unify only
// with themselves; when two variables meet, the lexicographically earlier
// name becomes the binding key, which makes the result deterministic.
// Throws VocabularyError if the atoms share a predicate name but disagree
// on arity (a malformed program, not a failed unification).
std::optional<Substitution> unify(const Atom& a, const Atom& b);

void collect_variables(const Term& t, std::set<std::string>& out);
void collect_variables(const Atom& a, std::set<std::string>& out);
void collect_variables(const Literal& l, std::set<std::string>& out);

void collect_constants(const Term& t, std::set<std::string>& out);
void collect_constants(const Atom& a, std::set<std::string>& out);

void collect_parameters(const Term& t, std::set<std::string>& out);
void collect_parameters(const Atom& a, std::set<std::string>& out);

}  // namespace icheck
