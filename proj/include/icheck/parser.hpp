#pragma once

#include <map>
#include <string>
#include <string_view>

#include "icheck/database.hpp"
#include "icheck/update.hpp"

namespace icheck {

// Shared predicate/arity table. Parsing against the same table enforces
// consistent arities across a whole workspace (database, constraints,
// updates).
using SignatureTable = std::map<std::string, std::size_t>;

// Statement syntax (one statement per '.'; '%' starts a comment):
//   fact        p(a).
//   rule        h(X) :- p(X), not q(X).
//   denial      :- p(X), q(X), X != a.        (":- true." is falsum)
//   insertion   +p(a).
//   deletion    -p(a).
//   swap        swap p q.
//   map         map target source.            (consecutive lines form one step)
// Constants and predicates match [a-z][a-zA-Z0-9_]*, variables
// [A-Z][a-zA-Z0-9_]*, parameters $[a-zA-Z_][a-zA-Z0-9_]*.
// `not`, `swap`, `map` and `true` are reserved words.

struct ParsedProgram {
  std::set<Atom> facts;
  std::vector<Rule> rules;
};

ParsedProgram parse_program(std::string_view text, SignatureTable* signatures = nullptr);
IntegrityTheory parse_theory(std::string_view text, SignatureTable* signatures = nullptr);
Update parse_update(std::string_view text, SignatureTable* signatures = nullptr);

// Single-statement conveniences (mostly for tests).
Denial parse_denial(std::string_view text);
Rule parse_rule(std::string_view text);
Atom parse_fact(std::string_view text);

Database database_from(const ParsedProgram& p, const SignatureTable& signatures);

}  // namespace icheck
