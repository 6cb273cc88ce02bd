#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "icheck/clause.hpp"
#include "icheck/database.hpp"
#include "icheck/update.hpp"

namespace icheck {

// Canonical text forms; parse(print(x)) == x for everything the system
// produces.

std::string print(const Term& t);
std::string print(const Atom& a);
std::string print(const Literal& l);
std::string print(const TermConstraint& c);
std::string print(const Denial& d);          // ":- lit1, lit2, X != a."
std::string print(const Rule& r);            // "h :- b1, b2."
std::string print_fact(const Atom& a);       // "p(a)."

// One line per denial, sorted lexicographically on the printed form.
std::vector<std::string> print_lines(const IntegrityTheory& t);
std::string print(const IntegrityTheory& t);

std::vector<std::string> print_lines(const Update& u);
std::string print(const Update& u);

// Facts (sorted) followed by rules.
std::string print(const Database& db);

std::ostream& operator<<(std::ostream& os, const Term& t);
std::ostream& operator<<(std::ostream& os, const Atom& a);
std::ostream& operator<<(std::ostream& os, const Literal& l);
std::ostream& operator<<(std::ostream& os, const Denial& d);
std::ostream& operator<<(std::ostream& os, const IntegrityTheory& t);

}  // namespace icheck
