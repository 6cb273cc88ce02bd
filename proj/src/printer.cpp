#include "icheck/printer.hpp"

#include <algorithm>
#include <sstream>

namespace icheck {

std::string print(const Term& t) {
  switch (t.kind) {
    case TermKind::Parameter: return "$" + t.name;
    case TermKind::Constant:
    case TermKind::Variable: return t.name;
  }
  return t.name;
}

std::string print(const Atom& a) {
  if (a.args.empty()) return a.predicate;
  std::string s = a.predicate + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) s += ",";
    s += print(a.args[i]);
  }
  return s + ")";
}

std::string print(const Literal& l) {
  return l.negative ? "not " + print(l.atom) : print(l.atom);
}

std::string print(const TermConstraint& c) {
  const char* op = c.rel == TermConstraint::Rel::NotEqual ? " != " : " = ";
  return print(c.lhs) + op + print(c.rhs);
}

std::string print(const Denial& d) {
  if (d.is_falsum()) return ":- true.";
  std::string s = ":- ";
  bool first = true;
  for (const Literal& l : d.body()) {
    if (!first) s += ", ";
    s += print(l);
    first = false;
  }
  for (const TermConstraint& c : d.side_conditions()) {
    if (!first) s += ", ";
    s += print(c);
    first = false;
  }
  return s + ".";
}

std::string print(const Rule& r) {
  std::string s = print(r.head) + " :- ";
  for (std::size_t i = 0; i < r.body.size(); ++i) {
    if (i) s += ", ";
    s += print(r.body[i]);
  }
  return s + ".";
}

std::string print_fact(const Atom& a) { return print(a) + "."; }

std::vector<std::string> print_lines(const IntegrityTheory& t) {
  std::vector<std::string> lines;
  lines.reserve(t.denials.size());
  for (const Denial& d : t.denials) lines.push_back(print(d));
  std::sort(lines.begin(), lines.end());
  return lines;
}

std::string print(const IntegrityTheory& t) {
  std::string s;
  for (const std::string& line : print_lines(t)) s += line + "\n";
  return s;
}

std::vector<std::string> print_lines(const Update& u) {
  std::vector<std::string> lines;
  for (const UpdateStep& s : u.steps()) {
    if (const FactDelta* d = std::get_if<FactDelta>(&s)) {
      for (const Atom& a : d->insertions) lines.push_back("+" + print_fact(a));
      for (const Atom& a : d->deletions) lines.push_back("-" + print_fact(a));
    } else {
      const RelationMap& m = std::get<RelationMap>(s);
      // A two-cycle prints as a swap; anything else as one map block.
      if (m.mapping.size() == 2) {
        auto it = m.mapping.begin();
        auto [t1, s1] = *it;
        auto [t2, s2] = *std::next(it);
        if (t1 == s2 && t2 == s1) {
          lines.push_back("swap " + t1 + " " + t2 + ".");
          continue;
        }
      }
      for (const auto& [target, source] : m.mapping)
        lines.push_back("map " + target + " " + source + ".");
    }
  }
  return lines;
}

std::string print(const Update& u) {
  std::string s;
  for (const std::string& line : print_lines(u)) s += line + "\n";
  return s;
}

std::string print(const Database& db) {
  std::string s;
  for (const Atom& f : db.facts()) s += print_fact(f) + "\n";
  for (const Rule& r : db.rules()) s += print(r) + "\n";
  return s;
}

std::ostream& operator<<(std::ostream& os, const Term& t) { return os << print(t); }
std::ostream& operator<<(std::ostream& os, const Atom& a) { return os << print(a); }
std::ostream& operator<<(std::ostream& os, const Literal& l) { return os << print(l); }
std::ostream& operator<<(std::ostream& os, const Denial& d) { return os << print(d); }
std::ostream& operator<<(std::ostream& os, const IntegrityTheory& t) { return os << print(t); }

}  // namespace icheck
