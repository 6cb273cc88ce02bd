#include "icheck/clause.hpp"

#include <algorithm>

namespace icheck {

namespace {

std::set<std::string> positive_variables(const std::vector<Literal>& body) {
  std::set<std::string> vars;
  for (const Literal& l : body)
    if (l.positive()) collect_variables(l.atom, vars);
  return vars;
}

}  // namespace

Rule::Rule(Atom h, std::vector<Literal> b) : head(std::move(h)), body(std::move(b)) {
  if (body.empty())
    throw InputError("rule for '" + head.predicate + "' has an empty body; write a fact instead");
  std::set<std::string> covered = positive_variables(body);
  std::set<std::string> needed;
  collect_variables(head, needed);
  for (const Literal& l : body)
    if (l.negative) collect_variables(l.atom, needed);
  for (const std::string& v : needed)
    if (covered.count(v) == 0)
      throw SafetyError("unsafe rule for '" + head.predicate + "': variable " + v +
                        " does not occur in a positive body literal");
}

Denial::Denial(std::vector<Literal> body, std::vector<TermConstraint> side_conditions)
    : body_(std::move(body)), side_conditions_(std::move(side_conditions)) {
  std::set<std::string> covered = positive_variables(body_);
  std::set<std::string> needed;
  for (const Literal& l : body_)
    if (l.negative) collect_variables(l.atom, needed);
  for (const TermConstraint& c : side_conditions_) collect_variables(c, needed);
  for (const std::string& v : needed)
    if (covered.count(v) == 0)
      throw SafetyError("unsafe denial: variable " + v +
                        " occurs only in a negative literal or side condition");
}

bool Denial::has_parameters() const {
  for (const Literal& l : body_)
    if (l.atom.has_parameters()) return true;
  for (const TermConstraint& c : side_conditions_)
    if (c.lhs.is_parameter() || c.rhs.is_parameter()) return true;
  return false;
}

bool IntegrityTheory::is_falsum() const {
  return std::any_of(denials.begin(), denials.end(),
                     [](const Denial& d) { return d.is_falsum(); });
}

bool IntegrityTheory::has_parameters() const {
  return std::any_of(denials.begin(), denials.end(),
                     [](const Denial& d) { return d.has_parameters(); });
}

std::size_t IntegrityTheory::literal_count() const {
  std::size_t n = 0;
  for (const Denial& d : denials) n += d.body().size();
  return n;
}

Denial apply_subst(const Substitution& s, const Denial& d) {
  std::vector<Literal> body;
  body.reserve(d.body().size());
  for (const Literal& l : d.body()) body.push_back(s.apply(l));
  std::vector<TermConstraint> conds;
  conds.reserve(d.side_conditions().size());
  for (const TermConstraint& c : d.side_conditions())
    conds.emplace_back(c.rel, s.apply(c.lhs), s.apply(c.rhs));
  return Denial(std::move(body), std::move(conds));
}

namespace {

// One-way matching: variables of the subsuming clause bind to terms of the
// subsumed one; everything else must coincide.
bool match_term(const Term& ct, const Term& dt, std::map<std::string, Term>& bind) {
  if (ct.is_variable()) {
    auto [it, inserted] = bind.emplace(ct.name, dt);
    return inserted || it->second == dt;
  }
  return ct == dt;
}

bool match_atom(const Atom& ca, const Atom& da, std::map<std::string, Term>& bind) {
  if (ca.predicate != da.predicate || ca.arity() != da.arity()) return false;
  for (std::size_t i = 0; i < ca.args.size(); ++i)
    if (!match_term(ca.args[i], da.args[i], bind)) return false;
  return true;
}

bool conds_covered(const std::vector<TermConstraint>& cconds,
                   const std::vector<TermConstraint>& dconds,
                   const std::map<std::string, Term>& bind) {
  auto mapped_term = [&bind](const Term& t) {
    if (t.is_variable()) {
      auto it = bind.find(t.name);
      if (it != bind.end()) return it->second;
    }
    return t;
  };
  for (const TermConstraint& c : cconds) {
    TermConstraint mapped(c.rel, mapped_term(c.lhs), mapped_term(c.rhs));
    if (std::find(dconds.begin(), dconds.end(), mapped) == dconds.end()) return false;
  }
  return true;
}

bool subsume_from(const std::vector<Literal>& cbody, std::size_t i, const Denial& c,
                  const Denial& d, std::map<std::string, Term>& bind) {
  if (i == cbody.size()) return conds_covered(c.side_conditions(), d.side_conditions(), bind);
  const Literal& cl = cbody[i];
  for (const Literal& dl : d.body()) {
    if (cl.negative != dl.negative) continue;
    std::map<std::string, Term> saved = bind;
    if (match_atom(cl.atom, dl.atom, bind) && subsume_from(cbody, i + 1, c, d, bind))
      return true;
    bind = std::move(saved);
  }
  return false;
}

}  // namespace

bool subsumes(const Denial& c, const Denial& d) {
  std::map<std::string, Term> bind;
  return subsume_from(c.body(), 0, c, d, bind);
}

void collect_variables(const TermConstraint& c, std::set<std::string>& out) {
  collect_variables(c.lhs, out);
  collect_variables(c.rhs, out);
}

void collect_constants(const Denial& d, std::set<std::string>& out) {
  for (const Literal& l : d.body()) collect_constants(l.atom, out);
  for (const TermConstraint& c : d.side_conditions()) {
    collect_constants(c.lhs, out);
    collect_constants(c.rhs, out);
  }
}

void collect_constants(const IntegrityTheory& t, std::set<std::string>& out) {
  for (const Denial& d : t.denials) collect_constants(d, out);
}

void collect_parameters(const Denial& d, std::set<std::string>& out) {
  for (const Literal& l : d.body()) collect_parameters(l.atom, out);
  for (const TermConstraint& c : d.side_conditions()) {
    collect_parameters(c.lhs, out);
    collect_parameters(c.rhs, out);
  }
}

}  // namespace icheck
