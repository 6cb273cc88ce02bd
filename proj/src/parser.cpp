#include "icheck/parser.hpp"

#include <cctype>

namespace icheck {

namespace {

enum class Tok {
  LowerIdent,  // constants, predicates, keywords
  UpperIdent,  // variables
  Param,       // $name
  LParen,
  RParen,
  Comma,
  Period,
  Implies,  // :-
  Neq,      // !=
  Eq,       // =
  Plus,
  Minus,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space();
    if (pos_ >= text_.size()) return {Tok::End, "", line_};
    char c = text_[pos_];
    if (c == '(') return simple(Tok::LParen);
    if (c == ')') return simple(Tok::RParen);
    if (c == ',') return simple(Tok::Comma);
    if (c == '.') return simple(Tok::Period);
    if (c == '+') return simple(Tok::Plus);
    if (c == '-') return simple(Tok::Minus);
    if (c == '=') return simple(Tok::Eq);
    if (c == ':') {
      if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
        pos_ += 2;
        return {Tok::Implies, ":-", line_};
      }
      fail("stray ':'");
    }
    if (c == '!') {
      if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
        pos_ += 2;
        return {Tok::Neq, "!=", line_};
      }
      fail("stray '!'");
    }
    if (c == '$') {
      ++pos_;
      std::string name = ident("parameter name");
      return {Tok::Param, name, line_};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name = ident("identifier");
      return {std::isupper(static_cast<unsigned char>(name[0])) ? Tok::UpperIdent
                                                                : Tok::LowerIdent,
              name, line_};
    }
    fail(std::string("unexpected character '") + c + "'");
    return {};
  }

 private:
  Token simple(Tok kind) {
    Token t{kind, std::string(1, text_[pos_]), line_};
    ++pos_;
    return t;
  }

  std::string ident(const char* what) {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (pos_ == start) fail(std::string("expected ") + what);
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError("line " + std::to_string(line_) + ": " + msg);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

bool is_reserved(const std::string& s) {
  return s == "not" || s == "swap" || s == "map" || s == "true";
}

struct Parser {
  Lexer lexer;
  Token tok;
  SignatureTable* signatures;
  SignatureTable local;

  Parser(std::string_view text, SignatureTable* sig)
      : lexer(text), tok(lexer.next()), signatures(sig ? sig : &local) {}

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError("line " + std::to_string(tok.line) + ": " + msg);
  }

  void advance() { tok = lexer.next(); }

  void expect(Tok kind, const char* what) {
    if (tok.kind != kind) fail(std::string("expected ") + what);
    advance();
  }

  void note_signature(const Atom& a) {
    auto [it, inserted] = signatures->emplace(a.predicate, a.arity());
    if (!inserted && it->second != a.arity())
      fail("arity mismatch for predicate '" + a.predicate + "': used with " +
           std::to_string(a.arity()) + ", declared with " + std::to_string(it->second));
  }

  Term term() {
    if (tok.kind == Tok::UpperIdent) {
      Term t = Term::variable(tok.text);
      advance();
      return t;
    }
    if (tok.kind == Tok::Param) {
      Term t = Term::parameter(tok.text);
      advance();
      return t;
    }
    if (tok.kind == Tok::LowerIdent) {
      if (is_reserved(tok.text)) fail("'" + tok.text + "' is a reserved word");
      Term t = Term::constant(tok.text);
      advance();
      return t;
    }
    fail("expected a term");
  }

  Atom atom_after_name(std::string predicate) {
    Atom a{std::move(predicate), {}};
    if (tok.kind == Tok::LParen) {
      advance();
      while (true) {
        a.args.push_back(term());
        if (tok.kind == Tok::Comma) {
          advance();
          continue;
        }
        break;
      }
      expect(Tok::RParen, "')'");
    }
    note_signature(a);
    return a;
  }

  Atom atom() {
    if (tok.kind != Tok::LowerIdent) fail("expected a predicate name");
    if (is_reserved(tok.text)) fail("'" + tok.text + "' is a reserved word");
    std::string name = tok.text;
    advance();
    return atom_after_name(std::move(name));
  }

  // A body element: literal, side condition, or the keyword `true`
  // (returned as neither; flagged through *saw_true).
  struct BodyItem {
    std::optional<Literal> literal;
    std::optional<TermConstraint> constraint;
  };

  BodyItem body_item() {
    if (tok.kind == Tok::LowerIdent && tok.text == "not") {
      advance();
      return {neg(atom()), std::nullopt};
    }
    // Variables and parameters can only start a side condition.
    if (tok.kind == Tok::UpperIdent || tok.kind == Tok::Param) {
      Term lhs = term();
      return {std::nullopt, finish_constraint(std::move(lhs))};
    }
    if (tok.kind != Tok::LowerIdent) fail("expected a literal or side condition");
    if (is_reserved(tok.text)) fail("'" + tok.text + "' is a reserved word here");
    std::string name = tok.text;
    advance();
    if (tok.kind == Tok::Neq || tok.kind == Tok::Eq)
      return {std::nullopt, finish_constraint(Term::constant(name))};
    return {pos(atom_after_name(std::move(name))), std::nullopt};
  }

  TermConstraint finish_constraint(Term lhs) {
    if (tok.kind == Tok::Neq) {
      advance();
      return neq(std::move(lhs), term());
    }
    if (tok.kind == Tok::Eq) {
      advance();
      return eq(std::move(lhs), term());
    }
    fail("expected '!=' or '=' in side condition");
  }

  void body(std::vector<Literal>& lits, std::vector<TermConstraint>& conds) {
    while (true) {
      BodyItem item = body_item();
      if (item.literal) lits.push_back(std::move(*item.literal));
      if (item.constraint) conds.push_back(std::move(*item.constraint));
      if (tok.kind == Tok::Comma) {
        advance();
        continue;
      }
      break;
    }
  }

  Denial denial_tail(int line) {
    // after ':-'
    if (tok.kind == Tok::LowerIdent && tok.text == "true") {
      advance();
      expect(Tok::Period, "'.'");
      return Denial::falsum();
    }
    std::vector<Literal> lits;
    std::vector<TermConstraint> conds;
    body(lits, conds);
    expect(Tok::Period, "'.'");
    try {
      return Denial(std::move(lits), std::move(conds));
    } catch (const InputError& e) {
      throw ParseError("line " + std::to_string(line) + ": " + e.what());
    }
  }
};

void require_ground_fact(const Atom& a, int line) {
  if (!a.is_ground() || a.has_parameters())
    throw ParseError("line " + std::to_string(line) + ": fact " + a.predicate +
                     " must be ground");
}

}  // namespace

ParsedProgram parse_program(std::string_view text, SignatureTable* signatures) {
  Parser p(text, signatures);
  ParsedProgram out;
  while (p.tok.kind != Tok::End) {
    int line = p.tok.line;
    if (p.tok.kind == Tok::Implies)
      p.fail("a database file cannot contain denials; put constraints in the --ic file");
    Atom head = p.atom();
    if (p.tok.kind == Tok::Period) {
      p.advance();
      require_ground_fact(head, line);
      out.facts.insert(std::move(head));
      continue;
    }
    p.expect(Tok::Implies, "'.' or ':-'");
    std::vector<Literal> lits;
    std::vector<TermConstraint> conds;
    p.body(lits, conds);
    if (!conds.empty())
      throw ParseError("line " + std::to_string(line) + ": side conditions are only "
                       "allowed in denials");
    p.expect(Tok::Period, "'.'");
    try {
      out.rules.emplace_back(std::move(head), std::move(lits));
    } catch (const InputError& e) {
      throw ParseError("line " + std::to_string(line) + ": " + e.what());
    }
  }
  return out;
}

IntegrityTheory parse_theory(std::string_view text, SignatureTable* signatures) {
  Parser p(text, signatures);
  std::set<Denial> denials;
  while (p.tok.kind != Tok::End) {
    int line = p.tok.line;
    p.expect(Tok::Implies, "':-' (constraints are denials)");
    denials.insert(p.denial_tail(line));
  }
  return IntegrityTheory(std::move(denials));
}

Update parse_update(std::string_view text, SignatureTable* signatures) {
  Parser p(text, signatures);
  Update out;
  FactDelta pending;
  std::map<std::string, std::string> pending_map;

  auto flush_delta = [&]() {
    if (!pending.empty()) {
      out = out.then(Update::fact_delta(std::move(pending.insertions),
                                        std::move(pending.deletions)));
      pending = {};
    }
  };
  auto flush_map = [&]() {
    if (!pending_map.empty()) {
      out = out.then(Update::relation_map(std::move(pending_map)));
      pending_map = {};
    }
  };

  while (p.tok.kind != Tok::End) {
    int line = p.tok.line;
    if (p.tok.kind == Tok::Plus || p.tok.kind == Tok::Minus) {
      flush_map();
      bool insert = p.tok.kind == Tok::Plus;
      p.advance();
      Atom a = p.atom();
      if (!a.is_ground())
        throw ParseError("line " + std::to_string(line) + ": update atom " + a.predicate +
                         " contains variables");
      p.expect(Tok::Period, "'.'");
      if (insert)
        pending.insertions.insert(std::move(a));
      else
        pending.deletions.insert(std::move(a));
      continue;
    }
    if (p.tok.kind == Tok::LowerIdent && p.tok.text == "swap") {
      flush_delta();
      flush_map();
      p.advance();
      if (p.tok.kind != Tok::LowerIdent) p.fail("expected a predicate name after 'swap'");
      std::string a = p.tok.text;
      p.advance();
      if (p.tok.kind != Tok::LowerIdent) p.fail("expected a second predicate name after 'swap'");
      std::string b = p.tok.text;
      p.advance();
      p.expect(Tok::Period, "'.'");
      out = out.then(Update::swap(a, b));
      continue;
    }
    if (p.tok.kind == Tok::LowerIdent && p.tok.text == "map") {
      flush_delta();
      p.advance();
      if (p.tok.kind != Tok::LowerIdent) p.fail("expected a target predicate after 'map'");
      std::string target = p.tok.text;
      p.advance();
      if (p.tok.kind != Tok::LowerIdent) p.fail("expected a source predicate after 'map'");
      std::string source = p.tok.text;
      p.advance();
      p.expect(Tok::Period, "'.'");
      if (!pending_map.emplace(target, source).second)
        throw ParseError("line " + std::to_string(line) + ": predicate '" + target +
                         "' mapped twice in one block");
      continue;
    }
    p.fail("expected an update statement: '+fact.', '-fact.', 'swap p q.' or 'map p q.'");
  }
  try {
    flush_delta();
    flush_map();
  } catch (const InputError& e) {
    throw ParseError(std::string("update: ") + e.what());
  }
  return out;
}

Denial parse_denial(std::string_view text) {
  IntegrityTheory t = parse_theory(text);
  if (t.denials.size() != 1) throw ParseError("expected exactly one denial");
  return *t.denials.begin();
}

Rule parse_rule(std::string_view text) {
  ParsedProgram p = parse_program(text);
  if (p.rules.size() != 1 || !p.facts.empty()) throw ParseError("expected exactly one rule");
  return p.rules[0];
}

Atom parse_fact(std::string_view text) {
  ParsedProgram p = parse_program(text);
  if (p.facts.size() != 1 || !p.rules.empty()) throw ParseError("expected exactly one fact");
  return *p.facts.begin();
}

Database database_from(const ParsedProgram& p, const SignatureTable& signatures) {
  return Database(p.facts, p.rules, signatures);
}

}  // namespace icheck
