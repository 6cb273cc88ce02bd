#pragma once

#include <initializer_list>
#include <string>

#include "icheck/parser.hpp"
#include "icheck/printer.hpp"

namespace tu {

inline icheck::Atom fact(const std::string& s) { return icheck::parse_fact(s); }
inline icheck::Denial den(const std::string& s) { return icheck::parse_denial(s); }
inline icheck::Rule rule(const std::string& s) { return icheck::parse_rule(s); }

inline icheck::IntegrityTheory theory(std::initializer_list<std::string> lines) {
  std::string text;
  for (const std::string& l : lines) text += l + "\n";
  return icheck::parse_theory(text);
}

inline icheck::Database db(const std::string& text,
                           std::map<std::string, std::size_t> declared = {}) {
  icheck::SignatureTable sig = std::move(declared);
  icheck::ParsedProgram p = icheck::parse_program(text, &sig);
  return icheck::database_from(p, sig);
}

inline std::vector<std::string> lines(const icheck::IntegrityTheory& t) {
  return icheck::print_lines(t);
}

}  // namespace tu
