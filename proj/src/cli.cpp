#include "icheck/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "icheck/oracle.hpp"
#include "icheck/parser.hpp"
#include "icheck/printer.hpp"
#include "icheck/simplify.hpp"
#include "icheck/suite.hpp"

namespace icheck {

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitAccepted = 0;
constexpr int kExitRejected = 1;
constexpr int kExitInput = 2;
constexpr int kExitResource = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write file: " + path);
  out << content;
}

// The machine-readable document goes after the human report, separated by a
// simple "---" line, unless redirected to a file.
void emit_json(std::ostream& out, const json& doc, const std::string& json_file) {
  if (json_file.empty())
    out << "---\n" << doc.dump(2) << "\n";
  else
    write_file(json_file, doc.dump(2) + "\n");
}

std::uint64_t default_budget() {
  if (const char* env = std::getenv("ICHECK_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return EnumerationSpace::kDefaultBudget;
}

struct Workspace {
  SignatureTable signatures;
  std::string db_path, db_raw;
  ParsedProgram program;
  IntegrityTheory gamma;
  Update update;

  Database database() const { return database_from(program, signatures); }
};

Workspace load_workspace(const std::string& db_file, const std::string& ic_file,
                         const std::string& update_file) {
  Workspace ws;
  if (!db_file.empty()) {
    ws.db_path = db_file;
    ws.db_raw = read_file(db_file);
    ws.program = parse_program(ws.db_raw, &ws.signatures);
  }
  if (!ic_file.empty()) ws.gamma = parse_theory(read_file(ic_file), &ws.signatures);
  if (!update_file.empty()) ws.update = parse_update(read_file(update_file), &ws.signatures);
  return ws;
}

std::map<std::string, std::string> parse_bindings(const std::vector<std::string>& binds) {
  std::map<std::string, std::string> out;
  for (const std::string& b : binds) {
    std::size_t sep = b.find('=');
    if (sep == std::string::npos || sep == 0 || sep + 1 >= b.size())
      throw InputError("--bind expects name=constant, got '" + b + "'");
    out[b.substr(0, sep)] = b.substr(sep + 1);
  }
  return out;
}

json cost_json(const CostReport& c) {
  json j;
  j["retrievals_test"] = c.retrievals_test;
  j["retrievals_original"] = c.retrievals_original;
  j["literal_count_test"] = c.literal_count_test;
  j["literal_count_original"] = c.literal_count_original;
  return j;
}

json database_json(const Database& db) {
  json facts = json::array();
  for (const Atom& f : db.facts()) facts.push_back(print_fact(f));
  return facts;
}

// Universe for oracle commands: explicit --universe constants plus every
// constant mentioned in the inputs.
std::vector<std::string> gather_universe(const std::vector<std::string>& flag,
                                         const Workspace& ws,
                                         const IntegrityTheory* candidate) {
  std::set<std::string> u(flag.begin(), flag.end());
  for (const Atom& f : ws.program.facts) collect_constants(f, u);
  collect_constants(ws.gamma, u);
  collect_constants(ws.update, u);
  if (candidate) collect_constants(*candidate, u);
  return {u.begin(), u.end()};
}

std::map<std::string, std::size_t> extensional_vocabulary(const Workspace& ws) {
  std::set<std::string> intensional;
  for (const Rule& r : ws.program.rules) intensional.insert(r.head.predicate);
  std::map<std::string, std::size_t> vocab;
  for (const auto& [pred, arity] : ws.signatures)
    if (intensional.count(pred) == 0) vocab[pred] = arity;
  return vocab;
}

// ---------------------------------------------------------------------------

int cmd_check(const std::string& db_file, const std::string& ic_file,
              const std::string& update_file, const std::string& mode,
              const std::vector<std::string>& binds, const std::string& json_file,
              std::ostream& out, std::ostream& err) {
  Workspace ws = load_workspace(db_file, ic_file, update_file);
  Update u = ws.update;
  if (u.has_parameters()) u = instantiate(u, parse_bindings(binds));

  Database old_db = ws.database();
  if (!holds(old_db, ws.gamma).satisfied)
    throw InputError("initial database is inconsistent with the integrity theory "
                     "(the old state must satisfy every constraint); refusing to check");

  bool pre_gate = mode == "pre";
  Test test = pre_gate ? optimized_pre_test(ws.gamma, u, ws.program.rules)
                       : optimized_post_test(ws.gamma, u, ws.program.rules);

  bool accepted;
  CostReport cost;
  if (pre_gate) {
    accepted = holds(old_db, test.theory).satisfied;
    cost = cost_compare(test, ws.gamma, old_db);
    if (accepted) write_file(ws.db_path, print(apply(u, old_db)));
  } else {
    Database new_db = apply(u, old_db);
    write_file(ws.db_path, print(new_db));  // execute first, roll back on failure
    accepted = holds(new_db, test.theory).satisfied;
    cost = cost_compare(test, ws.gamma, new_db);
    if (!accepted) write_file(ws.db_path, ws.db_raw);
  }

  err << (accepted ? "accepted" : "rejected") << " (" << (pre_gate ? "pre-gate" : "post-rollback")
      << " mode)\n";
  err << "test evaluated (" << (pre_gate ? "old state" : "new state") << "):\n";
  for (const std::string& line : print_lines(test.theory)) err << "  " << line << "\n";
  err << "cost: " << cost.retrievals_test << " retrievals for the test vs "
      << cost.retrievals_original << " for the full theory; " << cost.literal_count_test
      << " vs " << cost.literal_count_original << " literals\n";
  if (!accepted)
    err << (pre_gate ? "database file untouched\n" : "database file rolled back\n");

  json doc;
  doc["command"] = "check";
  doc["mode"] = pre_gate ? "pre-gate" : "post-rollback";
  doc["decision"] = accepted ? "accepted" : "rejected";
  doc["test_kind"] = pre_gate ? "optimized-pre" : "optimized-post";
  doc["test"] = print_lines(test.theory);
  doc["cost"] = cost_json(cost);
  doc["db_file"] = ws.db_path;
  doc["persisted"] = accepted;
  emit_json(out, doc, json_file);
  return accepted ? kExitAccepted : kExitRejected;
}

int cmd_simplify(const std::string& db_file, const std::string& ic_file,
                 const std::string& update_file, const std::string& kind,
                 bool regressed_post, std::size_t cap, const std::string& json_file,
                 std::ostream& out, std::ostream&) {
  Workspace ws = load_workspace(db_file, ic_file, update_file);
  SimplifyOptions opt;
  opt.dnf_cap = cap;
  opt.prefer_regressed_post = regressed_post;

  Test test = [&]() {
    if (kind == "pre") return optimized_pre_test(ws.gamma, ws.update, ws.program.rules, opt);
    if (kind == "post") return optimized_post_test(ws.gamma, ws.update, ws.program.rules, opt);
    if (kind == "plain-pre") return plain_pre_test(ws.gamma, ws.update, ws.program.rules, opt);
    if (kind == "plain-post") return plain_post_test(ws.gamma, ws.update, ws.program.rules, opt);
    throw InputError("unknown simplification kind: " + kind);
  }();

  for (const std::string& line : print_lines(test.theory)) out << line << "\n";

  json doc;
  doc["command"] = "simplify";
  doc["kind"] = kind;
  doc["state"] = test.state == EvalState::Pre ? "pre" : "post";
  doc["plainness"] = test.plainness == Plainness::Plain ? "plain" : "optimized";
  doc["theory"] = print_lines(test.theory);
  emit_json(out, doc, json_file);
  return kExitAccepted;
}

int cmd_verify(const std::string& db_file, const std::string& ic_file,
               const std::string& update_file, const std::string& candidate_file,
               const std::string& claim, const std::vector<std::string>& universe_flag,
               std::uint64_t budget, int threads, const std::string& json_file,
               std::ostream& out, std::ostream& err) {
  Workspace ws = load_workspace(db_file, ic_file, update_file);
  IntegrityTheory candidate = parse_theory(read_file(candidate_file), &ws.signatures);

  std::vector<std::string> universe = gather_universe(universe_flag, ws, &candidate);
  if (universe.empty())
    throw InputError("the universe is empty; provide constants with --universe");
  EnumerationSpace space(universe, extensional_vocabulary(ws), ws.program.rules, budget);

  Verdict v = [&]() {
    if (claim == "pre")
      return check_pre_test(candidate, ws.gamma, ws.update, space, Premise::ConsistentOnly, threads);
    if (claim == "plain-pre")
      return check_pre_test(candidate, ws.gamma, ws.update, space, Premise::AllDatabases, threads);
    if (claim == "post")
      return check_post_test(candidate, ws.gamma, ws.update, space, Premise::ConsistentOnly, threads);
    if (claim == "plain-post")
      return check_post_test(candidate, ws.gamma, ws.update, space, Premise::AllDatabases, threads);
    throw InputError("unknown claim kind: " + claim);
  }();

  if (v.certified()) {
    err << "certified as a " << claim << " test over " << v.space_size << " databases ("
        << v.detail << ")\n";
  } else {
    err << "refuted: " << v.detail << "\nwitness database:\n";
    for (const Atom& f : v.witness->facts()) err << "  " << print_fact(f) << "\n";
    if (v.witness->facts().empty()) err << "  (empty)\n";
  }

  json doc;
  doc["command"] = "verify";
  doc["claim"] = claim;
  doc["verdict"] = v.certified() ? "certified" : "refuted";
  doc["bounded"] = v.bounded;
  doc["space_size"] = v.space_size;
  doc["detail"] = v.detail;
  doc["witness"] = v.witness ? database_json(*v.witness) : json();
  emit_json(out, doc, json_file);
  return v.certified() ? kExitAccepted : kExitRejected;
}

int cmd_table(std::size_t pairs, std::uint64_t seed, const std::string& suite_kind,
              std::uint64_t budget, int threads, const std::string& json_file,
              std::ostream& out, std::ostream& err) {
  SuiteOptions opt;
  opt.random_pairs = pairs;
  opt.seed = seed;
  opt.max_databases = budget;
  if (suite_kind == "default")
    opt.kind = SuiteKind::Default;
  else if (suite_kind == "empty")
    opt.kind = SuiteKind::Empty;
  else if (suite_kind == "swaps")
    opt.kind = SuiteKind::Swaps;
  else
    throw InputError("unknown suite kind: " + suite_kind);

  const std::vector<TableRow> rows = {TableRow::PreInPost, TableRow::PostInPre,
                                      TableRow::Pre0InPre, TableRow::Post0InPost,
                                      TableRow::Pre0InPost};
  // The expected matrix: rows x (any U, idempotent U).
  const std::map<TableRow, std::pair<bool, bool>> expected = {
      {TableRow::PreInPost, {false, false}},  {TableRow::PostInPre, {false, false}},
      {TableRow::Pre0InPre, {true, true}},    {TableRow::Post0InPost, {true, true}},
      {TableRow::Pre0InPost, {false, true}},
  };

  std::vector<SuiteEntry> general = table_suite(false, opt);
  std::vector<SuiteEntry> idempotent = table_suite(true, opt);

  bool matches = true;
  json jrows = json::array();
  err << "relation               | any U | U idempotent\n";
  err << "-----------------------+-------+-------------\n";

  std::vector<std::pair<TableRow, RowReport>> witnesses_to_print;
  for (TableRow row : rows) {
    RowReport rg = table_row_check(row, general, false, threads);
    RowReport ri = table_row_check(row, idempotent, true, threads);
    auto cell = [](const RowReport& r) {
      std::string s = r.yes ? "yes" : "no";
      if (r.degenerate) s += "*";
      return s;
    };
    std::string name = table_row_name(row);
    err << name << std::string(name.size() < 23 ? 23 - name.size() : 1, ' ') << "| "
        << cell(rg) << (rg.yes ? "   " : "    ") << "| " << cell(ri) << "\n";
    if (rg.yes != expected.at(row).first || ri.yes != expected.at(row).second) matches = false;
    if (!rg.yes) witnesses_to_print.emplace_back(row, rg);
    if (!ri.yes) witnesses_to_print.emplace_back(row, ri);

    auto row_json = [&](const RowReport& r) {
      json j;
      j["verdict"] = r.yes ? "yes" : "no";
      j["pairs_checked"] = r.pairs_checked;
      j["degenerate"] = r.degenerate;
      if (!r.yes) {
        j["witness_pair"] = r.witness_label;
        j["witness_gamma"] = print_lines(*r.witness_gamma);
        j["witness_update"] = print_lines(*r.witness_update);
        j["witness_member"] = print_lines(*r.witness_member);
        j["witness_database"] = database_json(*r.witness);
        j["detail"] = r.detail;
      }
      return j;
    };
    json jr;
    jr["relation"] = name;
    jr["any_u"] = row_json(rg);
    jr["idempotent_u"] = row_json(ri);
    jrows.push_back(jr);
  }

  for (const auto& [row, rep] : witnesses_to_print) {
    err << "\nwitness for '" << table_row_name(row) << "' ("
        << (rep.idempotent_class ? "idempotent U" : "any U") << ", pair: " << rep.witness_label
        << "):\n";
    err << "  constraints:\n";
    for (const std::string& line : print_lines(*rep.witness_gamma)) err << "    " << line << "\n";
    err << "  update:\n";
    for (const std::string& line : print_lines(*rep.witness_update)) err << "    " << line << "\n";
    if (rep.witness_update->is_identity()) err << "    (identity)\n";
    err << "  member theory:\n";
    for (const std::string& line : print_lines(*rep.witness_member)) err << "    " << line << "\n";
    err << "  witness database: ";
    if (rep.witness->facts().empty()) err << "(empty)";
    for (const Atom& f : rep.witness->facts()) err << print_fact(f) << " ";
    err << "\n  " << rep.detail << "\n";
  }
  err << "\n(*) certified on this suite only; the containment fails on richer suites\n";
  err << (matches ? "matrix matches the expected containments\n"
                  : "matrix DIFFERS from the expected containments\n");

  json doc;
  doc["command"] = "table";
  doc["suite"] = suite_kind;
  doc["pairs"] = pairs;
  doc["seed"] = seed;
  doc["rows"] = jrows;
  doc["matches_expected"] = matches;
  emit_json(out, doc, json_file);
  return matches ? kExitAccepted : kExitRejected;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"integrity test generation and certification for deductive databases"};
  app.require_subcommand(1);

  std::string db_file, ic_file, update_file, candidate_file, json_file;
  std::string mode = "pre", kind = "pre", claim = "pre", suite_kind = "default";
  std::vector<std::string> binds, universe;
  std::uint64_t budget = default_budget(), seed = 20240101;
  std::size_t pairs = 40, cap = 256;
  int threads = 0;
  bool regressed_post = false;

  CLI::App* check = app.add_subcommand("check", "gate an update through a generated test");
  check->add_option("--db", db_file, "database file (facts and rules)")->required();
  check->add_option("--ic", ic_file, "integrity constraints file")->required();
  check->add_option("--update", update_file, "update file")->required();
  check->add_option("--mode", mode, "pre (gate before applying) or post (apply, roll back on failure)")
      ->check(CLI::IsMember({"pre", "post"}));
  check->add_option("--bind", binds, "parameter binding name=constant (repeatable)");
  check->add_option("--json", json_file, "write the machine-readable report to this file");

  CLI::App* simplify = app.add_subcommand("simplify", "print a generated test");
  simplify->add_option("--db", db_file, "database file (for view definitions; optional)");
  simplify->add_option("--ic", ic_file, "integrity constraints file")->required();
  simplify->add_option("--update", update_file, "update file")->required();
  simplify->add_option("--kind", kind, "pre, post, plain-pre or plain-post")
      ->check(CLI::IsMember({"pre", "post", "plain-pre", "plain-post"}));
  simplify->add_flag("--regressed-post", regressed_post,
                     "plain-post: re-tag the regressed pre-test when the update is "
                     "idempotent by construction");
  simplify->add_option("--cap", cap, "generated-denial cap per constraint");
  simplify->add_option("--json", json_file, "write the machine-readable report to this file");

  CLI::App* verify = app.add_subcommand("verify", "certify or refute a candidate test");
  verify->add_option("--db", db_file, "database file (vocabulary and rules; optional)");
  verify->add_option("--ic", ic_file, "integrity constraints file")->required();
  verify->add_option("--update", update_file, "update file")->required();
  verify->add_option("--candidate", candidate_file, "candidate test theory file")->required();
  verify->add_option("--claim", claim, "pre, post, plain-pre or plain-post")
      ->check(CLI::IsMember({"pre", "post", "plain-pre", "plain-post"}));
  verify->add_option("--universe", universe, "constants of the enumeration universe")
      ->delimiter(',');
  verify->add_option("--budget", budget, "maximum databases to enumerate");
  verify->add_option("--threads", threads, "enumeration threads (0 = auto)");
  verify->add_option("--json", json_file, "write the machine-readable report to this file");

  CLI::App* table = app.add_subcommand("table", "reproduce the pre/post containment matrix");
  table->add_option("--pairs", pairs, "random pairs per update class");
  table->add_option("--seed", seed, "suite generation seed");
  table->add_option("--suite", suite_kind, "default, empty or swaps")
      ->check(CLI::IsMember({"default", "empty", "swaps"}));
  table->add_option("--budget", budget, "maximum databases per enumeration");
  table->add_option("--threads", threads, "enumeration threads (0 = auto)");
  table->add_option("--json", json_file, "write the machine-readable report to this file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitAccepted;
    }
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (check->parsed())
      return cmd_check(db_file, ic_file, update_file, mode, binds, json_file, out, err);
    if (simplify->parsed())
      return cmd_simplify(db_file, ic_file, update_file, kind, regressed_post, cap, json_file,
                          out, err);
    if (verify->parsed())
      return cmd_verify(db_file, ic_file, update_file, candidate_file, claim, universe, budget,
                        threads, json_file, out, err);
    if (table->parsed())
      return cmd_table(pairs, seed, suite_kind, budget, threads, json_file, out, err);
    err << "error: no subcommand\n";
    return kExitInput;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace icheck
