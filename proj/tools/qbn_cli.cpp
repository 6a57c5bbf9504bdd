// qbn: command-line driver for schema validation, scripted navigation,
// evaluation, golden-file maintenance and the HTTP service.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qbn/evaluator.hpp"
#include "qbn/navigator.hpp"
#include "qbn/population.hpp"
#include "qbn/schema.hpp"
#include "qbn/service.hpp"
#include "qbn/verbalizer.hpp"

namespace {

using namespace qbn;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void report(const std::string& file, const std::vector<Diagnostic>& ds) {
  for (const auto& d : ds) std::cerr << file << ':' << d << '\n';
}

std::shared_ptr<const Schema> load_schema_file(const std::string& path) {
  auto parsed = parse_schema(read_file(path));
  report(path, parsed.diagnostics);
  if (!parsed) return nullptr;
  return std::make_shared<const Schema>(std::move(*parsed.value));
}

std::shared_ptr<const Population> load_population_file(const std::string& path,
                                                       std::shared_ptr<const Schema> schema) {
  auto parsed = load_population(read_file(path), std::move(schema));
  report(path, parsed.diagnostics);
  if (!parsed) return nullptr;
  return std::make_shared<const Population>(std::move(*parsed.value));
}

void print_presentation(std::ostream& os, const Schema& schema, const NodePresentation& np) {
  os << "focus [" << canonical_text(schema, np.focus) << "] " << np.focus_text << '\n';
  auto group = [&](const char* label, const std::vector<Alternative>& alts) {
    for (const auto& a : alts) os << "  " << label << " [" << canonical_text(schema, a.path) << "] " << a.text << '\n';
  };
  group("enlarge  ", np.enlargements);
  group("refine   ", np.refinements);
  group("associate", np.associations);
}

void print_result(std::ostream& os, const Population& pop, const PathExpr& p, GrammarMode mode) {
  os << export_delimited(result_view(evaluate(pop, p, mode), pop));
}

struct NavFlags {
  bool mark = false;
  bool no_contractions = false;
  bool strict = false;

  void attach(CLI::App* cmd) {
    cmd->add_flag("--mark-supertypes", mark, "Mark steps taken through a related type, e.g. \"(as a person)\"");
    cmd->add_flag("--no-contractions", no_contractions, "Do not apply schema-declared contractions");
    cmd->add_flag("--strict", strict, "Only objectified relationship types may be a focus");
  }
  [[nodiscard]] VerbalizeOptions options() const { return VerbalizeOptions{mark, !no_contractions}; }
  [[nodiscard]] GrammarMode mode() const { return strict ? GrammarMode::strict : GrammarMode::lenient; }
};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int cmd_validate(const std::string& schema_path, const std::string& pop_path) {
  auto schema = load_schema_file(schema_path);
  if (!schema) return 1;
  std::cout << "schema ok: " << schema->type_count() << " types (" << schema->object_types().size()
            << " object types), " << schema->role_count() << " roles\n";
  if (pop_path.empty()) return 0;
  auto pop = load_population_file(pop_path, schema);
  if (!pop) return 1;
  std::cout << "population ok: " << pop->instance_count() << " instances, " << pop->tuple_count() << " tuples\n";
  return 0;
}

int cmd_env(const std::string& schema_path, const std::string& path_text, const NavFlags& flags) {
  auto schema = load_schema_file(schema_path);
  if (!schema) return 1;
  PathExpr path = parse_path(*schema, path_text);
  print_presentation(std::cout, *schema, present(*schema, path, flags.options(), flags.mode()));
  return 0;
}

int cmd_eval(const std::string& schema_path, const std::string& pop_path, const std::string& path_text,
             const std::string& delimiter, bool strict) {
  auto schema = load_schema_file(schema_path);
  if (!schema) return 1;
  auto pop = load_population_file(pop_path, schema);
  if (!pop) return 1;
  PathExpr path = parse_path(*schema, path_text);
  const GrammarMode mode = strict ? GrammarMode::strict : GrammarMode::lenient;
  if (path.empty() || !is_wellformed(*schema, path, mode)) {
    std::cerr << "error[malformed-path]: '" << path_text << "' cannot be evaluated\n";
    return 1;
  }
  const char d = delimiter == "comma" ? ',' : '\t';
  std::cout << export_delimited(result_view(evaluate(*pop, path, mode), *pop), d);
  return 0;
}

int cmd_walk(const std::string& schema_path, const std::string& script_path, const std::string& pop_path,
             const NavFlags& flags) {
  auto schema = load_schema_file(schema_path);
  if (!schema) return 1;
  std::shared_ptr<const Population> pop;
  if (!pop_path.empty()) {
    pop = load_population_file(pop_path, schema);
    if (!pop) return 1;
  }

  Session session(schema, flags.options(), flags.mode());
  print_presentation(std::cout, *schema, present(session));

  std::istringstream script(read_file(script_path));
  std::string raw;
  int lineno = 0;
  while (std::getline(script, raw)) {
    ++lineno;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    auto where = script_path + ":" + std::to_string(lineno) + ": ";
    std::string verb = line.substr(0, line.find(' '));
    std::string rest = trim(line.size() > verb.size() ? line.substr(verb.size()) : "");

    std::cout << "\n> " << line << '\n';
    try {
      if (verb == "go") {
        if (!pop) {
          std::cerr << where << "error[no-population]: 'go' needs --population\n";
          return 1;
        }
        if (session.focus().empty()) {
          std::cerr << where << "error[empty-path]: the start node cannot be evaluated\n";
          return 1;
        }
        std::cout << "GO! [" << canonical_text(*schema, session.focus()) << "] "
                  << verbalize(*schema, session.focus(), session.options()) << '\n';
        print_result(std::cout, *pop, session.focus(), session.mode());
        continue;
      }
      if (verb == "set") {
        std::istringstream is(rest);
        std::string key, value;
        is >> key >> value;
        if ((value != "on" && value != "off") || (key != "mark_supertype_steps" && key != "use_contractions")) {
          std::cerr << where << "error[bad-script]: expected 'set mark_supertype_steps|use_contractions on|off'\n";
          return 1;
        }
        VerbalizeOptions opts = session.options();
        (key == "mark_supertype_steps" ? opts.mark_supertype_steps : opts.use_contractions) = value == "on";
        session = session.with_options(opts);
      } else {
        auto kind = parse_move_kind(verb);
        if (!kind) {
          std::cerr << where << "error[bad-script]: unknown command '" << verb << "'\n";
          return 1;
        }
        Move m{*kind, {}};
        if (*kind != MoveKind::reverse) m.target = parse_path(*schema, rest);
        session = apply_move(session, m);
      }
    } catch (const Error& e) {
      std::cerr << where << "error[" << e.code() << "]: " << e.what() << '\n';
      return 1;
    }
    print_presentation(std::cout, *schema, present(session));
  }
  return 0;
}

// Golden corpus: `<canonical path> TAB <options> TAB <expected text>`, where
// options is `-` or a comma list of `mark` and `nocontract`.
int cmd_golden(const std::string& schema_path, const std::string& golden_path, bool update) {
  auto schema = load_schema_file(schema_path);
  if (!schema) return 1;
  std::istringstream in(read_file(golden_path));
  std::ostringstream rewritten;
  std::string line;
  int lineno = 0, failures = 0, checked = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') {
      rewritten << line << '\n';
      continue;
    }
    std::vector<std::string> cols;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, '\t');) cols.push_back(c);
    if (cols.size() != 3) {
      std::cerr << golden_path << ':' << lineno << ": error[bad-golden]: expected 3 tab-separated columns\n";
      return 1;
    }
    VerbalizeOptions opts;
    std::istringstream os(cols[1]);
    for (std::string flag; std::getline(os, flag, ',');) {
      if (flag == "mark")
        opts.mark_supertype_steps = true;
      else if (flag == "nocontract")
        opts.use_contractions = false;
      else if (flag != "-") {
        std::cerr << golden_path << ':' << lineno << ": error[bad-golden]: unknown option '" << flag << "'\n";
        return 1;
      }
    }
    const std::string actual = verbalize(*schema, parse_path(*schema, cols[0]), opts);
    ++checked;
    if (actual != cols[2]) {
      if (!update) {
        std::cerr << golden_path << ':' << lineno << ": mismatch for [" << cols[0] << "]\n  expected: " << cols[2]
                  << "\n  actual:   " << actual << '\n';
      }
      ++failures;
    }
    rewritten << cols[0] << '\t' << cols[1] << '\t' << actual << '\n';
  }
  if (update) {
    std::ofstream(golden_path, std::ios::trunc) << rewritten.str();
    std::cout << "updated " << failures << " of " << checked << " entries\n";
    return 0;
  }
  std::cout << checked - failures << " of " << checked << " golden verbalizations match\n";
  return failures == 0 ? 0 : 1;
}

int cmd_serve(const std::string& schema_path, const std::string& pop_path, const std::string& host, int port,
              const std::string& snapshot_dir, int ttl) {
  ServiceConfig config;
  if (!snapshot_dir.empty()) config.snapshot_dir = snapshot_dir;
  config.session_ttl = std::chrono::seconds(ttl);
  Service service(std::move(config));
  if (!schema_path.empty()) {
    const std::string id = service.add_schema(read_file(schema_path));
    if (!pop_path.empty()) service.set_population(id, read_file(pop_path));
    std::cout << "schema " << schema_path << " loaded as " << id << '\n';
  }
  std::cout << "listening on http://" << host << ':' << port << std::endl;
  run_http_server(service, host, port);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Query by navigation over ORM conceptual schemas"};
  app.require_subcommand(1);

  std::string schema_path, pop_path, path_text, script_path, golden_path;
  NavFlags env_flags, walk_flags;

  auto* validate = app.add_subcommand("validate", "Check a schema (and optionally a population)");
  validate->add_option("schema", schema_path, "Schema file")->required();
  validate->add_option("population", pop_path, "Population file");

  auto* env = app.add_subcommand("env", "Print the presentation of a node");
  env->add_option("schema", schema_path, "Schema file")->required();
  env->add_option("--path", path_text, "Canonical path, `()` for the start node")->required();
  env_flags.attach(env);

  std::string delimiter = "tab";
  bool eval_strict = false;
  auto* eval = app.add_subcommand("eval", "Evaluate a path against a population (GO!)");
  eval->add_option("schema", schema_path, "Schema file")->required();
  eval->add_option("population", pop_path, "Population file")->required();
  eval->add_option("--path", path_text, "Canonical path")->required();
  eval->add_option("--delimiter", delimiter, "Column delimiter")->check(CLI::IsMember({"tab", "comma"}));
  eval->add_flag("--strict", eval_strict, "Only objectified relationship types may be a focus");

  auto* walk = app.add_subcommand("walk", "Apply a move script, printing every presentation");
  walk->add_option("schema", schema_path, "Schema file")->required();
  walk->add_option("--script", script_path, "Move script, one move per line")->required();
  walk->add_option("--population", pop_path, "Population for `go` lines");
  walk_flags.attach(walk);

  bool update = false;
  auto* golden = app.add_subcommand("golden", "Check (or --update) a verbalization golden file");
  golden->add_option("schema", schema_path, "Schema file")->required();
  golden->add_option("file", golden_path, "Golden file")->required();
  golden->add_flag("--update", update, "Rewrite expected texts from current output");

  std::string host = "127.0.0.1", snapshot_dir;
  int port = 8080, ttl = 3600;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("schema", schema_path, "Schema file to preload");
  serve->add_option("population", pop_path, "Population for the preloaded schema");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port");
  serve->add_option("--snapshot-dir", snapshot_dir, "Persist the store here");
  serve->add_option("--session-ttl", ttl, "Idle session expiry in seconds");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(schema_path, pop_path);
    if (*env) return cmd_env(schema_path, path_text, env_flags);
    if (*eval) return cmd_eval(schema_path, pop_path, path_text, delimiter, eval_strict);
    if (*walk) return cmd_walk(schema_path, script_path, pop_path, walk_flags);
    if (*golden) return cmd_golden(schema_path, golden_path, update);
    if (*serve) return cmd_serve(schema_path, pop_path, host, port, snapshot_dir, ttl);
  } catch (const Error& e) {
    std::cerr << "error[" << e.code() << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
