#include "qbn/service.hpp"

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "qbn/evaluator.hpp"

namespace qbn {

using json = nlohmann::ordered_json;

struct Service::SchemaEntry {
  std::string source;
  std::shared_ptr<const Schema> schema;
  std::optional<std::string> population_source;
  std::shared_ptr<const Population> population;
};

struct Service::SessionEntry {
  std::mutex mu;
  std::string schema_id;
  Session session;
  std::chrono::system_clock::time_point last_access;

  SessionEntry(std::string sid, Session s, std::chrono::system_clock::time_point now)
      : schema_id(std::move(sid)), session(std::move(s)), last_access(now) {}
};

namespace {

HttpResponse json_response(int status, const json& body) { return HttpResponse{status, body.dump(), "application/json"}; }

HttpResponse error_response(int status, const std::string& code, const std::string& message) {
  return json_response(status, json{{"error", code}, {"message", message}});
}

json diagnostics_json(const std::vector<Diagnostic>& ds) {
  json arr = json::array();
  for (const auto& d : ds)
    arr.push_back(json{{"severity", d.is_error() ? "error" : "warning"},
                       {"code", d.code},
                       {"message", d.message},
                       {"line", d.line},
                       {"column", d.column}});
  return arr;
}

HttpResponse diagnostics_response(const std::string& code, const std::vector<Diagnostic>& ds) {
  return json_response(400, json{{"error", code}, {"diagnostics", diagnostics_json(ds)}});
}

json alternatives_json(const Schema& schema, const std::vector<Alternative>& alts) {
  json arr = json::array();
  for (const auto& a : alts) arr.push_back(json{{"canonical", canonical_text(schema, a.path)}, {"text", a.text}});
  return arr;
}

json presentation_json(const Session& session) {
  const Schema& schema = session.schema();
  NodePresentation np = present(session);
  return json{{"focus_canonical", canonical_text(schema, np.focus)},
              {"focus_text", np.focus_text},
              {"refinements", alternatives_json(schema, np.refinements)},
              {"enlargements", alternatives_json(schema, np.enlargements)},
              {"associations", alternatives_json(schema, np.associations)}};
}

json options_json(const Session& s) {
  return json{{"mark_supertype_steps", s.options().mark_supertype_steps},
              {"use_contractions", s.options().use_contractions},
              {"strict_grammar", s.mode() == GrammarMode::strict}};
}

json history_json(const Session& s) {
  const Schema& schema = s.schema();
  json arr = json::array();
  for (const auto& h : s.history()) {
    json e{{"kind", std::string(to_string(h.move.kind))}};
    if (h.move.kind != MoveKind::reverse) e["target_canonical"] = canonical_text(schema, h.move.target);
    e["focus_canonical"] = canonical_text(schema, h.result);
    arr.push_back(std::move(e));
  }
  return arr;
}

json session_json(const std::string& id, const Session& s) {
  return json{{"session_id", id},
              {"focus_canonical", canonical_text(s.schema(), s.focus())},
              {"options", options_json(s)},
              {"presentation", presentation_json(s)},
              {"history", history_json(s)}};
}

std::optional<json> parse_body(const std::string& body) {
  if (body.find_first_not_of(" \t\r\n") == std::string::npos) return json::object();
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  return j;
}

// Reads an optional boolean field; false on a present non-boolean value.
bool read_flag(const json& j, const char* key, bool& out) {
  if (!j.contains(key)) return true;
  if (!j[key].is_boolean()) return false;
  out = j[key].get<bool>();
  return true;
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : path) {
    if (c == '/') {
      if (!cur.empty()) parts.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) parts.push_back(std::move(cur));
  return parts;
}

}  // namespace

std::function<std::string()> sequential_ids(std::string prefix) {
  auto counter = std::make_shared<std::uint64_t>(0);
  return [prefix = std::move(prefix), counter] { return prefix + std::to_string(++*counter); };
}

Service::Service(ServiceConfig config) : config_(std::move(config)) {
  if (!config_.id_generator) {
    auto rng = std::make_shared<std::mt19937_64>(std::random_device{}() ^
                                                 (static_cast<std::uint64_t>(std::random_device{}()) << 32));
    config_.id_generator = [rng] {
      std::ostringstream os;
      os << std::hex;
      for (int i = 0; i < 2; ++i) {
        auto v = (*rng)();
        for (int b = 0; b < 16; ++b) os << ((v >> (60 - 4 * b)) & 0xF);
      }
      return os.str();
    };
  }
  if (!config_.clock) config_.clock = [] { return std::chrono::system_clock::now(); };
  if (config_.snapshot_dir) load_snapshot();
}

Service::~Service() = default;

std::size_t Service::session_count() const {
  std::shared_lock lock(mu_);
  return sessions_.size();
}

// Callers hold mu_ exclusively.
std::string Service::next_id() {
  std::lock_guard lock(id_mu_);
  std::string id;
  do {
    id = config_.id_generator();
  } while (schemas_.count(id) || sessions_.count(id));
  return id;
}

HttpResponse Service::handle(const HttpRequest& request) {
  try {
    expire_idle();
    return route(request);
  } catch (const Error& e) {
    if (e.code() == "not-found") return error_response(404, e.code(), e.what());
    if (e.code() == "illegal-move") return error_response(409, e.code(), e.what());
    return error_response(400, e.code(), e.what());
  } catch (const std::exception& e) {
    return error_response(500, "internal", e.what());
  }
}

HttpResponse Service::route(const HttpRequest& rq) {
  const auto parts = split_path(rq.path);
  const bool get = rq.method == "GET";
  const bool post = rq.method == "POST";
  auto not_allowed = [&] { return error_response(405, "method-not-allowed", rq.method + " " + rq.path); };

  if (parts.size() >= 1 && parts[0] == "schemas") {
    if (parts.size() == 1) return post ? post_schema(rq.body) : not_allowed();
    if (parts.size() == 2) return get ? get_schema(parts[1]) : not_allowed();
    if (parts.size() == 3 && parts[2] == "population") return post ? post_population(parts[1], rq.body) : not_allowed();
  }
  if (parts.size() >= 1 && parts[0] == "sessions") {
    if (parts.size() == 1) return post ? post_session(rq.body) : not_allowed();
    if (parts.size() == 2) return get ? get_session(parts[1]) : not_allowed();
    if (parts.size() == 3) {
      if (!post) return not_allowed();
      if (parts[2] == "move") return post_move(parts[1], rq.body);
      if (parts[2] == "evaluate") return post_evaluate(parts[1]);
      if (parts[2] == "options") return post_options(parts[1], rq.body);
    }
  }
  return error_response(404, "not-found", "no route for " + rq.method + " " + rq.path);
}

// ---------------------------------------------------------------------------
// schemas

std::string Service::add_schema(std::string_view source) {
  auto parsed = parse_schema(source);
  if (!parsed) {
    std::ostringstream os;
    for (const auto& d : parsed.diagnostics) os << d << '\n';
    throw Error("invalid-schema", os.str());
  }
  auto entry = std::make_shared<SchemaEntry>();
  entry->source = std::string(source);
  entry->schema = std::make_shared<const Schema>(std::move(*parsed.value));
  std::string id;
  {
    std::unique_lock lock(mu_);
    id = next_id();
    schemas_[id] = entry;
  }
  save_snapshot();
  return id;
}

void Service::set_population(const std::string& schema_id, std::string_view source) {
  auto entry = find_schema(schema_id);
  auto pop = load_population(source, entry->schema);
  if (!pop) {
    std::ostringstream os;
    for (const auto& d : pop.diagnostics) os << d << '\n';
    throw Error("invalid-population", os.str());
  }
  {
    std::unique_lock lock(mu_);
    entry->population_source = std::string(source);
    entry->population = std::make_shared<const Population>(std::move(*pop.value));
  }
  save_snapshot();
}

std::shared_ptr<Service::SchemaEntry> Service::find_schema(const std::string& id) const {
  std::shared_lock lock(mu_);
  auto it = schemas_.find(id);
  if (it == schemas_.end()) throw Error("not-found", "unknown schema '" + id + "'");
  return it->second;
}

HttpResponse Service::post_schema(const std::string& body) {
  auto parsed = parse_schema(body);
  if (!parsed) return diagnostics_response("invalid-schema", parsed.diagnostics);
  std::string id = add_schema(body);
  return json_response(201, json{{"schema_id", id}, {"diagnostics", diagnostics_json(parsed.diagnostics)}});
}

HttpResponse Service::get_schema(const std::string& id) {
  auto entry = find_schema(id);
  return HttpResponse{200, serialize_schema(*entry->schema), "text/plain; charset=utf-8"};
}

HttpResponse Service::post_population(const std::string& id, const std::string& body) {
  auto entry = find_schema(id);
  auto pop = load_population(body, entry->schema);
  if (!pop) return diagnostics_response("invalid-population", pop.diagnostics);
  const auto instances = pop->instance_count();
  const auto tuples = pop->tuple_count();
  {
    std::unique_lock lock(mu_);
    entry->population_source = body;
    entry->population = std::make_shared<const Population>(std::move(*pop.value));
  }
  save_snapshot();
  return json_response(200, json{{"ok", true},
                                 {"instances", instances},
                                 {"tuples", tuples},
                                 {"diagnostics", diagnostics_json(pop.diagnostics)}});
}

// ---------------------------------------------------------------------------
// sessions

void Service::expire_idle() {
  const auto now = config_.clock();
  bool removed = false;
  {
    std::unique_lock lock(mu_);
    for (auto it = sessions_.begin(); it != sessions_.end();) {
      bool idle;
      {
        std::lock_guard entry_lock(it->second->mu);
        idle = now - it->second->last_access > config_.session_ttl;
      }
      if (idle) {
        it = sessions_.erase(it);
        removed = true;
      } else {
        ++it;
      }
    }
  }
  if (removed) save_snapshot();
}

std::shared_ptr<Service::SessionEntry> Service::touch_session(const std::string& id) {
  std::shared_ptr<SessionEntry> entry;
  {
    std::shared_lock lock(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw Error("not-found", "unknown session '" + id + "'");
    entry = it->second;
  }
  return entry;
}

HttpResponse Service::post_session(const std::string& body) {
  auto j = parse_body(body);
  if (!j) return error_response(400, "bad-request", "body must be a JSON object");
  if (!j->contains("schema_id") || !(*j)["schema_id"].is_string())
    return error_response(400, "bad-request", "schema_id (string) is required");
  auto entry = find_schema((*j)["schema_id"].get<std::string>());

  VerbalizeOptions opts;
  bool strict = false;
  if (j->contains("options")) {
    const json& o = (*j)["options"];
    if (!o.is_object() || !read_flag(o, "mark_supertype_steps", opts.mark_supertype_steps) ||
        !read_flag(o, "use_contractions", opts.use_contractions) || !read_flag(o, "strict_grammar", strict))
      return error_response(400, "bad-request", "options must be an object of booleans");
  }
  Session session(entry->schema, opts, strict ? GrammarMode::strict : GrammarMode::lenient);
  json presentation = presentation_json(session);

  std::string id;
  {
    std::unique_lock lock(mu_);
    id = next_id();
    sessions_[id] = std::make_shared<SessionEntry>((*j)["schema_id"].get<std::string>(), std::move(session),
                                                   config_.clock());
  }
  save_snapshot();
  return json_response(201, json{{"session_id", id}, {"presentation", std::move(presentation)}});
}

HttpResponse Service::get_session(const std::string& id) {
  auto entry = touch_session(id);
  std::lock_guard lock(entry->mu);
  entry->last_access = config_.clock();
  return json_response(200, session_json(id, entry->session));
}

HttpResponse Service::post_move(const std::string& id, const std::string& body) {
  auto j = parse_body(body);
  if (!j) return error_response(400, "bad-request", "body must be a JSON object");
  if (!j->contains("kind") || !(*j)["kind"].is_string())
    return error_response(400, "bad-request", "kind (string) is required");
  auto kind = parse_move_kind((*j)["kind"].get<std::string>());
  if (!kind) return error_response(400, "bad-request", "kind must be refine, enlarge, associate or reverse");

  auto entry = touch_session(id);
  json response;
  {
    std::lock_guard lock(entry->mu);
    entry->last_access = config_.clock();
    const Session& cur = entry->session;
    Move m{*kind, {}};
    if (*kind != MoveKind::reverse) {
      if (!j->contains("target_canonical") || !(*j)["target_canonical"].is_string())
        return error_response(400, "bad-request", "target_canonical (string) is required for " +
                                                      std::string(to_string(*kind)));
      m.target = parse_path(cur.schema(), (*j)["target_canonical"].get<std::string>());
    }
    Session next = apply_move(cur, m);
    response = json{{"session_id", id},
                    {"focus_canonical", canonical_text(next.schema(), next.focus())},
                    {"presentation", presentation_json(next)}};
    entry->session = std::move(next);
  }
  save_snapshot();
  return json_response(200, response);
}

HttpResponse Service::post_evaluate(const std::string& id) {
  auto entry = touch_session(id);
  Session session = [&] {
    std::lock_guard lock(entry->mu);
    entry->last_access = config_.clock();
    return entry->session;
  }();
  std::shared_ptr<const Population> pop;
  {
    auto schema_entry = find_schema(entry->schema_id);
    std::shared_lock lock(mu_);
    pop = schema_entry->population;
  }
  if (!pop) return error_response(409, "no-population", "no population loaded for this schema");
  if (session.focus().empty()) return error_response(400, "empty-path", "the start node cannot be evaluated");

  const PairBag bag = evaluate(*pop, session.focus(), session.mode());
  const ResultTable table = result_view(bag, *pop);
  json pairs = json::array(), focus = json::array();
  for (const auto& r : table.pairs)
    pairs.push_back(json{{"anchor", r.anchor}, {"focus", r.focus}, {"multiplicity", r.multiplicity}});
  for (const auto& f : table.focus) focus.push_back(json{{"instance", f.instance}, {"multiplicity", f.multiplicity}});
  return json_response(200, json{{"session_id", id},
                                 {"focus_canonical", canonical_text(session.schema(), session.focus())},
                                 {"focus_text", node_text(session.schema(), session.focus(), session.options())},
                                 {"pairs", std::move(pairs)},
                                 {"focus", std::move(focus)},
                                 {"total", table.total}});
}

HttpResponse Service::post_options(const std::string& id, const std::string& body) {
  auto j = parse_body(body);
  if (!j) return error_response(400, "bad-request", "body must be a JSON object");
  auto entry = touch_session(id);
  json response;
  {
    std::lock_guard lock(entry->mu);
    entry->last_access = config_.clock();
    VerbalizeOptions opts = entry->session.options();
    if (!read_flag(*j, "mark_supertype_steps", opts.mark_supertype_steps) ||
        !read_flag(*j, "use_contractions", opts.use_contractions))
      return error_response(400, "bad-request", "options must be booleans");
    entry->session = entry->session.with_options(opts);
    response = json{{"session_id", id},
                    {"focus_canonical", canonical_text(entry->session.schema(), entry->session.focus())},
                    {"options", options_json(entry->session)},
                    {"presentation", presentation_json(entry->session)}};
  }
  save_snapshot();
  return json_response(200, response);
}

// ---------------------------------------------------------------------------
// snapshot persistence

void Service::save_snapshot() {
  if (!config_.snapshot_dir) return;
  // Held across capture and write so snapshots land in mutation order.
  std::lock_guard write_lock(snapshot_mu_);
  json snap{{"schemas", json::array()}, {"sessions", json::array()}};
  {
    std::shared_lock lock(mu_);
    for (const auto& [id, e] : schemas_) {
      json s{{"id", id}, {"source", e->source}};
      if (e->population_source) s["population"] = *e->population_source;
      snap["schemas"].push_back(std::move(s));
    }
    for (const auto& [id, e] : sessions_) {
      std::lock_guard entry_lock(e->mu);
      json moves = json::array();
      for (const auto& h : e->session.history()) {
        json m{{"kind", std::string(to_string(h.move.kind))}};
        if (h.move.kind != MoveKind::reverse) m["target"] = canonical_text(e->session.schema(), h.move.target);
        moves.push_back(std::move(m));
      }
      snap["sessions"].push_back(json{
          {"id", id},
          {"schema_id", e->schema_id},
          {"options", options_json(e->session)},
          {"moves", std::move(moves)},
          {"last_access",
           std::chrono::duration_cast<std::chrono::seconds>(e->last_access.time_since_epoch()).count()}});
    }
  }
  std::filesystem::create_directories(*config_.snapshot_dir);
  const auto final_path = *config_.snapshot_dir / "store.json";
  const auto tmp_path = *config_.snapshot_dir / "store.json.tmp";
  {
    std::ofstream out(tmp_path, std::ios::trunc);
    out << snap.dump(2) << '\n';
    if (!out) throw std::runtime_error("cannot write snapshot " + tmp_path.string());
  }
  std::filesystem::rename(tmp_path, final_path);
}

void Service::load_snapshot() {
  const auto path = *config_.snapshot_dir / "store.json";
  if (!std::filesystem::exists(path)) return;
  std::ifstream in(path);
  json snap = json::parse(in, nullptr, false);
  if (snap.is_discarded()) throw std::runtime_error("corrupt snapshot " + path.string());

  for (const auto& s : snap.value("schemas", json::array())) {
    auto parsed = parse_schema(s.at("source").get<std::string>());
    if (!parsed) throw std::runtime_error("snapshot schema '" + s.at("id").get<std::string>() + "' no longer parses");
    auto entry = std::make_shared<SchemaEntry>();
    entry->source = s.at("source").get<std::string>();
    entry->schema = std::make_shared<const Schema>(std::move(*parsed.value));
    if (s.contains("population")) {
      auto pop = load_population(s["population"].get<std::string>(), entry->schema);
      if (!pop) throw std::runtime_error("snapshot population of '" + s.at("id").get<std::string>() + "' is invalid");
      entry->population_source = s["population"].get<std::string>();
      entry->population = std::make_shared<const Population>(std::move(*pop.value));
    }
    schemas_[s.at("id").get<std::string>()] = std::move(entry);
  }
  for (const auto& s : snap.value("sessions", json::array())) {
    auto it = schemas_.find(s.at("schema_id").get<std::string>());
    if (it == schemas_.end()) continue;
    const json& o = s.at("options");
    VerbalizeOptions opts{o.value("mark_supertype_steps", false), o.value("use_contractions", true)};
    GrammarMode mode = o.value("strict_grammar", false) ? GrammarMode::strict : GrammarMode::lenient;
    Session session(it->second->schema, opts, mode);
    for (const auto& m : s.at("moves")) {
      auto kind = parse_move_kind(m.at("kind").get<std::string>());
      if (!kind) throw std::runtime_error("snapshot has an unknown move kind");
      Move mv{*kind, {}};
      if (*kind != MoveKind::reverse) mv.target = parse_path(session.schema(), m.at("target").get<std::string>());
      session = apply_move(session, mv);
    }
    auto last = std::chrono::system_clock::time_point(std::chrono::seconds(s.value("last_access", std::int64_t{0})));
    sessions_[s.at("id").get<std::string>()] =
        std::make_shared<SessionEntry>(s.at("schema_id").get<std::string>(), std::move(session), last);
  }
}

}  // namespace qbn
