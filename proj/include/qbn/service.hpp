#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include "qbn/navigator.hpp"
#include "qbn/population.hpp"
#include "qbn/schema.hpp"

namespace qbn {

struct HttpRequest {
  std::string method;  // "GET", "POST", ...
  std::string path;    // without query string
  std::string body;
};

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

struct ServiceConfig {
  /// When set, the store is written to <dir>/store.json after every
  /// mutation and restored from it on construction.
  std::optional<std::filesystem::path> snapshot_dir;
  /// Sessions idle longer than this are dropped.
  std::chrono::seconds session_ttl{3600};
  /// Source of schema and session ids. Defaults to 128 random bits as hex.
  std::function<std::string()> id_generator;
  std::function<std::chrono::system_clock::time_point()> clock;
};

/// Returns ids "<prefix>1", "<prefix>2", ... (deterministic, for replay tests).
[[nodiscard]] std::function<std::string()> sequential_ids(std::string prefix = "id");

/// JSON facade over schemas, populations, navigation sessions and GO!
/// evaluation. `handle` is thread-safe; moves on one session are
/// serialized, different sessions proceed in parallel.
///
///   POST /schemas                     body: schema DSL
///   GET  /schemas/{id}                canonical DSL (text/plain)
///   POST /schemas/{id}/population     body: population DSL
///   POST /sessions                    {schema_id, options?}
///   GET  /sessions/{id}
///   POST /sessions/{id}/move          {kind, target_canonical?}
///   POST /sessions/{id}/evaluate
///   POST /sessions/{id}/options       {mark_supertype_steps?, use_contractions?}
class Service {
 public:
  explicit Service(ServiceConfig config = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  HttpResponse handle(const HttpRequest& request);

  /// Registers a schema, returning its id. Throws Error("invalid-schema").
  std::string add_schema(std::string_view source);
  /// Throws Error("not-found") or Error("invalid-population").
  void set_population(const std::string& schema_id, std::string_view source);

  [[nodiscard]] std::size_t session_count() const;

 private:
  struct SchemaEntry;
  struct SessionEntry;

  HttpResponse route(const HttpRequest& request);
  HttpResponse post_schema(const std::string& body);
  HttpResponse get_schema(const std::string& id);
  HttpResponse post_population(const std::string& id, const std::string& body);
  HttpResponse post_session(const std::string& body);
  HttpResponse get_session(const std::string& id);
  HttpResponse post_move(const std::string& id, const std::string& body);
  HttpResponse post_evaluate(const std::string& id);
  HttpResponse post_options(const std::string& id, const std::string& body);

  std::shared_ptr<SchemaEntry> find_schema(const std::string& id) const;
  std::shared_ptr<SessionEntry> touch_session(const std::string& id);
  void expire_idle();
  std::string next_id();
  void save_snapshot();
  void load_snapshot();

  ServiceConfig config_;
  mutable std::shared_mutex mu_;
  std::mutex id_mu_;
  std::mutex snapshot_mu_;
  std::map<std::string, std::shared_ptr<SchemaEntry>> schemas_;
  std::map<std::string, std::shared_ptr<SessionEntry>> sessions_;
};

/// HTTP listener in front of a Service. CORS is open so a browser client on
/// another origin can use the API.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds and serves on a background thread. Port 0 picks a free port.
  /// Returns the bound port. Throws std::runtime_error if binding fails.
  int start(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Serves `service` in the calling thread until the process is stopped.
void run_http_server(Service& service, const std::string& host, int port);

}  // namespace qbn
