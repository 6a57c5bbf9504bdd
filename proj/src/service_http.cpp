#include <httplib.h>

#include <thread>

#include "qbn/service.hpp"

namespace qbn {

namespace {

void configure(httplib::Server& server, Service& service) {
  auto forward = [&service](const httplib::Request& req, httplib::Response& res) {
    HttpResponse out = service.handle(HttpRequest{req.method, req.path, req.body});
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  server.Get(R"(/.*)", forward);
  server.Post(R"(/.*)", forward);
  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
}

}  // namespace

struct HttpServer::Impl {
  explicit Impl(Service& s) : service(s) {}
  Service& service;
  httplib::Server server;
  std::thread worker;
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {
  configure(impl_->server, service);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
  impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void HttpServer::stop() {
  if (!impl_ || !impl_->worker.joinable()) return;
  impl_->server.stop();
  impl_->worker.join();
}

void run_http_server(Service& service, const std::string& host, int port) {
  httplib::Server server;
  configure(server, service);
  if (!server.listen(host, port)) throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
}

}  // namespace qbn
