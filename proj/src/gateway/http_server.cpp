#include "itt/gateway/http_server.hpp"

#include <httplib.h>

namespace itt::gateway {

struct HttpServer::Impl {
  Impl(const Api& a, Service s) : api(a), serving(s) {}

  const Api& api;
  Service serving;
  httplib::Server server;

  void forward(const httplib::Request& req, httplib::Response& res) const {
    ApiRequest request;
    request.method = req.method;
    request.path = req.target.substr(0, req.target.find('?'));
    request.body = req.body;
    for (const auto& [key, value] : req.params) request.query.emplace(key, value);
    for (const auto& [key, value] : req.headers) {
      std::string name = key;
      for (char& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      request.headers.emplace(std::move(name), value);
    }

    ApiResponse response = api.handle(request, serving);
    res.status = response.status;
    for (const auto& [key, value] : response.headers) res.set_header(key, value);
    if (!response.content_type.empty()) res.set_content(response.body, response.content_type);
  }
};

HttpServer::HttpServer(const Api& api, Service serving)
    : impl_(std::make_unique<Impl>(api, serving)) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    impl_->forward(req, res);
  };
  auto& s = impl_->server;
  s.Get(".*", handler);
  s.Post(".*", handler);
  s.Put(".*", handler);
  s.Delete(".*", handler);
  s.Options(".*", handler);
  s.Patch(".*", handler);
  s.set_payload_max_length(std::size_t{4} << 20);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

bool HttpServer::running() const { return impl_->server.is_running(); }

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace itt::gateway
