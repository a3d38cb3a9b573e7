#pragma once

#include <memory>
#include <string>

#include "itt/gateway/api.hpp"

namespace itt::gateway {

// Socket front end for an Api, backed by cpp-httplib.
class HttpServer {
 public:
  HttpServer(const Api& api, Service serving);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port, or -1.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  bool listen();
  void stop();
  bool running() const;
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace itt::gateway
