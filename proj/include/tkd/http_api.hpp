#pragma once

#include <map>
#include <memory>
#include <string>

#include "tkd/workspace.hpp"

namespace tkd::http {

struct Request {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// Routes one request against the workspace. Status codes: 400 malformed
/// request, 404 unknown document or route, 409 stale revision, 422 domain
/// error (body carries the error code).
Response handle(Workspace& ws, const Request& request);

/// HTTP/1.1 listener forwarding every request to handle().
class Server {
 public:
  explicit Server(Workspace& ws);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Port 0 picks a free port. Returns the bound port, or -1.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  bool run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Blocks serving HTTP/1.1 on host:port. Returns false when the socket
/// cannot be bound.
bool serve(Workspace& ws, const std::string& host, int port);

}  // namespace tkd::http
