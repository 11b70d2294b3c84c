#pragma once

#include <map>
#include <memory>
#include <string>

#include "roadmap/interface/session.hpp"

namespace roadmap {

struct ApiRequest {
  std::string method;  // "GET", "PUT"
  std::string path;    // "/api/models/fuse/solve"
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string body;  // JSON
};

/// Routes one request. Transport independent, so tests call it directly.
ApiResponse handle_api(ModelRegistry& registry, const ApiRequest& req);

struct ServeOptions {
  std::string host = "0.0.0.0";
  int port = 8080;
  /// Directory of static UI assets mounted at "/", if any.
  std::string static_dir;
};

/// HTTP server over handle_api with CORS headers.
class HttpService {
public:
  HttpService(ModelRegistry& registry, ServeOptions opts);
  ~HttpService();

  /// Binds the socket; port 0 picks a free one. Returns the bound port or
  /// -1 on failure.
  int bind();
  /// Serves until stop(); call after bind().
  bool run();
  void stop();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace roadmap
