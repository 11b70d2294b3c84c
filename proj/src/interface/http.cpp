#include <httplib.h>

#include "roadmap/interface/api.hpp"

namespace roadmap {

struct HttpService::Impl {
  ModelRegistry& registry;
  ServeOptions opts;
  httplib::Server server;
};

namespace {

void forward(ModelRegistry& reg, const httplib::Request& in, httplib::Response& out) {
  ApiRequest req{in.method, in.path, {}, in.body};
  for (const auto& [k, v] : in.params) req.query[k] = v;
  ApiResponse r = handle_api(reg, req);
  out.status = r.status;
  out.set_content(r.body, "application/json");
}

}  // namespace

HttpService::HttpService(ModelRegistry& registry, ServeOptions opts)
    : impl_(new Impl{registry, std::move(opts), {}}) {
  auto& srv = impl_->server;
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Methods", "GET, PUT, OPTIONS"},
                           {"Access-Control-Allow-Headers", "Content-Type"}});
  auto handler = [this](const httplib::Request& in, httplib::Response& out) { forward(impl_->registry, in, out); };
  srv.Get(R"(/api(/.*)?)", handler);
  srv.Put(R"(/api(/.*)?)", handler);
  srv.Options(R"(/api(/.*)?)", [](const httplib::Request&, httplib::Response& out) { out.status = 204; });
  if (!impl_->opts.static_dir.empty()) srv.set_mount_point("/", impl_->opts.static_dir);
}

HttpService::~HttpService() { stop(); }

int HttpService::bind() {
  if (impl_->opts.port == 0) return impl_->server.bind_to_any_port(impl_->opts.host);
  return impl_->server.bind_to_port(impl_->opts.host, impl_->opts.port) ? impl_->opts.port : -1;
}

bool HttpService::run() { return impl_->server.listen_after_bind(); }

void HttpService::stop() { impl_->server.stop(); }

}  // namespace roadmap
