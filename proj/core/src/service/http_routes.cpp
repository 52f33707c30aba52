#include <httplib.h>

#include "histoscope/service.hpp"

namespace histoscope::service {

struct HttpServer::Impl {
  httplib::Server server;
};

namespace {

ApiRequest to_api_request(const httplib::Request& req) {
  ApiRequest out;
  out.method = req.method;
  out.path = req.path;
  out.body = req.body;
  for (const auto& [key, value] : req.params) out.query.emplace(key, value);
  for (const auto& [field, part] : req.files) out.parts.push_back({field, part.filename, part.content});
  return out;
}

}  // namespace

HttpServer::HttpServer(SessionService& service, ServerOptions options)
    : impl_(std::make_unique<Impl>()), options_(std::move(options)) {
  auto& server = impl_->server;
  if (options_.static_dir) server.set_mount_point("/", *options_.static_dir);

  const auto handler = [&service](const httplib::Request& req, httplib::Response& res) {
    const ApiResponse response = service.handle(to_api_request(req));
    res.status = response.status;
    res.set_content(response.body, response.content_type);
  };
  const std::string any = R"(/.*)";
  server.Get(any, handler);
  server.Post(any, handler);
  server.Put(any, handler);
  server.Delete(any, handler);
  server.set_payload_max_length(std::size_t{512} << 20);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  auto& server = impl_->server;
  if (options_.port == 0) {
    port_ = server.bind_to_any_port(options_.host);
  } else {
    port_ = server.bind_to_port(options_.host, options_.port) ? options_.port : -1;
  }
  return port_;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace histoscope::service
