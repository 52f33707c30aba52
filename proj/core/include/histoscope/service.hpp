#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "histoscope/workspace.hpp"

namespace histoscope::service {

/// One uploaded multipart part.
struct UploadPart {
  std::string name;      // form field name
  std::string filename;  // empty for plain fields
  std::string content;
};

/// Transport-neutral request: what the HTTP adapter hands to the service.
struct ApiRequest {
  std::string method;  // "GET", "POST", "PUT", "DELETE"
  std::string path;    // e.g. "/sessions/ab12/range"
  std::string body;
  std::map<std::string, std::string> query;
  std::vector<UploadPart> parts;
};

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

struct ServiceOptions {
  std::chrono::seconds session_ttl = std::chrono::hours(24);
  std::function<std::chrono::steady_clock::time_point()> clock = [] { return std::chrono::steady_clock::now(); };
};

/// In-memory session store plus the JSON endpoint table.
///
/// Requests against different sessions run in parallel. Mutations on one
/// session are serialized; a failed mutation leaves the stored state as it
/// was. Sessions idle for longer than the TTL are dropped.
class SessionService {
 public:
  explicit SessionService(ServiceOptions options = {});
  ~SessionService();

  SessionService(const SessionService&) = delete;
  SessionService& operator=(const SessionService&) = delete;

  ApiResponse handle(const ApiRequest& request);

  /// Current state of a session, if it exists.
  std::optional<WorkspaceState> snapshot(const std::string& session_id) const;
  std::size_t session_count() const;
  std::size_t purge_expired();

 private:
  struct Session;

  std::shared_ptr<Session> find(const std::string& id) const;
  std::string insert(WorkspaceState state);

  ApiResponse create_session(const ApiRequest& request);
  ApiResponse with_session(const std::string& id, const std::function<ApiResponse(Session&)>& action);
  ApiResponse mutate(Session& session,
                     const std::function<WorkspaceState(const WorkspaceState&)>& change);

  ServiceOptions options_;
  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t id_counter_ = 0;
};

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8765;
  /// Directory of static UI assets served at "/", if set.
  std::optional<std::string> static_dir;
};

/// cpp-httplib front end for a SessionService.
class HttpServer {
 public:
  HttpServer(SessionService& service, ServerOptions options);
  ~HttpServer();

  /// Binds the socket; port 0 picks a free one. Returns the bound port or -1.
  int bind();
  /// Serves until stop(); call bind() first.
  bool listen();
  void stop();
  int port() const noexcept { return port_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  ServerOptions options_;
  int port_ = -1;
};

/// Port from $HISTOSCOPE_PORT, else the fallback.
int default_port(int fallback = 8765);

}  // namespace histoscope::service
