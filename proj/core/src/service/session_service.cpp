#include <atomic>
#include <cctype>
#include <cstdlib>
#include <mutex>
#include <random>
#include <sstream>
#include <iomanip>

#include "histoscope/error.hpp"
#include "histoscope/ingest.hpp"
#include "histoscope/json_codec.hpp"
#include "histoscope/plot.hpp"
#include "histoscope/service.hpp"
#include "openapi.hpp"

namespace histoscope::service {

using Json = nlohmann::json;

struct SessionService::Session {
  std::string id;
  std::chrono::steady_clock::time_point created_at;
  std::atomic<std::chrono::steady_clock::time_point> last_access;

  std::mutex writer;  // serializes mutations
  mutable std::mutex snapshot_mutex;
  std::shared_ptr<const WorkspaceState> state;

  std::shared_ptr<const WorkspaceState> load() const {
    std::lock_guard lock(snapshot_mutex);
    return state;
  }
  void store(WorkspaceState next) {
    auto fresh = std::make_shared<const WorkspaceState>(std::move(next));
    std::lock_guard lock(snapshot_mutex);
    state = std::move(fresh);
  }
};

namespace {

/// Raised for requests that do not match the endpoint schema.
struct BadRequest : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ApiResponse json_response(int status, const Json& body) {
  return {status, "application/json", body.dump()};
}

ApiResponse error_response(int status, std::string_view code, const std::string& message) {
  return json_response(status, {{"code", code}, {"message", message}});
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::OverlayLimitExceeded:
    case ErrorCode::DepthMismatch:
      return 409;
    case ErrorCode::UnsupportedFormat:
    case ErrorCode::SixteenBitColor:
    case ErrorCode::UnsupportedDepth:
      return 415;
    case ErrorCode::RangeOutOfDomain:
    case ErrorCode::EmptyRange:
    case ErrorCode::NonInteger:
    case ErrorCode::InvalidLimit:
    case ErrorCode::CanvasTooSmall:
      return 422;
    case ErrorCode::CorruptFile:
    case ErrorCode::RaggedRows:
    case ErrorCode::NonIntegerValue:
    case ErrorCode::OutOfDomain:
    case ErrorCode::EmptyTable:
    case ErrorCode::InvalidImage:
      return 400;
  }
  return 400;
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string current;
  for (const char c : path) {
    if (c == '/') {
      if (!current.empty()) parts.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) parts.push_back(std::move(current));
  return parts;
}

Json parse_body(const std::string& body) {
  Json j = Json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw BadRequest("request body must be a JSON object");
  return j;
}

const UploadPart* find_part(const ApiRequest& request, std::string_view name) {
  for (const auto& part : request.parts) {
    if (part.name == name) return &part;
  }
  return nullptr;
}

std::shared_ptr<const ImageRecord> read_upload(const ApiRequest& request) {
  const UploadPart* file = find_part(request, "file");
  if (file == nullptr) throw BadRequest("multipart field 'file' is required");
  const std::string name = file->filename.empty() ? "upload" : file->filename;

  const auto lower = [](std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
  };
  if (lower(name).ends_with(".csv")) {
    BitDepth depth = BitDepth::k8;
    if (const UploadPart* d = find_part(request, "csv_depth")) {
      if (d->content == "16") {
        depth = BitDepth::k16;
      } else if (d->content != "8") {
        throw BadRequest("csv_depth must be 8 or 16");
      }
    }
    return std::make_shared<const ImageRecord>(ingest_csv(file->content, name, depth));
  }
  const auto* data = reinterpret_cast<const std::byte*>(file->content.data());
  return std::make_shared<const ImageRecord>(decode_image({data, file->content.size()}, name));
}

Json state_body(const std::string& id, const WorkspaceState& ws) {
  Json body = histoscope::json::workspace_to_json(ws);
  body["session_id"] = id;
  Json warnings = Json::array();
  for (const Layer& layer : ws.layers()) {
    if (exceeds_recommended_size(*layer.image)) {
      warnings.push_back(layer.image->source_name() + " is larger than " + std::to_string(kRecommendedMaxSide) +
                         " pixels on a side; interactive use may be slow");
    }
  }
  body["warnings"] = std::move(warnings);
  return body;
}

std::int64_t integer_field(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw BadRequest(std::string("field '") + key + "' is required");
  if (it->is_number_integer()) return it->get<std::int64_t>();
  if (it->is_number_float()) {
    throw Error(ErrorCode::NonInteger, std::string("field '") + key + "' must be an integer");
  }
  throw BadRequest(std::string("field '") + key + "' must be a number");
}

PlotSpec plot_spec_from(const ApiRequest& request) {
  PlotSpec spec;
  const auto read = [&](const char* key, std::uint32_t& out) {
    const auto it = request.query.find(key);
    if (it == request.query.end()) return;
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(it->second, &used);
      if (used != it->second.size() || v > 16384) throw BadRequest("");
      out = static_cast<std::uint32_t>(v);
    } catch (const std::exception&) {
      throw BadRequest(std::string("query parameter '") + key + "' must be a positive integer up to 16384");
    }
  };
  read("width", spec.canvas_width);
  read("height", spec.canvas_height);
  return spec;
}

std::string new_token(std::uint64_t counter) {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  std::ostringstream out;
  out << std::hex << std::setfill('0') << std::setw(16) << rng() << std::setw(8) << (counter & 0xffffffffu);
  return out.str();
}

}  // namespace

SessionService::SessionService(ServiceOptions options) : options_(std::move(options)) {}
SessionService::~SessionService() = default;

std::shared_ptr<SessionService::Session> SessionService::find(const std::string& id) const {
  std::shared_lock lock(sessions_mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) return nullptr;
  if (options_.clock() - it->second->last_access.load() > options_.session_ttl) return nullptr;
  return it->second;
}

std::string SessionService::insert(WorkspaceState state) {
  purge_expired();
  auto session = std::make_shared<Session>();
  session->created_at = options_.clock();
  session->last_access = session->created_at;
  session->store(std::move(state));
  std::unique_lock lock(sessions_mutex_);
  std::string id;
  do {
    id = new_token(++id_counter_);
  } while (sessions_.contains(id));
  session->id = id;
  sessions_.emplace(id, std::move(session));
  return id;
}

std::optional<WorkspaceState> SessionService::snapshot(const std::string& session_id) const {
  const auto session = find(session_id);
  if (!session) return std::nullopt;
  return *session->load();
}

std::size_t SessionService::session_count() const {
  std::shared_lock lock(sessions_mutex_);
  return sessions_.size();
}

std::size_t SessionService::purge_expired() {
  const auto now = options_.clock();
  std::unique_lock lock(sessions_mutex_);
  return std::erase_if(sessions_, [&](const auto& entry) {
    return now - entry.second->last_access.load() > options_.session_ttl;
  });
}

ApiResponse SessionService::create_session(const ApiRequest& request) {
  auto image = read_upload(request);
  WorkspaceState ws = create_workspace(std::move(image));
  const std::string id = insert(ws);
  return json_response(200, state_body(id, ws));
}

ApiResponse SessionService::with_session(const std::string& id, const std::function<ApiResponse(Session&)>& action) {
  const auto session = find(id);
  if (!session) return error_response(404, "UnknownSession", "no session with id '" + id + "'");
  session->last_access = options_.clock();
  return action(*session);
}

ApiResponse SessionService::mutate(Session& session,
                                   const std::function<WorkspaceState(const WorkspaceState&)>& change) {
  std::lock_guard lock(session.writer);
  const auto current = session.load();
  WorkspaceState next = change(*current);  // throws before anything is stored
  session.store(next);
  return json_response(200, state_body(session.id, next));
}

ApiResponse SessionService::handle(const ApiRequest& request) {
  try {
    const auto parts = split_path(request.path);
    const std::string& method = request.method;
    const auto not_allowed = [&] {
      return error_response(405, "MethodNotAllowed", method + " is not supported on " + request.path);
    };

    if (parts.size() == 1 && parts[0] == "healthz") {
      if (method != "GET") return not_allowed();
      return json_response(200, {{"status", "ok"}, {"version", HISTOSCOPE_VERSION}});
    }
    if (parts.size() == 1 && parts[0] == "openapi.yaml") {
      if (method != "GET") return not_allowed();
      return {200, "application/yaml", kOpenApiYaml};
    }
    if (parts.empty() || parts[0] != "sessions") {
      return error_response(404, "NotFound", "no endpoint at " + request.path);
    }
    if (parts.size() == 1) {
      if (method != "POST") return not_allowed();
      return create_session(request);
    }

    const std::string& id = parts[1];
    if (parts.size() == 2) {
      if (method == "GET") {
        return with_session(id, [](Session& s) { return json_response(200, state_body(s.id, *s.load())); });
      }
      if (method == "DELETE") {
        if (!find(id)) return error_response(404, "UnknownSession", "no session with id '" + id + "'");
        std::unique_lock lock(sessions_mutex_);
        sessions_.erase(id);
        return json_response(200, {{"deleted", id}});
      }
      return not_allowed();
    }
    if (parts.size() != 3) return error_response(404, "NotFound", "no endpoint at " + request.path);
    const std::string& resource = parts[2];

    if (resource == "overlays") {
      if (method == "POST") {
        return with_session(id, [&](Session& s) {
          auto image = read_upload(request);
          return mutate(s, [&](const WorkspaceState& ws) { return add_overlay(ws, image); });
        });
      }
      if (method == "DELETE") {
        return with_session(id, [&](Session& s) { return mutate(s, clear_overlays); });
      }
      return not_allowed();
    }
    if (resource == "range") {
      if (method != "PUT") return not_allowed();
      return with_session(id, [&](Session& s) {
        const Json body = parse_body(request.body);
        if (!body.contains("lo") || !body.contains("hi")) throw BadRequest("fields 'lo' and 'hi' are required");
        if (body["lo"].is_string() && body["hi"].is_string()) {
          const auto lo = body["lo"].get<std::string>();
          const auto hi = body["hi"].get<std::string>();
          return mutate(s, [&](const WorkspaceState& ws) { return set_range(ws, lo, hi); });
        }
        const std::int64_t lo = integer_field(body, "lo");
        const std::int64_t hi = integer_field(body, "hi");
        return mutate(s, [&](const WorkspaceState& ws) { return set_range(ws, lo, hi); });
      });
    }
    if (resource == "click") {
      if (method != "POST") return not_allowed();
      return with_session(id, [&](Session& s) {
        const Json body = parse_body(request.body);
        const auto it = body.find("x");
        if (it == body.end() || !it->is_number()) throw BadRequest("field 'x' must be a number");
        const double x = it->get<double>();
        return mutate(s, [&](const WorkspaceState& ws) { return apply_click(ws, x); });
      });
    }
    if (resource == "scale") {
      if (method != "PUT") return not_allowed();
      return with_session(id, [&](Session& s) {
        const Json body = parse_body(request.body);
        std::optional<ScaleMode> mode;
        if (const auto it = body.find("mode"); it != body.end()) {
          if (!it->is_string()) throw BadRequest("field 'mode' must be \"linear\" or \"log10\"");
          try {
            mode = parse_scale_mode(it->get<std::string>());
          } catch (const std::invalid_argument& e) {
            throw BadRequest(e.what());
          }
        }
        std::optional<std::int64_t> limit;
        if (body.contains("y_limit")) limit = integer_field(body, "y_limit");
        if (!mode && !limit) throw BadRequest("at least one of 'mode' or 'y_limit' is required");
        return mutate(s, [&](const WorkspaceState& ws) {
          WorkspaceState next = mode ? set_scale(ws, *mode) : ws;
          return limit ? set_y_limit(next, *limit) : next;
        });
      });
    }
    if (resource == "stats") {
      if (method != "GET") return not_allowed();
      return with_session(id, [](Session& s) {
        const auto ws = s.load();
        const auto stats = workspace_statistics(*ws);
        Json rows = Json::array();
        for (std::size_t i = 0; i < stats.size(); ++i) {
          Json row = histoscope::json::stats_to_json(stats[i]);
          row["index"] = i;
          row["name"] = ws->layers()[i].image->source_name();
          row["color"] = histoscope::json::layer_to_json(*ws, i)["color"];
          rows.push_back(std::move(row));
        }
        return json_response(200, {{"range", {{"lo", ws->range().lo}, {"hi", ws->range().hi}}},
                                   {"stats", std::move(rows)}});
      });
    }
    if (resource == "histogram") {
      if (method != "GET") return not_allowed();
      return with_session(id, [&](Session& s) {
        const auto ws = s.load();
        std::size_t index = 0;
        if (const auto it = request.query.find("image"); it != request.query.end()) {
          try {
            std::size_t used = 0;
            index = std::stoul(it->second, &used);
            if (used != it->second.size()) throw BadRequest("");
          } catch (const std::exception&) {
            throw BadRequest("query parameter 'image' must be a layer index");
          }
        }
        if (index >= ws->layers().size()) {
          return error_response(404, "UnknownImage", "session has no image " + std::to_string(index));
        }
        Json body = histoscope::json::histogram_to_json(*ws->layers()[index].histogram);
        body["image"] = index;
        return json_response(200, body);
      });
    }
    if (resource == "plot.png") {
      if (method != "GET") return not_allowed();
      return with_session(id, [&](Session& s) {
        const PlotSpec spec = plot_spec_from(request);
        const auto png = render_workspace_png(*s.load(), spec);
        return ApiResponse{200, "image/png", std::string(reinterpret_cast<const char*>(png.data()), png.size())};
      });
    }
    return error_response(404, "NotFound", "no endpoint at " + request.path);
  } catch (const BadRequest& e) {
    return error_response(400, "SchemaViolation", e.what());
  } catch (const Error& e) {
    return error_response(status_for(e.code()), to_string(e.code()), e.what());
  } catch (const Json::exception& e) {
    return error_response(400, "SchemaViolation", e.what());
  }
}

int default_port(int fallback) {
  if (const char* env = std::getenv("HISTOSCOPE_PORT")) {
    try {
      const int port = std::stoi(env);
      if (port > 0 && port < 65536) return port;
    } catch (const std::exception&) {
    }
  }
  return fallback;
}

}  // namespace histoscope::service
