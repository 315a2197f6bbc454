#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "hemeroteca/app/workspace.hpp"
#include "hemeroteca/common/error.hpp"

namespace hemeroteca::service {

inline constexpr std::size_t kDefaultPageSize = 50;
inline constexpr std::size_t kMaxPageSize = 1000;

struct Request {
    std::string method;
    std::string path;
    std::map<std::string, std::string> params;  // decoded query string
    nlohmann::json body;                         // null when absent
    std::optional<std::string> token;            // X-Api-Token header
};

struct Response {
    int status = 200;
    nlohmann::json body;
};

int http_status(ErrorCode code) noexcept;

/// {"status": "ok", "data": ...}
nlohmann::json ok_envelope(nlohmann::json data);
/// {"status": "error", "error": {"code", "message", "details"}}
nlohmann::json error_envelope(const Error& error);

/// Route table over a workspace. Each endpoint parses its inputs, makes the
/// same module calls a direct caller would and serializes the result, so
/// the HTTP server is a transport wrapper around handle().
///
///   POST /articles:ingest                 GET  /articles
///   GET  /articles/{id}[?view=tree]       POST /pipeline/run
///   GET  /vocab/terms   POST /vocab/terms POST /vocab/links
///   GET  /vocab/expand  GET  /vocab/tf    POST /query
///   GET  /curation/tasks                  GET  /curation/tasks/{id}
///   POST /curation/tasks/{id}/actions     POST /curation/tasks/{id}:promote
///   GET  /events   GET /events/{id}       GET  /events/heatmap
///   GET  /events/famous                   GET  /events/evolution
///   GET  /events/export                   GET  /health
class Api {
public:
    explicit Api(app::Workspace& workspace);

    /// Never throws: failures come back as error envelopes.
    Response handle(const Request& request) const;

private:
    nlohmann::json dispatch(const Request& request) const;

    app::Workspace& ws_;
};

/// HTTP transport for an Api (cpp-httplib).
class Server {
public:
    explicit Server(const Api& api);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Binds; port 0 picks a free port. Returns the bound port.
    int bind(const std::string& host, int port);
    /// Blocks until stop().
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace hemeroteca::service
