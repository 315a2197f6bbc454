#include <httplib.h>

#include "hemeroteca/service/api.hpp"

namespace hemeroteca::service {

using nlohmann::json;

struct Server::Impl {
    const Api& api;
    httplib::Server http;

    explicit Impl(const Api& a) : api(a) {
        auto handler = [this](const httplib::Request& req, httplib::Response& res) { serve(req, res); };
        http.Get(R"(/.*)", handler);
        http.Post(R"(/.*)", handler);
        http.Put(R"(/.*)", handler);
        http.Delete(R"(/.*)", handler);
    }

    void serve(const httplib::Request& req, httplib::Response& res) const {
        Request r;
        r.method = req.method;
        r.path = req.path;
        for (const auto& [k, v] : req.params) r.params.insert_or_assign(k, v);
        if (req.has_header("X-Api-Token")) r.token = req.get_header_value("X-Api-Token");
        Response out;
        try {
            r.body = req.body.empty() ? json(nullptr) : json::parse(req.body);
            out = api.handle(r);
        } catch (const json::parse_error& e) {
            const Error err(ErrorCode::BadRequest, std::string("request body is not JSON: ") + e.what());
            out = {400, error_envelope(err)};
        }
        res.status = out.status;
        res.set_content(out.body.dump(), "application/json");
    }
};

Server::Server(const Api& api) : impl_(std::make_unique<Impl>(api)) {}

Server::~Server() { stop(); }

int Server::bind(const std::string& host, int port) {
    if (port == 0) return impl_->http.bind_to_any_port(host);
    if (!impl_->http.bind_to_port(host, port))
        throw Error(ErrorCode::Internal, "cannot bind " + host + ":" + std::to_string(port));
    return port;
}

void Server::listen() { impl_->http.listen_after_bind(); }

void Server::stop() {
    if (impl_) impl_->http.stop();
}

}  // namespace hemeroteca::service
