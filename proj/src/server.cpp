#include "tedm/server.hpp"

#include "tedm/error.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>

#include <cstdio>

namespace tedm::service {

using nlohmann::json;

namespace {

void send(httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_header("Access-Control-Expose-Headers", "X-Content-Hash");
    res.set_content(r.body.dump(), "application/json");
}

/// Clients key result panels by this hash; it covers the path and the parsed body, so
/// formatting differences in the request do not change it.
void tag(const httplib::Request& req, httplib::Response& res, const json& body) {
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a(req.path + "\n" + body.dump())));
    res.set_header("X-Content-Hash", hex);
}

bool parse_body(const httplib::Request& req, httplib::Response& res, json& out) {
    try {
        out = json::parse(req.body, nullptr, true, true);
        tag(req, res, out);
        return true;
    } catch (const json::parse_error& e) {
        send(res, {400, {{"error", {{"code", "SchemaError"}, {"message", std::string("malformed JSON: ") + e.what()}}}}});
        return false;
    }
}

}  // namespace

HttpServer::HttpServer(Service& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
    auto& s = *server_;

    auto post = [&](const char* path, auto handler) {
        s.Post(path, [this, handler](const httplib::Request& req, httplib::Response& res) {
            json body;
            if (!parse_body(req, res, body)) return;
            send(res, handler(service_, body));
        });
    };
    post("/api/v1/validate", [](Service& sv, const json& b) { return sv.validate(b); });
    post("/api/v1/metrics", [](Service& sv, const json& b) { return sv.metrics(b); });
    post("/api/v1/compare", [](Service& sv, const json& b) { return sv.compare(b); });
    post("/api/v1/recommend", [](Service& sv, const json& b) { return sv.recommend(b); });
    post("/api/v1/tally", [](Service& sv, const json& b) { return sv.tally(b); });

    s.Post("/api/v1/simulate", [this](const httplib::Request& req, httplib::Response& res) {
        json body;
        if (!parse_body(req, res, body)) return;
        bool stream = req.has_param("stream") && req.get_param_value("stream") != "0";
        if (!stream) {
            send(res, service_.simulate(body));
            return;
        }
        res.set_chunked_content_provider("application/x-ndjson", [this, body](std::size_t, httplib::DataSink& sink) {
            auto write_line = [&](const json& j) {
                std::string line = j.dump() + "\n";
                return sink.write(line.data(), line.size());
            };
            Response r = service_.simulate(body, [&](const sim::EpochRecord& rec) { write_line(sim::epoch_json(rec)); });
            if (r.status == 200)
                write_line({{"summary", r.body}});
            else
                write_line({{"error", r.body.value("error", json())}, {"status", r.status}});
            sink.done();
            return true;
        });
    });

    s.Get("/api/v1/presets", [this](const httplib::Request&, httplib::Response& res) { send(res, service_.presets()); });
    s.Get("/api/v1/matrix", [this](const httplib::Request&, httplib::Response& res) { send(res, service_.matrix()); });
    s.Get("/api/v1/health", [](const httplib::Request&, httplib::Response& res) {
        send(res, {200, {{"status", "ok"}}});
    });

    s.set_exception_handler([](const httplib::Request& req, httplib::Response& res, std::exception_ptr ep) {
        std::string what = "unknown error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            what = e.what();
        } catch (...) {
        }
        spdlog::error("{} {}: {}", req.method, req.path, what);
        send(res, {500, {{"error", {{"code", "Internal"}, {"message", what}}}}});
    });
    s.set_logger([](const httplib::Request& req, const httplib::Response& res) {
        spdlog::info("{} {} -> {}", req.method, req.path, res.status);
    });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) {
        int bound = server_->bind_to_any_port(host);
        if (bound <= 0) throw Error(ErrorCode::IoError, "cannot bind " + host);
        return bound;
    }
    if (!server_->bind_to_port(host, port))
        throw Error(ErrorCode::IoError, "cannot bind " + host + ":" + std::to_string(port));
    return port;
}

void HttpServer::listen() { server_->listen_after_bind(); }

void HttpServer::stop() {
    if (server_ && server_->is_running()) server_->stop();
}

void HttpServer::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace tedm::service
