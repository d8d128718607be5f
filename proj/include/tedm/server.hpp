#pragma once

#include "tedm/service.hpp"

#include <memory>
#include <string>

namespace httplib {
class Server;
}

namespace tedm::service {

/// Routes under /api/v1:
///   POST validate | simulate | metrics | compare | recommend | tally
///   GET  presets | matrix | health
/// POST simulate?stream=1 answers with NDJSON: one line per epoch, then a final
/// {"summary": ...} or {"error": ..., "status": n} line.
class HttpServer {
public:
    explicit HttpServer(Service& service);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Port 0 picks a free port. Returns the bound port; throws Error{IoError} on failure.
    int bind(const std::string& host, int port);
    /// Blocks until stop().
    void listen();
    void stop();
    void wait_until_ready() const;

private:
    Service& service_;
    std::unique_ptr<httplib::Server> server_;
};

}  // namespace tedm::service
