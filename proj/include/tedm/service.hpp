#pragma once

#include "tedm/simulator.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <mutex>
#include <string>
#include <unordered_map>

namespace tedm::service {

/// HTTP-style outcome shared by the CLI and the HTTP API.
/// 200 ok, 400 malformed request or document, 422 well-formed but failing validation
/// or a domain rule, 500 internal.
struct Response {
    int status = 200;
    nlohmann::json body;

    /// 0 ok, 1 validation or schema failure, 3 internal.
    int exit_code() const;
};

/// Maps a library error to {"error": {code, message, path, epoch}} with its status.
Response error_response(const Error& e);

std::uint64_t fnv1a(std::string_view bytes);

/// Stateless apart from a content-addressed simulation cache; safe to share between threads.
class Service {
public:
    /// Body: a spec document. Result: findings, counts, and the canonical form.
    Response validate(const nlohmann::json& spec_document) const;

    /// Body: {"holders": [{"entity", "weight", "lock_end"?}] | "weights": [...] | "csv": "...",
    ///        "escrow": {"current_epoch", "lock_max"}?, "top_k": n?}
    Response metrics(const nlohmann::json& request) const;

    /// Body: {"scenario": {...}} or {"preset": name, "spec": {...}}, plus optional
    /// "epochs", "seed", "mechanism" overrides and "full": true for per-epoch records.
    Response simulate(const nlohmann::json& request,
                      const std::function<void(const sim::EpochRecord&)>& on_epoch = {});

    /// Body: {"a": spec, "b": spec}.
    Response compare(const nlohmann::json& request) const;

    /// Body: {"require": {property: level}, "prefer": [property, ...]}.
    Response recommend(const nlohmann::json& request) const;

    /// Body: {"proposal": {...}, "mechanism": {...}, "voters": [...], "ballots": [...], "prior_conviction"?}.
    Response tally(const nlohmann::json& request) const;

    Response presets() const;
    Response matrix() const;

    /// Base directory for spec paths referenced by scenario documents.
    void set_base_dir(std::string dir) { base_dir_ = std::move(dir); }

    std::size_t cache_size() const;

private:
    /// Builds the scenario and its validated spec; returns a non-200 response on failure.
    std::optional<Response> build_scenario(const nlohmann::json& request, sim::Scenario& out) const;

    std::string base_dir_ = ".";
    mutable std::mutex cache_mutex_;
    std::unordered_map<std::uint64_t, nlohmann::json> cache_;
};

/// JSON forms shared by the CLI text renderers and the API.
nlohmann::json concentration_json(const metrics::ConcentrationReport& report);
nlohmann::json recommendation_json(const governance::Recommendation& rec);
nlohmann::json matrix_json();
nlohmann::json tally_json(const governance::TallyResult& result);

}  // namespace tedm::service
