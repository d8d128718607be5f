#include "tedm/service.hpp"

#include "tedm/error.hpp"
#include "tedm/snapshot.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <variant>

namespace tedm::service {

using nlohmann::json;

int Response::exit_code() const {
    if (status < 300) return 0;
    if (status < 500) return 1;
    return 3;
}

Response error_response(const Error& e) {
    int status = 422;
    switch (e.code()) {
        case ErrorCode::SchemaError:
        case ErrorCode::UnknownEnumValue:
        case ErrorCode::UnknownPreset:
        case ErrorCode::InvalidArgument:
        case ErrorCode::IoError:
            status = 400;
            break;
        default:
            break;
    }
    json err = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
    if (!e.path().empty()) err["path"] = e.path();
    if (e.epoch()) err["epoch"] = *e.epoch();
    return {status, {{"error", err}}};
}

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

template <typename F>
Response guarded(const char* what, F&& body) {
    try {
        return body();
    } catch (const Error& e) {
        spdlog::debug("{}: {}", what, e.describe());
        return error_response(e);
    } catch (const json::exception& e) {
        return {400, {{"error", {{"code", "SchemaError"}, {"message", e.what()}}}}};
    } catch (const std::exception& e) {
        spdlog::error("{}: internal error: {}", what, e.what());
        return {500, {{"error", {{"code", "Internal"}, {"message", e.what()}}}}};
    }
}

const json& member(const json& request, const char* key) {
    if (!request.is_object()) throw Error(ErrorCode::SchemaError, "request body must be a JSON object");
    auto it = request.find(key);
    if (it == request.end()) throw Error(ErrorCode::SchemaError, std::string("missing field '") + key + "'", std::string("/") + key);
    return *it;
}

Quantity quantity_of(const json& j, const std::string& path) {
    try {
        if (j.is_string()) return parse_quantity(j.get<std::string>());
        if (j.is_number()) return parse_quantity(j.dump());
    } catch (const Error& e) {
        throw Error(ErrorCode::SchemaError, e.what(), path);
    }
    throw Error(ErrorCode::SchemaError, "expected a number or numeric string", path);
}

/// Parses and validates; a spec with errors yields a 422 carrying the findings.
std::variant<spec::EconomySpec, Response> checked_spec(const json& document, const std::string& label) {
    spec::ParsedSpec parsed = spec::parse_spec_json(document);
    spec::ValidationReport report = spec::validate_spec(parsed.spec);
    if (report.valid()) return std::move(parsed.spec);
    json body = spec::to_json(report);
    body["error"] = {{"code", "ValidationFailed"}, {"message", label + " has validation errors"}};
    return Response{422, std::move(body)};
}

governance::Requirements requirements_of(const json& j) {
    governance::Requirements req;
    if (j.is_null()) return req;
    if (!j.is_object()) throw Error(ErrorCode::SchemaError, "require must map property to level", "/require");
    for (auto it = j.begin(); it != j.end(); ++it) {
        std::string path = "/require/" + it.key();
        auto p = governance::kPropertyNames.parse(it.key(), "property", path);
        if (!it->is_number_integer()) throw Error(ErrorCode::SchemaError, "level must be an integer", path);
        req[p] = it->get<int>();
    }
    return req;
}

std::vector<governance::Property> preferences_of(const json& j) {
    std::vector<governance::Property> out;
    if (j.is_null()) return out;
    if (!j.is_array()) throw Error(ErrorCode::SchemaError, "prefer must be a list", "/prefer");
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_string()) throw Error(ErrorCode::SchemaError, "expected a property name", "/prefer/" + std::to_string(i));
        out.push_back(governance::kPropertyNames.parse(j[i].get<std::string>(), "property", "/prefer/" + std::to_string(i)));
    }
    return out;
}

governance::VotingMechanism mechanism_of(const json& j) { return spec::parse_mechanism_json(j, "/mechanism"); }

}  // namespace

json concentration_json(const metrics::ConcentrationReport& r) {
    json top = json::array();
    for (const auto& [k, share] : r.top_k_shares) top.push_back({{"k", k}, {"share", round_places(share)}});
    return {{"gini", round_places(r.gini)},
            {"gini_exact", spec::exact_string(r.gini_exact)},
            {"nakamoto", r.nakamoto},
            {"holder_count", r.holder_count},
            {"total_weight", spec::exact_string(r.total_weight)},
            {"top_k_shares", std::move(top)}};
}

json recommendation_json(const governance::Recommendation& rec) {
    json ranked = json::array();
    for (auto f : rec.ranked) {
        json scores;
        for (auto p : governance::kProperties)
            scores[std::string(governance::kPropertyNames.name(p))] = governance::property_matrix().score(f, p);
        ranked.push_back({{"family", std::string(governance::kFamilyNames.name(f))},
                          {"display_name", std::string(governance::display_name(f))},
                          {"scores", std::move(scores)}});
    }
    return {{"ranked", std::move(ranked)}, {"no_candidate", rec.no_candidate}};
}

json matrix_json() {
    json families = json::array(), properties = json::array(), cells = json::object();
    for (auto p : governance::kProperties) properties.push_back(std::string(governance::kPropertyNames.name(p)));
    for (auto f : governance::kFamilies) {
        std::string name(governance::kFamilyNames.name(f));
        families.push_back(name);
        json row = json::object();
        for (auto p : governance::kProperties) {
            const auto& c = governance::property_matrix().cell(f, p);
            row[std::string(governance::kPropertyNames.name(p))] = {
                {"score", c.score}, {"basis", std::string(c.basis)}, {"determined", c.determined}};
        }
        cells[name] = std::move(row);
    }
    return {{"families", std::move(families)}, {"properties", std::move(properties)}, {"cells", std::move(cells)},
            {"scale", "0 weak, 1 partial, 2 strong"}};
}

json tally_json(const governance::TallyResult& r) {
    json out = {{"yes", spec::exact_string(r.yes)},
                {"no", spec::exact_string(r.no)},
                {"yes_approx", round_places(to_double(r.yes))},
                {"no_approx", round_places(to_double(r.no))},
                {"turnout", r.turnout},
                {"passed", r.passed}};
    if (r.conviction) out["conviction"] = spec::exact_string(*r.conviction);
    return out;
}

Response Service::validate(const json& document) const {
    return guarded("validate", [&]() -> Response {
        spec::ParsedSpec parsed = spec::parse_spec_json(document);
        spec::ValidationReport report = spec::validate_spec(parsed.spec);
        report.findings.insert(report.findings.end(), parsed.notes.begin(), parsed.notes.end());
        std::sort(report.findings.begin(), report.findings.end());
        json body = spec::to_json(report);
        body["name"] = parsed.spec.name;
        return {report.valid() ? 200 : 422, std::move(body)};
    });
}

Response Service::metrics(const json& request) const {
    return guarded("metrics", [&]() -> Response {
        if (!request.is_object()) throw Error(ErrorCode::SchemaError, "request body must be a JSON object");
        std::vector<snapshot::HolderRow> rows;
        if (auto it = request.find("csv"); it != request.end()) {
            rows = snapshot::parse_holder_csv(it->get<std::string>());
        } else if (auto h = request.find("holders"); h != request.end()) {
            for (std::size_t i = 0; i < h->size(); ++i) {
                const json& e = (*h)[i];
                std::string path = "/holders/" + std::to_string(i);
                snapshot::HolderRow row;
                row.entity = e.value("entity", "h" + std::to_string(i));
                row.weight = quantity_of(member(e, "weight"), path + "/weight");
                if (e.contains("lock_end")) row.lock_end = e.at("lock_end").get<std::int64_t>();
                rows.push_back(std::move(row));
            }
        } else {
            const json& w = member(request, "weights");
            if (!w.is_array()) throw Error(ErrorCode::SchemaError, "weights must be a list", "/weights");
            for (std::size_t i = 0; i < w.size(); ++i)
                rows.push_back({"h" + std::to_string(i), quantity_of(w[i], "/weights/" + std::to_string(i)), std::nullopt});
        }
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (rows[i].weight < 0) throw Error(ErrorCode::SchemaError, "negative weight", "/holders/" + std::to_string(i));

        std::optional<snapshot::EscrowView> escrow;
        if (auto e = request.find("escrow"); e != request.end() && !e->is_null()) {
            escrow = snapshot::EscrowView{e->value("current_epoch", std::int64_t{0}), e->value("lock_max", std::int64_t{4})};
            if (escrow->lock_max < 1) throw Error(ErrorCode::InvalidArgument, "lock_max must be positive", "/escrow/lock_max");
        }
        std::size_t top_k = request.value("top_k", std::size_t{10});
        auto report = metrics::concentration_report(snapshot::to_distribution(rows, escrow), top_k);
        return {200, concentration_json(report)};
    });
}

std::optional<Response> Service::build_scenario(const json& request, sim::Scenario& out) const {
    if (!request.is_object()) throw Error(ErrorCode::SchemaError, "request body must be a JSON object");
    if (auto s = request.find("scenario"); s != request.end()) {
        out = sim::parse_scenario(*s, base_dir_);
        auto checked = checked_spec(spec::to_json(out.spec), "scenario spec");
        if (auto* r = std::get_if<Response>(&checked)) return *r;
    } else {
        const json& name = member(request, "preset");
        if (!name.is_string()) throw Error(ErrorCode::SchemaError, "preset must be a name", "/preset");
        auto checked = checked_spec(member(request, "spec"), "spec");
        if (auto* r = std::get_if<Response>(&checked)) return *r;
        out = sim::preset(name.get<std::string>(), std::get<spec::EconomySpec>(checked));
    }
    if (auto e = request.find("epochs"); e != request.end()) {
        if (!e->is_number_integer()) throw Error(ErrorCode::SchemaError, "epochs must be an integer", "/epochs");
        sim::Epoch epochs = e->get<sim::Epoch>();
        // presets place shocks relative to their default horizon
        std::erase_if(out.shocks, [&](const sim::Shock& s) { return s.epoch > epochs; });
        std::erase_if(out.flows, [&](const sim::FlowEntry& f) { return f.epoch > epochs; });
        out.epochs = epochs;
    }
    if (auto s = request.find("seed"); s != request.end()) {
        if (!s->is_number_integer() || (!s->is_number_unsigned() && s->get<std::int64_t>() < 0))
            throw Error(ErrorCode::SchemaError, "seed must be a non-negative integer", "/seed");
        out.seed = s->get<std::uint64_t>();
    }
    if (auto m = request.find("mechanism"); m != request.end()) out.mechanism = mechanism_of(*m);
    return std::nullopt;
}

Response Service::simulate(const json& request, const std::function<void(const sim::EpochRecord&)>& on_epoch) {
    return guarded("simulate", [&]() -> Response {
        sim::Scenario scenario;
        if (auto failure = build_scenario(request, scenario)) return *failure;
        bool full = request.value("full", false);

        json key_doc = request;
        key_doc.erase("scenario");
        key_doc.erase("spec");
        std::string key_text = key_doc.dump() + spec::normalize_and_serialize(scenario.spec) +
                               (request.contains("scenario") ? request.at("scenario").dump() : std::string());
        std::uint64_t key = fnv1a(key_text);

        if (!on_epoch) {
            std::lock_guard lock(cache_mutex_);
            if (auto it = cache_.find(key); it != cache_.end()) {
                spdlog::debug("simulate: cache hit {:016x}", key);
                return {200, it->second};
            }
        }
        spdlog::info("simulate: {} ({} epochs, seed {})", scenario.name, scenario.epochs, scenario.seed);
        sim::ScenarioReport report = sim::run_scenario(scenario, on_epoch);
        json body = full ? sim::to_json(report) : sim::report_summary(report);
        {
            std::lock_guard lock(cache_mutex_);
            cache_.emplace(key, body);
        }
        return {200, std::move(body)};
    });
}

std::size_t Service::cache_size() const {
    std::lock_guard lock(cache_mutex_);
    return cache_.size();
}

Response Service::compare(const json& request) const {
    return guarded("compare", [&]() -> Response {
        auto a = checked_spec(member(request, "a"), "spec a");
        if (auto* r = std::get_if<Response>(&a)) return *r;
        auto b = checked_spec(member(request, "b"), "spec b");
        if (auto* r = std::get_if<Response>(&b)) return *r;
        auto report = spec::compare_specs(std::get<spec::EconomySpec>(a), std::get<spec::EconomySpec>(b));
        json body = spec::to_json(report);
        body["text"] = spec::render_text(report);
        return {200, std::move(body)};
    });
}

Response Service::recommend(const json& request) const {
    return guarded("recommend", [&]() -> Response {
        if (!request.is_object()) throw Error(ErrorCode::SchemaError, "request body must be a JSON object");
        auto req = requirements_of(request.value("require", json()));
        auto prefer = preferences_of(request.value("prefer", json()));
        json body = recommendation_json(governance::recommend_mechanism(req, prefer));
        json require = json::object();
        for (const auto& [p, level] : req) require[std::string(governance::kPropertyNames.name(p))] = level;
        json pref = json::array();
        for (auto p : prefer) pref.push_back(std::string(governance::kPropertyNames.name(p)));
        body["require"] = std::move(require);
        body["prefer"] = std::move(pref);
        return {200, std::move(body)};
    });
}

Response Service::tally(const json& request) const {
    return guarded("tally", [&]() -> Response {
        auto mechanism = mechanism_of(member(request, "mechanism"));

        governance::Proposal proposal;
        proposal.id = "proposal";
        if (auto p = request.find("proposal"); p != request.end()) {
            proposal.id = p->value("id", proposal.id);
            if (p->contains("threshold")) proposal.threshold = quantity_of(p->at("threshold"), "/proposal/threshold");
            if (p->contains("conviction_threshold"))
                proposal.conviction_threshold = quantity_of(p->at("conviction_threshold"), "/proposal/conviction_threshold");
        }

        std::vector<governance::Voter> voters;
        const json& vs = member(request, "voters");
        for (std::size_t i = 0; i < vs.size(); ++i) {
            const json& v = vs[i];
            std::string path = "/voters/" + std::to_string(i);
            governance::Voter voter;
            voter.id = member(v, "id").get<std::string>();
            voter.balance = quantity_of(member(v, "balance"), path + "/balance");
            voter.lock_remaining = v.value("lock_remaining", governance::Epoch{0});
            voter.lock_max = v.value("lock_max", governance::Epoch{4});
            if (v.contains("reputation")) voter.reputation = quantity_of(v.at("reputation"), path + "/reputation");
            if (v.contains("credits")) voter.credits = quantity_of(v.at("credits"), path + "/credits");
            if (v.contains("cluster")) voter.identity_cluster = v.at("cluster").get<std::string>();
            voters.push_back(std::move(voter));
        }
        std::vector<governance::Ballot> ballots;
        const json& bs = member(request, "ballots");
        for (std::size_t i = 0; i < bs.size(); ++i) {
            const json& b = bs[i];
            std::string path = "/ballots/" + std::to_string(i);
            governance::Ballot ballot;
            ballot.voter = member(b, "voter").get<std::string>();
            ballot.choice = governance::kChoiceNames.parse(member(b, "choice").get<std::string>(), "vote choice", path + "/choice");
            if (b.contains("credits_spent")) ballot.credits_spent = quantity_of(b.at("credits_spent"), path + "/credits_spent");
            ballots.push_back(std::move(ballot));
        }
        Quantity prior;
        if (request.contains("prior_conviction")) prior = quantity_of(request.at("prior_conviction"), "/prior_conviction");

        for (const auto& v : voters) v.check();
        auto result = governance::tally(proposal, voters, ballots, mechanism, prior);
        json body = tally_json(result);
        body["proposal"] = proposal.id;
        body["mechanism"] = std::string(governance::kFamilyNames.name(mechanism.family));
        return {200, std::move(body)};
    });
}

Response Service::presets() const {
    json list = json::array();
    for (auto name : sim::kPresetNames)
        list.push_back({{"name", std::string(name)}, {"description", std::string(sim::preset_description(name))},
                        {"epochs", 100}, {"agents", 1000}});
    return {200, {{"presets", std::move(list)}}};
}

Response Service::matrix() const { return {200, matrix_json()}; }

}  // namespace tedm::service
