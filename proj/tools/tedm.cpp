// tedm: command-line front end over tedm::service. Every command builds the same
// JSON request the HTTP API accepts, so --format json output matches the API body.

#include "tedm/csv.hpp"
#include "tedm/error.hpp"
#include "tedm/server.hpp"
#include "tedm/service.hpp"
#include "tedm/snapshot.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

using nlohmann::json;
using tedm::Error;
using tedm::ErrorCode;
using tedm::service::Response;

constexpr int kUsage = 2;

enum class Format { text, json };

struct Options {
    Format format = Format::text;
};

json read_json_file(const std::string& path) {
    std::string text = tedm::csv::read_file(path);
    try {
        return json::parse(text, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::SchemaError, path + ": malformed JSON: " + e.what());
    }
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    out << content;
    if (!out) throw Error(ErrorCode::IoError, "write failed: " + path);
}

std::string num(const json& j) {
    if (j.is_number_float()) {
        std::ostringstream out;
        out << j.get<double>();
        return out.str();
    }
    return j.is_string() ? j.get<std::string>() : j.dump();
}

void print_findings(const json& body) {
    for (const auto& f : body.value("findings", json::array())) {
        std::cout << "  " << f.value("severity", "") << " " << f.value("rule", "");
        if (!f.value("path", "").empty()) std::cout << " " << f.value("path", "");
        std::cout << ": " << f.value("message", "") << "\n";
    }
}

void print_error(const json& body) {
    const json& e = body.at("error");
    std::cerr << "error: " << e.value("code", "Error");
    if (e.contains("path")) std::cerr << " at " << e["path"].get<std::string>();
    if (e.contains("epoch")) std::cerr << " (epoch " << e["epoch"].dump() << ")";
    std::cerr << ": " << e.value("message", "") << "\n";
}

using TextRenderer = void (*)(const json&);

/// Prints the body and maps the status to an exit code.
int emit(const Options& opt, const Response& r, TextRenderer render) {
    if (opt.format == Format::json) {
        std::cout << r.body.dump(2) << "\n";
        return r.exit_code();
    }
    if (r.status == 200 || (r.status == 422 && r.body.contains("findings") && !r.body.contains("error"))) {
        render(r.body);
    } else {
        print_error(r.body);
        if (r.body.contains("findings")) print_findings(r.body);
    }
    return r.exit_code();
}

/// Failures before a request reaches the service: unreadable files are usage errors.
int emit_error(const Options& opt, const Error& e) {
    Response r = tedm::service::error_response(e);
    if (opt.format == Format::json)
        std::cout << r.body.dump(2) << "\n";
    else
        print_error(r.body);
    return e.code() == ErrorCode::IoError ? kUsage : r.exit_code();
}

void render_validation(const json& b) {
    std::cout << b.value("name", "spec") << ": " << (b.value("valid", false) ? "valid" : "INVALID") << " ("
              << b.value("errors", 0) << " errors, " << b.value("warnings", 0) << " warnings)\n";
    print_findings(b);
}

void render_metrics(const json& b) {
    std::cout << "holders " << b["holder_count"].dump() << ", total weight " << num(b["total_weight"]) << "\n";
    std::cout << "gini " << num(b["gini"]) << "\n";
    std::cout << "nakamoto " << b["nakamoto"].dump() << "\n";
    std::cout << "top-k shares:";
    for (const auto& s : b["top_k_shares"]) std::cout << " " << s["k"].dump() << "=" << num(s["share"]);
    std::cout << "\n";
}

void render_simulation(const json& b) {
    std::cout << "scenario " << b.value("scenario", "") << " (seed " << b["seed"].dump() << ", "
              << b.value("mechanism", "") << ", " << b["epochs"].dump() << " epochs)\n";
    const json& paths = b["paths"];
    auto ends = [&](const char* key) {
        const json& p = paths.value(key, json::array());
        if (p.empty()) return std::string("n/a");
        return num(p.front()) + " -> " + num(p.back());
    };
    std::cout << "gini " << ends("gini") << ", nakamoto " << ends("nakamoto") << "\n";
    std::cout << "voting-power nakamoto " << ends("power_nakamoto") << " (min " << num(b["min_power_nakamoto"])
              << ")\n";
    std::cout << "price " << ends("price") << ", max drawdown " << num(b["max_drawdown"]) << "\n";
    std::cout << "capture "
              << (b.value("capture", false) ? "yes (first at epoch " + b["first_capture_epoch"].dump() + ")" : "no")
              << "\n";
    std::cout << "proposals " << b["proposals_passed"].dump() << "/" << b["proposals"].dump() << " passed, "
              << b["event_count"].dump() << " events\n";
    for (const auto& e : b.value("events", json::array()))
        std::cout << "  epoch " << e["epoch"].dump() << " " << e.value("kind", "") << ": " << e.value("detail", "")
                  << "\n";
}

void render_comparison(const json& b) { std::cout << b.value("text", ""); }

void render_recommendation(const json& b) {
    if (b.value("no_candidate", false) || b["ranked"].empty()) {
        std::cout << "no mechanism meets every requirement\n";
        return;
    }
    int rank = 1;
    for (const auto& f : b["ranked"]) {
        std::cout << rank++ << ". " << f.value("display_name", "") << " (" << f.value("family", "") << ")";
        for (auto it = f["scores"].begin(); it != f["scores"].end(); ++it)
            std::cout << " " << it.key() << "=" << it->dump();
        std::cout << "\n";
    }
}

void render_tally(const json& b) {
    std::cout << b.value("proposal", "") << " under " << b.value("mechanism", "") << ": "
              << (b.value("passed", false) ? "passed" : "rejected") << "\n";
    std::cout << "yes " << num(b["yes"]) << ", no " << num(b["no"]) << ", turnout " << b["turnout"].dump() << "\n";
    if (b.contains("conviction")) std::cout << "conviction " << num(b["conviction"]) << "\n";
}

void render_presets(const json& b) {
    for (const auto& p : b["presets"]) std::cout << p.value("name", "") << ": " << p.value("description", "") << "\n";
}

void render_matrix(const json& b) {
    std::cout << std::left << std::setw(22) << "family";
    for (const auto& p : b["properties"]) std::cout << std::setw(22) << p.get<std::string>();
    std::cout << "\n";
    for (const auto& f : b["families"]) {
        const std::string name = f.get<std::string>();
        std::cout << std::setw(22) << name;
        for (const auto& p : b["properties"]) {
            const json& c = b["cells"][name][p.get<std::string>()];
            std::cout << std::setw(22) << (c["score"].dump() + (c.value("determined", true) ? "" : "?"));
        }
        std::cout << "\n";
    }
    std::cout << "(" << b.value("scale", "") << "; ? marks a default score)\n";
}

json mechanism_request(const std::string& family, const std::string& alpha, long lock_max, const std::string& budget) {
    json m = {{"family", family}};
    auto f = tedm::governance::kFamilyNames.parse(family, "voting mechanism family", "/mechanism/family");
    if (f == tedm::governance::Family::conviction && !alpha.empty()) m["conviction_alpha"] = alpha;
    if (f == tedm::governance::Family::vote_escrow && lock_max > 0) m["lock_max"] = lock_max;
    if (f == tedm::governance::Family::quadratic && !budget.empty()) m["credit_budget"] = budget;
    return m;
}

json vote_set_request(const tedm::snapshot::VoteSet& set) {
    using tedm::spec::exact_string;
    json voters = json::array(), ballots = json::array();
    for (const auto& v : set.voters) {
        json j = {{"id", v.id},
                  {"balance", exact_string(v.balance)},
                  {"lock_remaining", v.lock_remaining},
                  {"lock_max", v.lock_max},
                  {"reputation", exact_string(v.reputation)},
                  {"credits", exact_string(v.credits)}};
        if (v.identity_cluster) j["cluster"] = *v.identity_cluster;
        voters.push_back(std::move(j));
    }
    for (const auto& b : set.ballots) {
        json j = {{"voter", b.voter}, {"choice", std::string(tedm::governance::kChoiceNames.name(b.choice))}};
        if (b.credits_spent) j["credits_spent"] = exact_string(*b.credits_spent);
        ballots.push_back(std::move(j));
    }
    return {{"voters", std::move(voters)}, {"ballots", std::move(ballots)}};
}

void configure_logging() {
    auto logger = spdlog::stderr_color_mt("tedm");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("TEDM_LOG"); env && *env) {
        auto level = spdlog::level::from_str(env);
        // from_str maps unknown names to off
        if (level == spdlog::level::off && std::string(env) != "off")
            spdlog::warn("TEDM_LOG: unknown level '{}', keeping warn", env);
        else
            spdlog::set_level(level);
    }
}

}  // namespace

int main(int argc, char** argv) {
    configure_logging();

    CLI::App app{"Token economy design toolkit: validate specs, measure concentration, simulate, compare."};
    app.require_subcommand(1);
    Options opt;
    std::map<std::string, Format> formats{{"text", Format::text}, {"json", Format::json}};
    app.add_option("--format", opt.format, "Output format")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case))
        ->default_str("text");

    tedm::service::Service service;

    // validate
    std::string spec_path;
    auto* validate = app.add_subcommand("validate", "Parse and validate an economy spec");
    validate->add_option("spec", spec_path, "Spec JSON file")->required()->check(CLI::ExistingFile);

    // normalize
    std::string normalize_out;
    auto* normalize = app.add_subcommand("normalize", "Print the canonical form of a spec");
    normalize->add_option("spec", spec_path, "Spec JSON file")->required()->check(CLI::ExistingFile);
    normalize->add_option("-o,--out", normalize_out, "Write to this file instead of stdout");

    // metrics
    std::string snapshot_path;
    std::optional<long> escrow_epoch;
    long lock_max = 0;
    std::size_t top_k = 10;
    auto* metrics = app.add_subcommand("metrics", "Gini and Nakamoto coefficients of a holder snapshot");
    metrics->add_option("snapshot", snapshot_path, "CSV with entity,weight[,lock_end]")->required()->check(CLI::ExistingFile);
    auto* escrow_opt = metrics->add_option("--escrow-epoch", escrow_epoch, "Weigh holders by remaining lock as of this epoch");
    metrics->add_option("--lock-max", lock_max, "Vote-escrow horizon in epochs")->needs(escrow_opt)->check(CLI::PositiveNumber);
    metrics->add_option("--top-k", top_k, "Number of leading top-k shares to list")->default_val(10);

    // simulate
    std::string scenario_path, preset_name, sim_spec, out_path, csv_path, mechanism_family;
    std::optional<long> epochs;
    std::optional<std::uint64_t> seed;
    bool full = false;
    auto* simulate = app.add_subcommand("simulate", "Run a scenario file or a named preset");
    auto* scenario_opt = simulate->add_option("scenario", scenario_path, "Scenario JSON file")->check(CLI::ExistingFile);
    auto* preset_opt = simulate->add_option("--preset", preset_name, "Preset name (see `tedm presets`)")->excludes(scenario_opt);
    simulate->add_option("--spec", sim_spec, "Spec the preset runs against")->needs(preset_opt)->check(CLI::ExistingFile);
    simulate->add_option("--epochs", epochs, "Override the horizon")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", seed, "Override the seed");
    simulate->add_option("--mechanism", mechanism_family, "Override the voting mechanism family");
    simulate->add_option("--out", out_path, "Write the JSON report here");
    simulate->add_option("--csv", csv_path, "Write per-epoch rows here");
    simulate->add_flag("--full", full, "Include per-epoch records in the JSON report");

    // compare
    std::string spec_a, spec_b;
    auto* compare = app.add_subcommand("compare", "Side-by-side comparison of two specs");
    compare->add_option("a", spec_a, "First spec")->required()->check(CLI::ExistingFile);
    compare->add_option("b", spec_b, "Second spec")->required()->check(CLI::ExistingFile);

    // recommend
    std::vector<std::string> require, prefer;
    auto* recommend = app.add_subcommand("recommend", "Rank voting mechanisms against required properties");
    recommend->add_option("--require", require, "property=level (0 weak, 1 partial, 2 strong)");
    recommend->add_option("--prefer", prefer, "Tie-break order of properties")->delimiter(',');

    // tally
    std::string votes_path, alpha, budget, threshold, conviction_threshold, prior, proposal_id = "proposal";
    long tally_lock_max = 0;
    auto* tally = app.add_subcommand("tally", "Tally one proposal from a voter CSV");
    tally->add_option("votes", votes_path, "CSV with id,balance[,lock_remaining,lock_max,reputation,credits,cluster,choice,credits_spent]")
        ->required()
        ->check(CLI::ExistingFile);
    tally->add_option("--mechanism", mechanism_family, "Voting mechanism family")->required();
    tally->add_option("--alpha", alpha, "Conviction decay");
    tally->add_option("--lock-max", tally_lock_max, "Vote-escrow horizon")->check(CLI::PositiveNumber);
    tally->add_option("--credit-budget", budget, "Quadratic credit budget");
    tally->add_option("--threshold", threshold, "Pass threshold on yes / (yes + no)");
    tally->add_option("--conviction-threshold", conviction_threshold, "Conviction needed to pass");
    tally->add_option("--prior-conviction", prior, "Conviction carried into this round");
    tally->add_option("--proposal", proposal_id, "Proposal id");

    auto* presets = app.add_subcommand("presets", "List simulation presets");
    auto* matrix = app.add_subcommand("matrix", "Print the mechanism property matrix");

    // serve
    std::string bind = "127.0.0.1";
    int port = 8080;
    std::string base_dir = ".";
    auto* serve = app.add_subcommand("serve", "Serve the JSON API under /api/v1");
    serve->add_option("--port", port, "Port, 0 for any free port")->check(CLI::Range(0, 65535));
    serve->add_option("--bind", bind, "Address to bind (loopback by default)");
    serve->add_option("--base-dir", base_dir, "Directory for spec paths inside scenario documents");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (*validate) return emit(opt, service.validate(read_json_file(spec_path)), render_validation);

        if (*normalize) {
            auto parsed = tedm::spec::parse_spec(tedm::csv::read_file(spec_path));
            std::string canonical = tedm::spec::normalize_and_serialize(parsed.spec);
            for (const auto& n : parsed.notes) spdlog::warn("{} {}: {}", n.rule, n.path, n.message);
            if (normalize_out.empty())
                std::cout << canonical;
            else
                write_file(normalize_out, canonical);
            return 0;
        }

        if (*metrics) {
            json request = {{"csv", tedm::csv::read_file(snapshot_path)}, {"top_k", top_k}};
            if (escrow_epoch) request["escrow"] = {{"current_epoch", *escrow_epoch}, {"lock_max", lock_max > 0 ? lock_max : 4}};
            return emit(opt, service.metrics(request), render_metrics);
        }

        if (*simulate) {
            json request;
            if (!scenario_path.empty()) {
                request["scenario"] = read_json_file(scenario_path);
                service.set_base_dir(std::filesystem::path(scenario_path).parent_path().string());
            } else if (!preset_name.empty()) {
                if (sim_spec.empty()) throw CLI::RequiredError("--spec");
                request["preset"] = preset_name;
                request["spec"] = read_json_file(sim_spec);
            } else {
                throw CLI::RequiredError("scenario or --preset");
            }
            if (epochs) request["epochs"] = *epochs;
            if (seed) request["seed"] = *seed;
            if (!mechanism_family.empty()) request["mechanism"] = {{"family", mechanism_family}};
            if (full) request["full"] = true;

            std::vector<tedm::sim::EpochRecord> records;
            std::function<void(const tedm::sim::EpochRecord&)> collect;
            if (!csv_path.empty()) collect = [&](const tedm::sim::EpochRecord& r) { records.push_back(r); };
            Response r = service.simulate(request, collect);
            if (r.status == 200) {
                if (!out_path.empty()) write_file(out_path, r.body.dump(2) + "\n");
                if (!csv_path.empty()) {
                    tedm::sim::ScenarioReport report;
                    report.epochs = std::move(records);
                    write_file(csv_path, tedm::sim::epochs_csv(report));
                }
            }
            return emit(opt, r, render_simulation);
        }

        if (*compare) {
            json request = {{"a", read_json_file(spec_a)}, {"b", read_json_file(spec_b)}};
            return emit(opt, service.compare(request), render_comparison);
        }

        if (*recommend) {
            json req = json::object();
            for (const auto& item : require) {
                auto eq = item.find('=');
                if (eq == std::string::npos) throw CLI::ValidationError("--require", "expected property=level, got '" + item + "'");
                int level = 0;
                try {
                    std::size_t used = 0;
                    level = std::stoi(item.substr(eq + 1), &used);
                    if (used != item.size() - eq - 1) throw std::invalid_argument(item);
                } catch (const std::logic_error&) {
                    throw CLI::ValidationError("--require", "level must be 0, 1 or 2 in '" + item + "'");
                }
                req[item.substr(0, eq)] = level;
            }
            return emit(opt, service.recommend({{"require", req}, {"prefer", prefer}}), render_recommendation);
        }

        if (*tally) {
            auto set = tedm::snapshot::parse_vote_csv(tedm::csv::read_file(votes_path));
            json request = vote_set_request(set);
            request["mechanism"] = mechanism_request(mechanism_family, alpha, tally_lock_max, budget);
            json proposal = {{"id", proposal_id}};
            if (!threshold.empty()) proposal["threshold"] = threshold;
            if (!conviction_threshold.empty()) proposal["conviction_threshold"] = conviction_threshold;
            request["proposal"] = proposal;
            if (!prior.empty()) request["prior_conviction"] = prior;
            return emit(opt, service.tally(request), render_tally);
        }

        if (*presets) return emit(opt, service.presets(), render_presets);
        if (*matrix) return emit(opt, service.matrix(), render_matrix);

        if (*serve) {
            if (spdlog::get_level() > spdlog::level::info && !std::getenv("TEDM_LOG")) spdlog::set_level(spdlog::level::info);
            service.set_base_dir(base_dir);
            tedm::service::HttpServer server(service);
            int bound = server.bind(bind, port);
            spdlog::info("listening on http://{}:{}/api/v1", bind, bound);
            std::cout << "listening on http://" << bind << ":" << bound << "/api/v1" << std::endl;
            server.listen();
            return 0;
        }
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        return emit_error(opt, e);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return kUsage;
}
