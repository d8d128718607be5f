#include "tedm/csv.hpp"
#include "tedm/error.hpp"
#include "tedm/simulator.hpp"

#include <doctest.h>

#include <chrono>

using namespace tedm;
using namespace tedm::sim;
using nlohmann::json;

namespace {

spec::EconomySpec fixture(const std::string& name) {
    return spec::parse_spec(csv::read_file(TEDM_SOURCE_DIR "/data/fixtures/" + name)).spec;
}

spec::EconomySpec with_family(spec::EconomySpec s, governance::Family f) {
    s.governance.chosen_mechanism = {};
    s.governance.chosen_mechanism.family = f;
    return s;
}

/// Small hand-built scenario used where presets would be slow or opaque.
Scenario small(std::uint64_t seed = 1) {
    Scenario s;
    s.name = "small";
    s.spec = fixture("uniswap.tedm.json");
    s.epochs = 20;
    s.seed = seed;
    AgentGroup holders;
    holders.name = "h";
    holders.population = 50;
    holders.balance.kind = BalanceKind::uniform;
    holders.balance.low = 10;
    holders.balance.high = 100;
    holders.behavior.kind = BehaviorKind::governance_participant;
    holders.behavior.participation = 0.5;
    s.agents = {holders};
    return s;
}

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::IoError;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

TEST_CASE("identical scenario and seed give identical reports") {
    for (auto name : {"capture", "sell_off_cascade"}) {
        auto scenario = preset(name, fixture("uniswap.tedm.json"));
        scenario.epochs = 60;
        auto a = to_json(run_scenario(scenario)).dump();
        auto b = to_json(run_scenario(scenario)).dump();
        CHECK(a == b);
    }
    auto s = small(3);
    CHECK(epochs_csv(run_scenario(s)) == epochs_csv(run_scenario(s)));
    CHECK(to_json(run_scenario(small(3))) != to_json(run_scenario(small(4))));
}

TEST_CASE("per-epoch metrics agree with the recorded distributions") {
    auto s = small();
    s.shocks = {{5, ShockKind::sell_off, Quantity(1, 10), ""}};
    auto report = run_scenario(s);
    REQUIRE(report.epochs.size() == 20);
    for (const auto& rec : report.epochs) {
        CHECK(rec.balance_metrics == metrics::concentration_report(rec.balances));
        REQUIRE(rec.power_metrics);
        CHECK(*rec.power_metrics == metrics::concentration_report(rec.voting_power));
        CHECK(rec.capture == (rec.power_metrics->nakamoto == 1));
        // agents plus the market pool hold everything in circulation
        CHECK(rec.balances.total() + rec.market_pool == rec.supply.circulating);
    }
}

TEST_CASE("capture preset sets the capture flag with power nakamoto 1") {
    for (auto family : {governance::Family::one_token_one_vote, governance::Family::vote_escrow,
                        governance::Family::conviction}) {
        auto report = run_scenario(preset("capture", with_family(fixture("uniswap.tedm.json"), family)));
        INFO(governance::kFamilyNames.name(family));
        CHECK(report.summary.capture);
        CHECK(report.summary.first_capture_epoch == 50);
        CHECK(report.summary.min_power_nakamoto == 1);
        CHECK_FALSE(report.epochs[48].capture);
        CHECK(report.epochs[49].capture);
        CHECK(report.epochs[49].power_metrics->nakamoto == 1);
    }
}

TEST_CASE("sybil preset leaves 1t1v tallies unchanged") {
    auto spec = with_family(fixture("uniswap.tedm.json"), governance::Family::one_token_one_vote);
    auto attacked = preset("sybil", spec);
    auto baseline = attacked;
    baseline.shocks.clear();
    auto a = run_scenario(attacked);
    auto b = run_scenario(baseline);
    REQUIRE(a.epochs.size() == 100);
    for (std::size_t t = 0; t < a.epochs.size(); ++t) {
        REQUIRE(a.epochs[t].governance.size() == 1);
        CHECK(a.epochs[t].governance[0].result.yes == b.epochs[t].governance[0].result.yes);
        CHECK(a.epochs[t].governance[0].result.no == b.epochs[t].governance[0].result.no);
        CHECK(a.epochs[t].governance[0].attacker_share == b.epochs[t].governance[0].attacker_share);
    }
    // the split happened: 100 identities at the end
    CHECK(a.epochs.back().balances.size() == 999 + 100);
}

TEST_CASE("sybil preset raises the attacker's quadratic vote share every epoch") {
    auto report = run_scenario(preset("sybil", fixture("quadratic_grants.tedm.json")));
    REQUIRE(report.mechanism == "quadratic");
    double previous = -1;
    for (const auto& rec : report.epochs) {
        REQUIRE(rec.governance.size() == 1);
        REQUIRE(rec.governance[0].attacker_share);
        double share = *rec.governance[0].attacker_share;
        INFO("epoch " << rec.epoch);
        CHECK(share > previous);
        previous = share;
    }
}

TEST_CASE("unlock cliff releases the accrued tranche at the cliff epoch") {
    auto report = run_scenario(preset("unlock_cliff", fixture("currynomics.tedm.json")));
    const auto& before = report.epochs[23];  // epoch 24
    const auto& at = report.epochs[24];      // epoch 25
    CHECK(before.supply.vesting_locked == 10 * 100000);
    // 25 of 50 epochs accrued for each of ten grants
    CHECK(at.supply.vesting_locked == 10 * 50000);
    CHECK(at.supply.circulating - before.supply.circulating == 10 * 50000);
    bool cliff_event = false;
    for (const auto& e : at.events) cliff_event |= e.kind == "vesting_cliff";
    CHECK(cliff_event);
    CHECK(report.epochs[74].supply.vesting_locked == 0);
    for (const auto& rec : report.epochs)
        CHECK(rec.supply.total_outstanding() == report.epochs.front().supply.total_outstanding());
}

TEST_CASE("sell-off cascade lowers the price and triggers threshold sellers") {
    auto report = run_scenario(preset("sell_off_cascade", fixture("uniswap.tedm.json")));
    CHECK(report.epochs[8].price == 1.0);
    CHECK(report.epochs[9].price < 1.0);
    CHECK(report.summary.max_drawdown > 0.1);
    std::size_t threshold_events = 0;
    for (const auto& rec : report.epochs)
        for (const auto& e : rec.events) threshold_events += e.kind == "threshold_sell";
    CHECK(threshold_events >= 2);
    for (const auto& rec : report.epochs) CHECK(rec.price > 0);
}

TEST_CASE("supply flows respect the cap and the market pool") {
    auto s = small();
    s.spec = fixture("curve.tedm.json");
    s.flows = {{2, Quantity(1000), 0, 0}, {3, 0, Quantity(300), Quantity(200)}};
    auto report = run_scenario(s);
    CHECK(report.epochs[1].market_pool == 1000);
    CHECK(report.epochs[2].market_pool == 500);
    CHECK(report.epochs[2].supply.cumulative_burned == 500);

    s.flows = {{2, 0, Quantity(1), 0}};
    try {
        run_scenario(s);
        FAIL("expected ConstraintViolation");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConstraintViolation);
        CHECK(e.epoch() == 2);
    }

    // a capped token truncates mints beyond the cap and logs it
    auto capped = small();
    capped.spec = fixture("currynomics.tedm.json");
    capped.token = "DAO";
    capped.flows = {{1, Quantity(200'000'000), 0, 0}};
    auto r = run_scenario(capped);
    CHECK(r.epochs[0].supply.total_outstanding() == 100'000'000);
    CHECK(r.epochs[0].events.at(0).kind == "mint_truncated");
}

TEST_CASE("scenario checks") {
    auto s = small();
    s.epochs = 0;
    CHECK(code_of([&] { run_scenario(s); }) == ErrorCode::InvalidArgument);
    s = small();
    s.shocks = {{30, ShockKind::sell_off, Quantity(1, 2), ""}};
    CHECK(code_of([&] { run_scenario(s); }) == ErrorCode::InvalidArgument);
    s = small();
    s.shocks = {{3, ShockKind::whale_accumulation, Quantity(1, 2), "nobody"}};
    CHECK(code_of([&] { run_scenario(s); }) == ErrorCode::UnknownCluster);
    s = small();
    s.token = "NOPE";
    CHECK(code_of([&] { run_scenario(s); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { preset("meltdown", fixture("uniswap.tedm.json")); }) == ErrorCode::UnknownPreset);
}

TEST_CASE("scenario documents") {
    auto s = parse_scenario_text(csv::read_file(TEDM_SOURCE_DIR "/data/scenarios/uniswap_whale.scenario.json"),
                                 TEDM_SOURCE_DIR "/data/scenarios");
    CHECK(s.spec.name == "Uniswap");
    auto report = run_scenario(s);
    CHECK(report.summary.capture);
    CHECK(report.summary.first_capture_epoch == 30);

    json doc = {{"spec", json::parse(spec::normalize_and_serialize(fixture("uniswap.tedm.json")))},
                {"epochs", 3},
                {"agents", {{{"name", "a"}, {"population", 3}, {"balance", {{"uniform", {1, 2}}}}, {"behavior", "voter"}}}}};
    CHECK(parse_scenario(doc).agents[0].behavior.kind == BehaviorKind::governance_participant);

    json unknown = doc;
    unknown["agents"][0]["colour"] = "red";
    try {
        parse_scenario(unknown);
        FAIL("expected SchemaError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SchemaError);
        CHECK(e.path() == "/agents/0/colour");
    }
    json bad_shock = doc;
    bad_shock["shocks"] = {{{"epoch", 1}, {"kind", "sel_off"}}};
    CHECK(code_of([&] { parse_scenario(bad_shock); }) == ErrorCode::UnknownEnumValue);
    json missing_spec = doc;
    missing_spec["spec"] = "does-not-exist.json";
    CHECK(code_of([&] { parse_scenario(missing_spec, "/tmp"); }) == ErrorCode::IoError);
}

TEST_CASE("streaming callback sees every epoch in order") {
    std::vector<Epoch> seen;
    auto report = run_scenario(small(), [&](const EpochRecord& r) { seen.push_back(r.epoch); });
    REQUIRE(seen.size() == 20);
    for (std::size_t i = 0; i < seen.size(); ++i) CHECK(seen[i] == static_cast<Epoch>(i + 1));
    auto summary = report_summary(report);
    CHECK(summary["paths"]["gini"].size() == 20);
    CHECK(summary["epochs"] == 20);
}

TEST_CASE("each preset runs 100 epochs with 1000 agents in under 5 s") {
    for (auto name : kPresetNames) {
        auto spec = std::string(name) == "sybil" ? fixture("quadratic_grants.tedm.json") : fixture("currynomics.tedm.json");
        auto start = std::chrono::steady_clock::now();
        auto report = run_scenario(preset(name, spec));
        double elapsed = seconds_since(start);
        INFO(name << " took " << elapsed << " s");
        CHECK(report.epochs.size() == 100);
        CHECK(report.epochs.front().balances.size() >= 1000);
        CHECK(elapsed < 5.0);
    }
}
