// Acceptance runner: one PASS/FAIL/SKIP line per headline criterion.
// Exits 1 if any criterion fails; skips do not fail the run.

#include "support/flows.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"

#include "tedm/concentration.hpp"
#include "tedm/csv.hpp"
#include "tedm/economy_spec.hpp"
#include "tedm/governance.hpp"
#include "tedm/simulator.hpp"
#include "tedm/snapshot.hpp"
#include "tedm/supply.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

using namespace tedm;
using nlohmann::json;

namespace {

enum class Verdict { pass, fail, skip };

struct Outcome {
    Verdict verdict;
    std::string detail;
};

/// Accumulates the first few failure messages of a criterion.
struct Checks {
    std::vector<std::string> failures;
    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
    Outcome outcome(const std::string& pass_detail) const {
        if (failures.empty()) return {Verdict::pass, pass_detail};
        std::string joined;
        for (std::size_t i = 0; i < failures.size() && i < 3; ++i) joined += (i ? "; " : "") + failures[i];
        if (failures.size() > 3) joined += "; +" + std::to_string(failures.size() - 3) + " more";
        return {Verdict::fail, joined};
    }
};

const std::string kRoot = TEDM_SOURCE_DIR;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v, int places = 6) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(places);
    out << v;
    return out.str();
}

spec::EconomySpec fixture(const std::string& name) {
    return spec::parse_spec(csv::read_file(kRoot + "/data/fixtures/" + name)).spec;
}

metrics::HolderDistribution holders_csv(const std::string& path) {
    return snapshot::to_distribution(snapshot::parse_holder_csv(csv::read_file(path)));
}

Outcome oracle_equivalence() {
    gen::Gen g(0xacce0001);
    Checks c;
    auto start = std::chrono::steady_clock::now();
    int exhaustive = 0;
    for (int i = 0; i < 1000; ++i) {
        auto w = g.distribution(64);
        auto d = metrics::HolderDistribution::from_weights(w);
        double expected = to_double(oracle::gini_double_sum(w));
        double got = metrics::gini(d);
        c.expect(std::abs(got - expected) <= 1e-12, "case " + std::to_string(i) + ": gini " + fmt(got, 15) +
                                                        " vs " + fmt(expected, 15));
        std::size_t nak = metrics::nakamoto(d);
        c.expect(nak == oracle::nakamoto_by_size(w), "case " + std::to_string(i) + ": nakamoto vs coalition search");
        if (w.size() <= 20) {
            ++exhaustive;
            c.expect(nak == oracle::nakamoto_subsets(w), "case " + std::to_string(i) + ": nakamoto vs subsets");
        }
    }
    double elapsed = seconds_since(start);
    c.expect(elapsed < 10.0, "runtime " + fmt(elapsed, 2) + " s");
    return c.outcome("1000 distributions, " + std::to_string(exhaustive) + " also by subset enumeration, " +
                     fmt(elapsed, 2) + " s");
}

Outcome reference_values() {
    Checks c;
    // the synthetic fixture's values were computed independently with exact fractions
    auto synthetic = holders_csv(kRoot + "/data/fixtures/curve_vepower_synthetic.csv");
    auto weights = synthetic.weights();
    c.expect(metrics::gini_exact(synthetic) == parse_quantity("82786894015927/129970221075250"),
             "synthetic gini differs from the frozen fraction");
    c.expect(metrics::gini_exact(synthetic) == oracle::gini_double_sum(weights), "synthetic gini vs double sum");
    c.expect(metrics::nakamoto(synthetic) == 39, "synthetic nakamoto " + std::to_string(metrics::nakamoto(synthetic)));
    c.expect(oracle::nakamoto_by_size(weights) == 39, "synthetic nakamoto oracle");
    if (!c.failures.empty()) return c.outcome("");

    const std::string upstream = kRoot + "/data/fixtures/curve_vepower_snapshot.csv";
    if (!std::filesystem::exists(upstream))
        return {Verdict::skip,
                "upstream Curve voting-power snapshot not bundled (fetch needs network, see README); "
                "synthetic fixture oracle passed: gini " + fmt(metrics::gini(synthetic)) + ", nakamoto 39"};

    auto d = holders_csv(upstream);
    double g = metrics::gini(d);
    std::size_t n = metrics::nakamoto(d);
    c.expect(std::abs(g - 0.8402) <= 0.005, "gini " + fmt(g, 4) + " outside 0.8402 +/- 0.005");
    c.expect(n == 23, "nakamoto " + std::to_string(n) + " != 23");
    return c.outcome("gini " + fmt(g, 4) + ", nakamoto " + std::to_string(n) + " over " +
                     std::to_string(d.size()) + " holders");
}

Outcome gini_bounds() {
    Checks c;
    for (int n = 2; n <= 50; ++n) {
        std::vector<Quantity> w(static_cast<std::size_t>(n), Quantity(0));
        w[0] = 1000;
        auto got = metrics::gini_exact(metrics::HolderDistribution::from_weights(w));
        c.expect(got == Quantity(n - 1, n), "one holder of " + std::to_string(n) + ": " + to_decimal_string(got));
        std::vector<Quantity> uniform(static_cast<std::size_t>(n), Quantity(7, 3));
        c.expect(metrics::gini_exact(metrics::HolderDistribution::from_weights(uniform)) == 0,
                 "uniform over " + std::to_string(n));
    }
    return c.outcome("(n-1)/n exact for n = 2..50, uniform 0");
}

Outcome supply_safety() {
    using namespace supply;
    Checks c;
    gen::Gen g(0xacce0004);
    const Quantity cap(1'000'000);
    auto capped = SupplyPolicy::capped(cap);
    SupplyState s;
    s.circulating = 400'000;
    s.vesting_locked = 200'000;
    s.cumulative_minted = 600'000;
    SupplyState start = s;
    int truncations = 0;
    for (int i = 0; i < 100'000 && c.failures.empty(); ++i) {
        auto step = step_supply(s, gen::random_flows(g, s), capped);
        truncations += step.was_truncated();
        s = step.state;
        c.expect(s.circulating + s.staked + s.vesting_locked <= cap, "cap exceeded at step " + std::to_string(i));
    }
    c.expect(truncations > 0, "capped run never reached the cap");

    s = start;
    auto uncapped = SupplyPolicy::uncapped();
    for (int i = 0; i < 100'000 && c.failures.empty(); ++i) {
        auto f = gen::random_flows(g, s);
        auto step = step_supply(s, f, uncapped);
        c.expect(!step.was_truncated(), "uncapped truncation at step " + std::to_string(i));
        c.expect(step.state.total_outstanding() == s.total_outstanding() + f.minted - f.burned - f.buyback,
                 "conservation broken at step " + std::to_string(i));
        s = step.state;
    }
    c.expect(s.total_outstanding() == s.cumulative_minted - s.cumulative_burned, "cumulative identity");
    return c.outcome("1e5 capped steps (" + std::to_string(truncations) +
                     " truncated mints), 1e5 uncapped steps conserve exactly");
}

Outcome voting_properties() {
    using namespace governance;
    Checks c;
    gen::Gen g(0xacce0005);
    auto mech = [](Family f) {
        VotingMechanism m;
        m.family = f;
        return m;
    };
    Proposal p;
    p.id = "p";

    // (a) 1t1v under splitting
    for (int i = 0; i < 200; ++i) {
        std::vector<Voter> voters;
        std::vector<Choice> choices;
        for (long long v = 0, n = g.between(1, 30); v < n; ++v) {
            Voter voter;
            voter.id = "v" + std::to_string(v);
            voter.balance = g.decimal(100000, 3);
            voters.push_back(voter);
            choices.push_back(static_cast<Choice>(g.between(0, 2)));
        }
        auto ballots_for = [&](const std::vector<Voter>& vs) {
            std::vector<Ballot> out;
            for (const auto& v : vs) {
                auto origin = std::stoul(v.id.substr(1, v.id.find('#') - 1));
                out.push_back({v.id, choices[origin], std::nullopt});
            }
            return out;
        };
        const std::string target = voters[static_cast<std::size_t>(g.between(0, static_cast<long long>(voters.size()) - 1))].id;
        const int k = static_cast<int>(g.between(1, 64));
        auto before = tally(p, voters, ballots_for(voters), mech(Family::one_token_one_vote));
        auto split = sybil_split(voters, target, k);
        auto after = tally(p, split, ballots_for(split), mech(Family::one_token_one_vote));
        c.expect(before.yes == after.yes && before.no == after.no && before.passed == after.passed,
                 "(a) 1t1v tally changed, case " + std::to_string(i) + " k=" + std::to_string(k));
    }

    // (b) quadratic totals under splitting
    for (int i = 0; i < 100; ++i) {
        Voter whale;
        whale.id = "w";
        whale.credits = g.between(1, 1'000'000);
        std::vector<Voter> one = {whale};
        Quantity previous = voting_power(whale, mech(Family::quadratic));
        for (int k = 2; k <= 40; ++k) {
            Quantity total = 0;
            for (const auto& v : sybil_split(one, "w", k)) total += voting_power(v, mech(Family::quadratic));
            c.expect(total > previous, "(b) quadratic total not increasing at k=" + std::to_string(k));
            previous = total;
        }
    }

    // (c) escrow linearity
    for (int i = 0; i < 200; ++i) {
        Voter v;
        v.id = "v";
        v.balance = g.decimal(1'000'000, 6);
        v.lock_max = 2 * g.between(1, 104);
        v.lock_remaining = v.lock_max;
        bool ok = power_ve(v) == v.balance;
        v.lock_remaining = 0;
        ok = ok && power_ve(v) == 0;
        v.lock_remaining = v.lock_max / 2;
        ok = ok && power_ve(v) == v.balance / 2;
        c.expect(ok, "(c) escrow power not linear, case " + std::to_string(i));
    }

    // (d) conviction growth and decay
    const Quantity alpha(9, 10);
    Quantity y = 0;
    for (int t = 0; t < 50; ++t) y = conviction_update(y, 10, alpha);
    double grown = to_double(y);
    c.expect(std::abs(grown - 100.0) <= 1.0, "(d) conviction after 50 epochs " + fmt(grown, 4));
    for (int t = 0; t < 50; ++t) y = conviction_update(y, 0, alpha);
    double decayed = to_double(y);
    c.expect(decayed < 1.0, "(d) conviction after 50 idle epochs " + fmt(decayed, 4));

    return c.outcome("(a) 200 splits exact, (b) k=2..40 increasing, (c) linear, (d) " + fmt(grown, 3) + " then " +
                     fmt(decayed, 3));
}

Outcome recommender() {
    using namespace governance;
    Checks c;
    auto rec = recommend_mechanism({{Property::accountability, 2}, {Property::security, 1}}, {Property::simplicity});
    c.expect(!rec.ranked.empty() && rec.ranked.front() == Family::conviction, "conviction is not ranked first");
    for (int code = 0; code < 729; ++code) {
        Requirements req;
        int rest = code;
        for (Property p : kProperties) {
            if (rest % 3) req[p] = rest % 3;
            rest /= 3;
        }
        bool strict = (req.count(Property::accountability) && req[Property::accountability] >= 2) ||
                      req.count(Property::security);
        if (!strict) continue;
        auto r = recommend_mechanism(req, {Property::simplicity});
        c.expect(std::find(r.ranked.begin(), r.ranked.end(), Family::one_token_one_vote) == r.ranked.end(),
                 "1t1v admitted for requirement code " + std::to_string(code));
    }
    auto none = recommend_mechanism({{Property::security, 2}}, {});
    c.expect(none.ranked.empty() && none.no_candidate, "security 2 returned candidates");
    std::string order;
    for (Family f : rec.ranked) order += (order.empty() ? "" : " > ") + std::string(kFamilyNames.name(f));
    return c.outcome(order + "; 1t1v never admitted under strict requirements; security 2 empty");
}

Outcome validator() {
    using namespace spec;
    Checks c;
    auto currynomics = validate_spec(fixture("currynomics.tedm.json"));
    c.expect(currynomics.count(Severity::error) == 0, "Currynomics has errors");

    json base = json::parse(csv::read_file(kRoot + "/data/fixtures/currynomics.tedm.json"), nullptr, true, true);
    auto errors_of = [](const json& doc) {
        std::vector<std::string> rules;
        for (const auto& f : validate_spec(parse_spec_json(doc).spec).findings)
            if (f.severity == Severity::error) rules.push_back(f.rule);
        return rules;
    };
    using Rules = std::vector<std::string>;
    {
        json d = base;
        auto& share = d["tokenomics"]["tokens"][0]["distribution"][0]["share"];
        share = exact_string(parse_quantity(share.get<std::string>()) + Quantity(1, 100));
        c.expect(errors_of(d) == Rules{"V1"}, "share-sum violation");
    }
    {
        json d = base;
        // the capped governance token: 40M initial plus 60 epochs at 2M overshoots its 100M cap
        for (auto& token : d["tokenomics"]["tokens"])
            if (token.contains("mint_plan")) token["mint_plan"]["per_epoch"] = "2000000";
        c.expect(errors_of(d) == Rules{"V2"}, "cap violation");
    }
    {
        json d = base;
        d["governance"]["chosen_mechanism"] = {{"family", "one_token_one_vote"}};
        c.expect(errors_of(d) == Rules{"V3"}, "mechanism-property violation");
    }
    const char* names[] = {"currynomics.tedm.json", "uniswap.tedm.json", "curve.tedm.json", "quadratic_grants.tedm.json"};
    for (const char* name : names) {
        std::string once = normalize_and_serialize(fixture(name));
        c.expect(normalize_and_serialize(parse_spec(once).spec) == once, std::string("round-trip of ") + name);
    }
    return c.outcome("Currynomics 0 errors; V1, V2, V3 isolated; 4 fixtures byte-stable");
}

Outcome comparison() {
    Checks c;
    auto report = spec::compare_specs(fixture("uniswap.tedm.json"), fixture("curve.tedm.json"));
    std::string text = spec::render_text(report);
    c.expect(text == csv::read_file(kRoot + "/tests/golden/compare_uniswap_curve.txt"), "golden text differs");
    for (const char* phrase : {"1-Token-1-Vote", "time-weighted vote-escrow", "2% annual inflation reported",
                               "capped supply (cap \xE2\x89\x88 3.03B CRV)"})
        c.expect(text.find(phrase) != std::string::npos, std::string("missing '") + phrase + "'");
    c.expect(report.rows.size() == 11, "expected 11 rows");
    return c.outcome("11 rows match the golden text");
}

Outcome simulator() {
    using namespace sim;
    Checks c;
    auto uniswap = fixture("uniswap.tedm.json");
    auto with_family = [](spec::EconomySpec s, governance::Family f) {
        s.governance.chosen_mechanism = {};
        s.governance.chosen_mechanism.family = f;
        return s;
    };

    auto capture = preset("capture", uniswap);
    c.expect(to_json(run_scenario(capture)).dump() == to_json(run_scenario(capture)).dump(), "capture not deterministic");
    auto captured = run_scenario(capture);
    c.expect(captured.summary.capture && captured.summary.min_power_nakamoto == 1, "capture flag not set");

    auto onevote = preset("sybil", with_family(uniswap, governance::Family::one_token_one_vote));
    auto baseline = onevote;
    baseline.shocks.clear();
    auto attacked = run_scenario(onevote);
    auto clean = run_scenario(baseline);
    bool unchanged = attacked.epochs.size() == clean.epochs.size();
    for (std::size_t t = 0; unchanged && t < attacked.epochs.size(); ++t) {
        const auto& a = attacked.epochs[t].governance;
        const auto& b = clean.epochs[t].governance;
        unchanged = a.size() == b.size();
        for (std::size_t i = 0; unchanged && i < a.size(); ++i)
            unchanged = a[i].result.yes == b[i].result.yes && a[i].result.no == b[i].result.no;
    }
    c.expect(unchanged, "1t1v tallies moved under sybil splitting");

    auto quadratic = run_scenario(preset("sybil", fixture("quadratic_grants.tedm.json")));
    double previous = -1;
    bool rising = quadratic.mechanism == "quadratic";
    for (const auto& rec : quadratic.epochs) {
        if (rec.governance.empty() || !rec.governance[0].attacker_share) {
            rising = false;
            break;
        }
        rising = rising && *rec.governance[0].attacker_share > previous;
        previous = *rec.governance[0].attacker_share;
    }
    c.expect(rising, "quadratic attacker share not strictly increasing");

    std::string timings;
    for (auto name : {"capture", "sell_off_cascade", "sybil", "unlock_cliff"}) {
        auto scenario = preset(name, std::string(name) == "unlock_cliff" ? fixture("currynomics.tedm.json") : uniswap);
        int agents = 0;
        for (const auto& group : scenario.agents) agents += group.population;
        auto start = std::chrono::steady_clock::now();
        auto report = run_scenario(scenario);
        double elapsed = seconds_since(start);
        c.expect(report.epochs.size() == 100 && agents == 1000,
                 std::string(name) + ": " + std::to_string(report.epochs.size()) + " epochs, " +
                     std::to_string(agents) + " agents");
        c.expect(elapsed < 5.0, std::string(name) + " took " + fmt(elapsed, 2) + " s");
        timings += (timings.empty() ? "" : ", ") + std::string(name) + " " + fmt(elapsed, 2) + " s";
    }
    return c.outcome("deterministic; capture at epoch " +
                     (captured.summary.first_capture_epoch ? std::to_string(*captured.summary.first_capture_epoch)
                                                           : std::string("-")) +
                     "; 1t1v unchanged; quadratic share rising; " + timings);
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"metric-oracle-equivalence", oracle_equivalence},
        {"metric-reference-values", reference_values},
        {"gini-analytic-bounds", gini_bounds},
        {"supply-safety", supply_safety},
        {"voting-mechanism-properties", voting_properties},
        {"matrix-recommender", recommender},
        {"spec-validator", validator},
        {"comparative-instantiation", comparison},
        {"simulator-determinism-diagnostics", simulator},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {Verdict::fail, std::string("threw: ") + e.what()};
        }
        const char* label = o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::fail ? "FAIL" : "SKIP";
        failed += o.verdict == Verdict::fail;
        std::cout << label << "  " << name << ": " << o.detail << std::endl;
    }
    return failed ? 1 : 0;
}
