#include "tedm/simulator.hpp"

#include "tedm/csv.hpp"
#include "tedm/error.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace tedm::sim {

using nlohmann::json;

const EnumNames<BehaviorKind, 3, 3> kBehaviorNames{
    {{{BehaviorKind::hold, "hold"},
      {BehaviorKind::threshold_seller, "threshold_seller"},
      {BehaviorKind::governance_participant, "governance_participant"}}},
    {{{BehaviorKind::hold, "holder"}, {BehaviorKind::threshold_seller, "seller"},
      {BehaviorKind::governance_participant, "voter"}}}};

const EnumNames<ShockKind, 4> kShockNames{{{{ShockKind::sell_off, "sell_off"},
                                            {ShockKind::whale_accumulation, "whale_accumulation"},
                                            {ShockKind::sybil_split, "sybil_split"},
                                            {ShockKind::unlock_event, "unlock_event"}}}};

namespace {

const Quantity kUnit{1, 1'000'000};

[[noreturn]] void invalid(const std::string& path, const std::string& message) {
    throw Error(ErrorCode::InvalidArgument, message, path);
}

bool is_integer(const Quantity& q) { return boost::multiprecision::denominator(q) == 1; }

}  // namespace

void Scenario::check() const {
    if (epochs < 1) invalid("/epochs", "epochs must be at least 1");
    if (agents.empty()) invalid("/agents", "at least one agent group is required");
    if (spec.tokens.empty()) invalid("/spec", "spec declares no tokens");
    if (!token.empty() &&
        std::none_of(spec.tokens.begin(), spec.tokens.end(), [&](const spec::Token& t) { return t.symbol == token; }))
        invalid("/token", "spec has no token '" + token + "'");
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const auto& g = agents[i];
        const std::string p = "/agents/" + std::to_string(i);
        if (g.population < 1) invalid(p + "/population", "population must be at least 1");
        if (g.lock_fraction < 0 || g.lock_fraction > 1) invalid(p + "/lock_fraction", "lock_fraction must lie in [0, 1]");
        if (g.reputation < 0) invalid(p + "/reputation", "reputation must be non-negative");
        const auto& b = g.balance;
        switch (b.kind) {
            case BalanceKind::fixed:
                if (b.value < 0) invalid(p + "/balance", "balance must be non-negative");
                break;
            case BalanceKind::uniform:
                if (b.low < 0 || b.high < b.low) invalid(p + "/balance", "uniform bounds need 0 <= low <= high");
                break;
            case BalanceKind::pareto:
                if (!(b.alpha > 0) || b.scale <= 0) invalid(p + "/balance", "pareto needs alpha > 0 and scale > 0");
                break;
        }
        const auto& beh = g.behavior;
        if (beh.participation < 0 || beh.participation > 1)
            invalid(p + "/behavior/participation", "participation must lie in [0, 1]");
        if (beh.kind == BehaviorKind::threshold_seller &&
            (beh.sell_fraction <= 0 || beh.sell_fraction > 1 || beh.drop <= 0 || beh.drop >= 1))
            invalid(p + "/behavior", "threshold_seller needs sell_fraction in (0, 1] and drop in (0, 1)");
        if (g.vesting) g.vesting->check();
    }
    for (std::size_t i = 0; i < shocks.size(); ++i) {
        const auto& s = shocks[i];
        const std::string p = "/shocks/" + std::to_string(i);
        if (s.epoch < 1 || s.epoch > epochs) invalid(p + "/epoch", "shock epoch outside 1.." + std::to_string(epochs));
        switch (s.kind) {
            case ShockKind::sell_off:
            case ShockKind::whale_accumulation:
            case ShockKind::unlock_event:
                if (s.magnitude < 0 || s.magnitude > 1) invalid(p + "/magnitude", "magnitude must lie in [0, 1]");
                break;
            case ShockKind::sybil_split:
                if (!is_integer(s.magnitude) || s.magnitude < 1)
                    invalid(p + "/magnitude", "sybil_split magnitude is an identity count >= 1");
                break;
        }
        if ((s.kind == ShockKind::whale_accumulation || s.kind == ShockKind::sybil_split) && s.target.empty())
            invalid(p + "/target", "shock needs a target cluster");
    }
    for (std::size_t i = 0; i < flows.size(); ++i) {
        const auto& f = flows[i];
        const std::string p = "/flows/" + std::to_string(i);
        if (f.epoch < 1 || f.epoch > epochs) invalid(p + "/epoch", "flow epoch outside the horizon");
        if (f.minted < 0 || f.burned < 0 || f.buyback < 0) invalid(p, "flows must be non-negative");
    }
    if (governance.every < 0) invalid("/governance/every", "every must be non-negative");
    if (governance.threshold < 0 || governance.threshold >= 1)
        invalid("/governance/threshold", "threshold must lie in [0, 1)");
    if (price_model.linear_impact && !(price_model.reference_price > 0))
        invalid("/price_model/reference_price", "reference price must be positive");
    if (mechanism) mechanism->check();
}

namespace {

struct Agent {
    std::string id;
    std::string cluster;
    std::size_t group = 0;
    Quantity balance;
    Quantity unvested;
    std::optional<supply::VestingSchedule> vesting;
    Behavior behavior;
    bool prefers_yes = false;
    bool sell_armed = true;
    governance::Epoch lock_remaining = 0;
    Quantity reputation;
};

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    /// Uniform in [0, 1) from the top 53 bits; identical on every platform.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

Quantity draw_balance(const BalanceSpec& spec, Rng& rng) {
    switch (spec.kind) {
        case BalanceKind::fixed:
            return spec.value;
        case BalanceKind::uniform:
            return floor_to_unit(spec.low + from_double(rng.uniform()) * (spec.high - spec.low), kUnit);
        case BalanceKind::pareto: {
            double factor = std::pow(1.0 - rng.uniform(), -1.0 / spec.alpha);
            return floor_to_unit(spec.scale * from_double(factor), kUnit);
        }
    }
    return 0;
}

std::string agent_id(const AgentGroup& g, int i) {
    if (g.population == 1) return g.name;
    std::string n = std::to_string(i);
    std::string width = std::to_string(g.population - 1);
    return g.name + "." + std::string(width.size() - std::min(width.size(), n.size()), '0') + n;
}

class Engine {
public:
    Engine(const Scenario& scenario, const std::function<void(const EpochRecord&)>& on_epoch)
        : sc_(scenario), on_epoch_(on_epoch), rng_(scenario.seed) {
        mechanism_ = sc_.mechanism ? *sc_.mechanism : sc_.spec.governance.chosen_mechanism;
        const spec::Token* token = &sc_.spec.tokens.front();
        for (const auto& t : sc_.spec.tokens)
            if (t.symbol == sc_.token) token = &t;
        policy_ = token->supply_policy;
        for (const auto& f : sc_.flows) {
            auto& e = flows_[f.epoch];
            e.minted += f.minted;
            e.burned += f.burned;
            e.buyback += f.buyback;
        }
        price_ = sc_.price_model.reference_price;
        peak_ = price_;
        seed_agents();
    }

    ScenarioReport run() {
        ScenarioReport report;
        report.scenario = sc_.name;
        report.seed = sc_.seed;
        report.mechanism = std::string(governance::kFamilyNames.name(mechanism_.family));
        report.epochs.reserve(static_cast<std::size_t>(sc_.epochs));
        for (Epoch t = 1; t <= sc_.epochs; ++t) {
            try {
                report.epochs.push_back(step(t));
            } catch (const Error& e) {
                throw e.epoch() ? e : e.with_epoch(t);
            }
            const EpochRecord& rec = report.epochs.back();
            summarize(report.summary, rec);
            if (on_epoch_) on_epoch_(rec);
        }
        report.summary.max_drawdown = round_places(max_drawdown_);
        return report;
    }

private:
    void seed_agents() {
        for (std::size_t gi = 0; gi < sc_.agents.size(); ++gi) {
            const auto& g = sc_.agents[gi];
            for (int i = 0; i < g.population; ++i) {
                Agent a;
                a.id = agent_id(g, i);
                a.cluster = g.cluster ? *g.cluster : a.id;
                a.group = gi;
                a.balance = draw_balance(g.balance, rng_);
                a.behavior = g.behavior;
                a.reputation = g.reputation;
                Quantity lock = g.lock_fraction * mechanism_.params.lock_max;
                a.lock_remaining = static_cast<governance::Epoch>(
                    boost::multiprecision::numerator(lock) / boost::multiprecision::denominator(lock));
                if (g.vesting) {
                    a.vesting = g.vesting;
                    a.unvested = g.vesting->total;
                }
                agents_.push_back(std::move(a));
            }
        }
        for (auto& a : agents_)
            a.prefers_yes = (sc_.attacker && a.cluster == *sc_.attacker) ? true : rng_.uniform() < 0.5;

        for (const auto& a : agents_) {
            state_.circulating += a.balance;
            state_.vesting_locked += a.unvested;
            initial_balance_ += a.balance;
        }
        state_.cumulative_minted = state_.circulating + state_.vesting_locked;
        if (policy_.kind == supply::SupplyKind::capped && policy_.s_max && state_.total_outstanding() > *policy_.s_max)
            invalid("/agents", "initial balances exceed the token's supply cap");
        conviction_threshold_ = sc_.governance.conviction_threshold ? *sc_.governance.conviction_threshold
                                                                    : Quantity(initial_balance_ / 4);
    }

    void log(Epoch t, std::string kind, std::string detail) { events_.push_back({t, std::move(kind), std::move(detail)}); }

    void sell(Agent& a, const Quantity& fraction) {
        Quantity amount = floor_to_unit(a.balance * fraction, kUnit);
        a.balance -= amount;
        market_pool_ += amount;
        sold_ += amount;
    }

    void actions(Epoch t) {
        if (!sc_.price_model.linear_impact) return;
        std::size_t sellers = 0;
        for (auto& a : agents_) {
            if (a.behavior.kind != BehaviorKind::threshold_seller) continue;
            double trigger = sc_.price_model.reference_price * (1.0 - to_double(a.behavior.drop));
            if (price_ < trigger) {
                if (a.sell_armed && a.balance > 0) {
                    sell(a, a.behavior.sell_fraction);
                    ++sellers;
                }
                a.sell_armed = false;
            } else {
                a.sell_armed = true;
            }
        }
        if (sellers > 0) log(t, "threshold_sell", std::to_string(sellers) + " agents sold");
    }

    void supply_step(Epoch t) {
        supply::EpochFlows flows;
        if (auto it = flows_.find(t); it != flows_.end()) {
            flows.minted = it->second.minted;
            flows.burned = it->second.burned;
            flows.buyback = it->second.buyback;
        }
        bool first_release = false;
        for (auto& a : agents_) {
            if (!a.vesting || a.unvested == 0) continue;
            Quantity due = supply::vesting_released(*a.vesting, t) - supply::vesting_released(*a.vesting, t - 1);
            Quantity release = std::min(due, a.unvested);
            if (release <= 0) continue;
            if (supply::vesting_released(*a.vesting, t - 1) == 0) first_release = true;
            a.unvested -= release;
            a.balance += release;
            flows.vest_release += release;
        }
        supply::SupplyStep step = supply::step_supply(state_, flows, policy_);
        state_ = step.state;
        market_pool_ += flows.minted - step.truncated - flows.burned - flows.buyback;
        if (market_pool_ < 0)
            throw Error(ErrorCode::ConstraintViolation, "burn and buyback exceed the tokens held by the market");
        if (step.was_truncated()) log(t, "mint_truncated", "dropped " + spec::exact_string(step.truncated));
        if (first_release) log(t, "vesting_cliff", "released " + spec::exact_string(flows.vest_release));
    }

    std::vector<std::size_t> cluster_members(const std::string& cluster) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < agents_.size(); ++i)
            if (agents_[i].cluster == cluster) out.push_back(i);
        if (out.empty()) throw Error(ErrorCode::UnknownCluster, "no agents in cluster '" + cluster + "'");
        return out;
    }

    void shock(Epoch t, const Shock& s) {
        switch (s.kind) {
            case ShockKind::sell_off: {
                Quantity before = sold_;
                for (auto& a : agents_) sell(a, s.magnitude);
                log(t, "sell_off", "sold " + spec::exact_string(sold_ - before));
                break;
            }
            case ShockKind::whale_accumulation: {
                auto members = cluster_members(s.target);
                Quantity acquired;
                for (auto& a : agents_) {
                    if (a.cluster == s.target) continue;
                    Quantity amount = floor_to_unit(a.balance * s.magnitude, kUnit);
                    a.balance -= amount;
                    acquired += amount;
                }
                agents_[members.front()].balance += acquired;
                log(t, "whale_accumulation", s.target + " acquired " + spec::exact_string(acquired));
                break;
            }
            case ShockKind::sybil_split: {
                auto members = cluster_members(s.target);
                int k = static_cast<int>(boost::multiprecision::numerator(s.magnitude).convert_to<long long>());
                Agent base = agents_[members.front()];
                Quantity balance, unvested;
                for (auto i : members) {
                    balance += agents_[i].balance;
                    unvested += agents_[i].unvested;
                }
                std::vector<Agent> replacement;
                for (int i = 0; i < k; ++i) {
                    Agent clone = base;
                    clone.id = i == 0 ? base.id : base.id + "#" + std::to_string(i + 1);
                    clone.balance = balance / k;
                    clone.unvested = unvested / k;
                    if (clone.vesting) clone.vesting->total /= k;
                    replacement.push_back(std::move(clone));
                }
                std::vector<Agent> next;
                next.reserve(agents_.size() - members.size() + replacement.size());
                for (std::size_t i = 0; i < agents_.size(); ++i) {
                    if (i == members.front())
                        for (auto& r : replacement) next.push_back(std::move(r));
                    else if (agents_[i].cluster != s.target)
                        next.push_back(std::move(agents_[i]));
                }
                agents_ = std::move(next);
                log(t, "sybil_split", s.target + " split into " + std::to_string(k) + " identities");
                break;
            }
            case ShockKind::unlock_event: {
                Quantity released;
                for (auto& a : agents_) {
                    Quantity amount = floor_to_unit(a.unvested * s.magnitude, kUnit);
                    a.unvested -= amount;
                    a.balance += amount;
                    released += amount;
                }
                state_ = supply::release_vesting(state_, released);
                log(t, "unlock_event", "released " + spec::exact_string(released));
                break;
            }
        }
    }

    void update_price() {
        if (!sc_.price_model.linear_impact) return;
        Quantity outstanding = state_.total_outstanding();
        double net = outstanding > 0 ? -to_double(sold_ / outstanding) : 0.0;
        double floor = sc_.price_model.reference_price * 1e-9;
        price_ = std::max(price_ * (1.0 + sc_.price_model.coefficient * net), floor);
        peak_ = std::max(peak_, price_);
        max_drawdown_ = std::max(max_drawdown_, (peak_ - price_) / peak_);
    }

    governance::Voter voter_of(const Agent& a) const {
        governance::Voter v;
        v.id = a.id;
        v.balance = a.balance;
        v.lock_remaining = a.lock_remaining;
        v.lock_max = mechanism_.params.lock_max;
        v.reputation = a.reputation;
        v.credits = a.balance;
        v.identity_cluster = a.cluster;
        return v;
    }

    void governance_round(Epoch t, std::vector<governance::Voter>& voters, EpochRecord& rec) {
        if (sc_.governance.every == 0 || t % sc_.governance.every != 0) return;
        std::vector<governance::Ballot> ballots;
        Quantity attacker_weight;
        for (std::size_t i = 0; i < agents_.size(); ++i) {
            const Agent& a = agents_[i];
            bool attacker = sc_.attacker && a.cluster == *sc_.attacker;
            double p = a.behavior.participation;
            bool votes = attacker || p >= 1.0 || (p > 0.0 && rng_.uniform() < p);
            if (!votes) continue;
            governance::Choice choice = a.prefers_yes ? governance::Choice::yes : governance::Choice::no;
            ballots.push_back({a.id, choice, std::nullopt});
            if (attacker) attacker_weight += governance::voting_power(voters[i], mechanism_);
        }

        governance::Proposal proposal;
        proposal.threshold = sc_.governance.threshold;
        Quantity prior;
        if (mechanism_.family == governance::Family::conviction) {
            proposal.id = "conviction-" + std::to_string(conviction_round_);
            proposal.conviction_threshold = conviction_threshold_;
            prior = conviction_;
        } else {
            proposal.id = "p" + std::to_string(t);
        }
        governance::TallyResult result = governance::tally(proposal, voters, ballots, mechanism_, prior);
        if (result.conviction) {
            conviction_ = *result.conviction;
            if (result.passed) {
                conviction_ = 0;
                ++conviction_round_;
            }
        }
        GovernanceOutcome outcome{proposal.id, result, std::nullopt};
        Quantity cast = result.yes + result.no;
        if (sc_.attacker && cast > 0) outcome.attacker_share = to_double(attacker_weight / cast);
        rec.governance.push_back(std::move(outcome));
    }

    EpochRecord step(Epoch t) {
        sold_ = 0;
        events_.clear();

        actions(t);
        supply_step(t);
        for (const auto& s : sc_.shocks)
            if (s.epoch == t) shock(t, s);
        update_price();

        std::vector<governance::Voter> voters;
        voters.reserve(agents_.size());
        for (const auto& a : agents_) voters.push_back(voter_of(a));

        EpochRecord rec;
        rec.epoch = t;
        governance_round(t, voters, rec);

        rec.supply = state_;
        rec.market_pool = market_pool_;
        rec.price = price_;
        std::vector<metrics::Holding> balances;
        balances.reserve(agents_.size());
        for (const auto& a : agents_) balances.push_back({a.id, a.balance});
        rec.balances = metrics::HolderDistribution(std::move(balances));
        rec.balance_metrics = metrics::concentration_report(rec.balances);

        std::map<std::string, Quantity> per_cluster;
        std::vector<std::string> order;
        for (std::size_t i = 0; i < agents_.size(); ++i) {
            auto [it, inserted] = per_cluster.try_emplace(agents_[i].cluster);
            if (inserted) order.push_back(agents_[i].cluster);
            it->second += governance::voting_power(voters[i], mechanism_);
        }
        for (const auto& c : order) rec.voting_power.add(c, per_cluster[c]);
        if (rec.voting_power.total() > 0) {
            rec.power_metrics = metrics::concentration_report(rec.voting_power);
            rec.capture = rec.power_metrics->nakamoto == 1;
        }
        rec.events = events_;
        return rec;
    }

    void summarize(Summary& s, const EpochRecord& rec) {
        if (rec.power_metrics) {
            std::size_t n = rec.power_metrics->nakamoto;
            s.min_power_nakamoto = s.min_power_nakamoto ? std::min(*s.min_power_nakamoto, n) : n;
            s.max_power_nakamoto = s.max_power_nakamoto ? std::max(*s.max_power_nakamoto, n) : n;
        }
        if (rec.capture && !s.capture) {
            s.capture = true;
            s.first_capture_epoch = rec.epoch;
        }
        s.proposals += rec.governance.size();
        for (const auto& g : rec.governance) s.passed += g.result.passed ? 1 : 0;
        s.events += rec.events.size();
    }

    const Scenario& sc_;
    const std::function<void(const EpochRecord&)>& on_epoch_;
    Rng rng_;
    governance::VotingMechanism mechanism_;
    supply::SupplyPolicy policy_;
    std::map<Epoch, FlowEntry> flows_;
    std::vector<Agent> agents_;
    supply::SupplyState state_;
    Quantity market_pool_;
    Quantity initial_balance_;
    Quantity sold_;
    double price_ = 1.0;
    double peak_ = 1.0;
    double max_drawdown_ = 0.0;
    Quantity conviction_;
    Quantity conviction_threshold_;
    int conviction_round_ = 1;
    std::vector<Event> events_;
};

}  // namespace

ScenarioReport run_scenario(const Scenario& scenario, const std::function<void(const EpochRecord&)>& on_epoch) {
    scenario.check();
    return Engine(scenario, on_epoch).run();
}

// ---------------------------------------------------------------------------
// Presets

namespace {

AgentGroup group(std::string name, spec::StakeholderCategory category, int population, BalanceSpec balance,
                 Behavior behavior) {
    AgentGroup g;
    g.name = std::move(name);
    g.category = category;
    g.population = population;
    g.balance = std::move(balance);
    g.behavior = std::move(behavior);
    return g;
}

BalanceSpec fixed(Quantity v) {
    BalanceSpec b;
    b.kind = BalanceKind::fixed;
    b.value = std::move(v);
    return b;
}

BalanceSpec uniform(Quantity low, Quantity high) {
    BalanceSpec b;
    b.kind = BalanceKind::uniform;
    b.low = std::move(low);
    b.high = std::move(high);
    return b;
}

BalanceSpec pareto(double alpha, Quantity scale) {
    BalanceSpec b;
    b.kind = BalanceKind::pareto;
    b.alpha = alpha;
    b.scale = std::move(scale);
    return b;
}

Behavior voter(double p) { return {BehaviorKind::governance_participant, 0, 0, p}; }

}  // namespace

std::string_view preset_description(std::string_view name) {
    if (name == "capture")
        return "one whale starts near 6% of balances and buys 60% of everyone else's holdings at epoch 50";
    if (name == "sell_off_cascade")
        return "threshold sellers with staggered drop triggers react to a 10% sell-off at epoch 10 under linear price impact";
    if (name == "sybil")
        return "an attacker cluster re-splits into t identities at every epoch t >= 2 while everyone votes";
    if (name == "unlock_cliff")
        return "ten team members hold 100000-token grants that vest over 50 epochs after a 25-epoch cliff";
    throw Error(ErrorCode::UnknownPreset, "unknown preset '" + std::string(name) + "'");
}

Scenario preset(std::string_view name, const spec::EconomySpec& spec) {
    preset_description(name);
    using C = spec::StakeholderCategory;
    Scenario s;
    s.name = std::string(name);
    s.spec = spec;
    s.epochs = 100;
    s.seed = 7;

    if (name == "capture") {
        auto whale = group("whale", C::investors, 1, fixed(100000), voter(1.0));
        whale.cluster = "whale";
        s.agents = {whale, group("holders", C::users, 999, pareto(1.5, 500), voter(0.3))};
        s.shocks = {{50, ShockKind::whale_accumulation, Quantity(3, 5), "whale"}};
        s.attacker = "whale";
    } else if (name == "sell_off_cascade") {
        int i = 0;
        for (const char* drop : {"0.02", "0.05", "0.1", "0.2"}) {
            Behavior b{BehaviorKind::threshold_seller, Quantity(1, 4), parse_quantity(drop), 0.2};
            s.agents.push_back(group("sellers" + std::to_string(++i), C::users, 250, uniform(100, 1000), b));
        }
        s.shocks = {{10, ShockKind::sell_off, Quantity(1, 10), ""}};
        s.price_model = {true, 2.0, 1.0};
    } else if (name == "sybil") {
        auto attacker = group("attacker", C::users, 1, fixed(50000), voter(1.0));
        attacker.cluster = "attacker";
        s.agents = {attacker, group("holders", C::users, 999, uniform(100, 1000), voter(1.0))};
        for (Epoch t = 2; t <= s.epochs; ++t) s.shocks.push_back({t, ShockKind::sybil_split, Quantity(t), "attacker"});
        s.attacker = "attacker";
    } else {
        auto team = group("team", C::developers, 10, fixed(1000), voter(0.2));
        team.vesting = supply::VestingSchedule{100000, 0, 25, 50};
        s.agents = {team, group("community", C::community, 990, uniform(100, 1000), voter(0.2))};
    }
    return s;
}

// ---------------------------------------------------------------------------
// Scenario documents

namespace {

class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) schema(path_, "expected an object");
    }

    ~Reader() noexcept(false) {
        if (std::uncaught_exceptions() > 0) return;
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!used_.count(it.key())) schema(path_ + "/" + it.key(), "unknown field '" + it.key() + "'");
    }

    [[noreturn]] static void schema(const std::string& path, const std::string& message) {
        throw Error(ErrorCode::SchemaError, message, path);
    }

    std::string at(const std::string& key) const { return path_ + "/" + key; }

    const json* get(const std::string& key) {
        used_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() || it->is_null() ? nullptr : &*it;
    }

    const json& need(const std::string& key) {
        const json* j = get(key);
        if (!j) schema(at(key), "missing required field '" + key + "'");
        return *j;
    }

    std::optional<Quantity> quantity(const std::string& key) {
        const json* j = get(key);
        if (!j) return std::nullopt;
        return to_quantity(*j, at(key));
    }

    static Quantity to_quantity(const json& j, const std::string& path) {
        try {
            if (j.is_string()) return parse_quantity(j.get<std::string>());
            if (j.is_number()) return parse_quantity(j.dump());
        } catch (const Error& e) {
            schema(path, e.what());
        }
        schema(path, "expected a number or numeric string");
    }

    std::optional<std::int64_t> integer(const std::string& key) {
        const json* j = get(key);
        if (!j) return std::nullopt;
        if (!j->is_number_integer()) schema(at(key), "expected an integer");
        return j->get<std::int64_t>();
    }

    std::optional<double> real(const std::string& key) {
        const json* j = get(key);
        if (!j) return std::nullopt;
        if (!j->is_number()) schema(at(key), "expected a number");
        return j->get<double>();
    }

    std::optional<std::string> string(const std::string& key) {
        const json* j = get(key);
        if (!j) return std::nullopt;
        if (!j->is_string()) schema(at(key), "expected a string");
        return j->get<std::string>();
    }

    const json& array(const std::string& key) {
        static const json empty = json::array();
        const json* j = get(key);
        if (!j) return empty;
        if (!j->is_array()) schema(at(key), "expected an array");
        return *j;
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

BalanceSpec read_balance(const json& j, const std::string& path) {
    if (j.is_number() || j.is_string()) return fixed(Reader::to_quantity(j, path));
    Reader r(j, path);
    if (auto v = r.quantity("fixed")) return fixed(*v);
    if (const json* u = r.get("uniform")) {
        if (!u->is_array() || u->size() != 2) Reader::schema(r.at("uniform"), "expected [low, high]");
        return uniform(Reader::to_quantity((*u)[0], r.at("uniform") + "/0"),
                       Reader::to_quantity((*u)[1], r.at("uniform") + "/1"));
    }
    if (const json* p = r.get("pareto")) {
        Reader pr(*p, r.at("pareto"));
        auto alpha = pr.real("alpha");
        auto scale = pr.quantity("scale");
        return pareto(alpha.value_or(1.5), scale.value_or(1));
    }
    Reader::schema(path, "balance needs one of fixed, uniform, pareto");
}

Behavior read_behavior(const json& j, const std::string& path) {
    if (j.is_string()) return {kBehaviorNames.parse(j.get<std::string>(), "behavior", path), 0, 0, 0.0};
    Reader r(j, path);
    Behavior b;
    b.kind = kBehaviorNames.parse(r.string("kind").value_or("hold"), "behavior", r.at("kind"));
    b.sell_fraction = r.quantity("sell_fraction").value_or(0);
    b.drop = r.quantity("drop").value_or(0);
    b.participation = r.real("participation").value_or(b.kind == BehaviorKind::governance_participant ? 1.0 : 0.0);
    return b;
}

supply::VestingSchedule read_vesting(const json& j, const std::string& path) {
    Reader r(j, path);
    supply::VestingSchedule v;
    v.total = r.quantity("total").value_or(0);
    v.start_epoch = r.integer("start_epoch").value_or(0);
    v.cliff_epochs = r.integer("cliff_epochs").value_or(0);
    v.duration_epochs = r.integer("duration_epochs").value_or(1);
    return v;
}

}  // namespace

Scenario parse_scenario(const json& document, const std::string& base_dir) {
    Reader root(document, "");
    Scenario s;
    s.name = root.string("name").value_or("scenario");

    const json& spec_ref = root.need("spec");
    if (spec_ref.is_string()) {
        std::filesystem::path p(spec_ref.get<std::string>());
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        s.spec = spec::parse_spec(csv::read_file(p.string())).spec;
    } else {
        s.spec = spec::parse_spec_json(spec_ref).spec;
    }
    s.token = root.string("token").value_or("");
    if (const json* m = root.get("mechanism")) s.mechanism = spec::parse_mechanism_json(*m, "/mechanism");
    s.epochs = root.integer("epochs").value_or(1);
    if (const json* seed = root.get("seed")) {
        if (!seed->is_number_integer() || (!seed->is_number_unsigned() && seed->get<std::int64_t>() < 0))
            Reader::schema("/seed", "seed must be a non-negative 64-bit integer");
        s.seed = seed->get<std::uint64_t>();
    }

    const json& agents = root.array("agents");
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const std::string p = "/agents/" + std::to_string(i);
        Reader r(agents[i], p);
        AgentGroup g;
        g.name = r.string("name").value_or("");
        if (g.name.empty()) Reader::schema(p + "/name", "agent group needs a name");
        if (auto c = r.string("category")) g.category = spec::kCategoryNames.parse(*c, "stakeholder category", r.at("category"));
        g.population = static_cast<int>(r.integer("population").value_or(1));
        if (const json* b = r.get("balance")) g.balance = read_balance(*b, r.at("balance"));
        if (const json* b = r.get("behavior")) g.behavior = read_behavior(*b, r.at("behavior"));
        if (auto l = r.quantity("lock_fraction")) g.lock_fraction = *l;
        if (auto rep = r.quantity("reputation")) g.reputation = *rep;
        g.cluster = r.string("cluster");
        if (const json* v = r.get("vesting")) g.vesting = read_vesting(*v, r.at("vesting"));
        s.agents.push_back(std::move(g));
    }

    const json& shocks = root.array("shocks");
    for (std::size_t i = 0; i < shocks.size(); ++i) {
        const std::string p = "/shocks/" + std::to_string(i);
        Reader r(shocks[i], p);
        Shock sh;
        sh.epoch = r.integer("epoch").value_or(1);
        sh.kind = kShockNames.parse(r.string("kind").value_or(""), "shock kind", r.at("kind"));
        sh.magnitude = r.quantity("magnitude").value_or(0);
        sh.target = r.string("target").value_or("");
        s.shocks.push_back(std::move(sh));
    }

    if (const json* pm = root.get("price_model")) {
        Reader r(*pm, "/price_model");
        std::string kind = r.string("kind").value_or("none");
        if (kind == "linear_impact") {
            s.price_model.linear_impact = true;
            s.price_model.coefficient = r.real("coefficient").value_or(1.0);
            s.price_model.reference_price = r.real("reference_price").value_or(1.0);
        } else if (kind != "none") {
            Reader::schema("/price_model/kind", "price model is 'none' or 'linear_impact'");
        }
    }

    const json& flows = root.array("flows");
    for (std::size_t i = 0; i < flows.size(); ++i) {
        Reader r(flows[i], "/flows/" + std::to_string(i));
        FlowEntry f;
        f.epoch = r.integer("epoch").value_or(1);
        f.minted = r.quantity("minted").value_or(0);
        f.burned = r.quantity("burned").value_or(0);
        f.buyback = r.quantity("buyback").value_or(0);
        s.flows.push_back(std::move(f));
    }

    if (const json* g = root.get("governance")) {
        Reader r(*g, "/governance");
        s.governance.every = r.integer("every").value_or(1);
        s.governance.threshold = r.quantity("threshold").value_or(Quantity(1, 2));
        s.governance.conviction_threshold = r.quantity("conviction_threshold");
    }
    s.attacker = root.string("attacker");
    return s;
}

Scenario parse_scenario_text(std::string_view document, const std::string& base_dir) {
    json j;
    try {
        j = json::parse(document.begin(), document.end(), nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::SchemaError, e.what(), "byte " + std::to_string(e.byte));
    }
    return parse_scenario(j, base_dir);
}

// ---------------------------------------------------------------------------
// Reports

namespace {

json metric_json(const metrics::ConcentrationReport& r) {
    return {{"gini", round_places(r.gini)},
            {"nakamoto", r.nakamoto},
            {"holders", r.holder_count},
            {"total", to_fixed_string(r.total_weight, 6)}};
}

json supply_json(const supply::SupplyState& s) {
    return {{"circulating", to_fixed_string(s.circulating, 6)},
            {"staked", to_fixed_string(s.staked, 6)},
            {"vesting_locked", to_fixed_string(s.vesting_locked, 6)},
            {"treasury_held", to_fixed_string(s.treasury_held, 6)},
            {"cumulative_minted", to_fixed_string(s.cumulative_minted, 6)},
            {"cumulative_burned", to_fixed_string(s.cumulative_burned, 6)},
            {"total_outstanding", to_fixed_string(s.total_outstanding(), 6)}};
}

json optional_json(const std::optional<std::size_t>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json epoch_json(const EpochRecord& rec) {
    json gov = json::array();
    for (const auto& g : rec.governance) {
        json e = {{"proposal", g.proposal},
                  {"yes", to_fixed_string(g.result.yes, 6)},
                  {"no", to_fixed_string(g.result.no, 6)},
                  {"turnout", g.result.turnout},
                  {"passed", g.result.passed}};
        if (g.result.conviction) e["conviction"] = to_fixed_string(*g.result.conviction, 6);
        if (g.attacker_share) e["attacker_share"] = round_places(*g.attacker_share);
        gov.push_back(std::move(e));
    }
    json events = json::array();
    for (const auto& e : rec.events) events.push_back({{"kind", e.kind}, {"detail", e.detail}});
    return {{"epoch", rec.epoch},
            {"supply", supply_json(rec.supply)},
            {"market_pool", to_fixed_string(rec.market_pool, 6)},
            {"price", round_places(rec.price)},
            {"balance_metrics", metric_json(rec.balance_metrics)},
            {"power_metrics", rec.power_metrics ? metric_json(*rec.power_metrics) : json(nullptr)},
            {"capture", rec.capture},
            {"governance", std::move(gov)},
            {"events", std::move(events)}};
}

json report_summary(const ScenarioReport& report) {
    json gini = json::array(), nakamoto = json::array(), power_gini = json::array(), power_nakamoto = json::array(),
         price = json::array(), circulating = json::array(), attacker = json::array(), events = json::array();
    for (const auto& rec : report.epochs) {
        gini.push_back(round_places(rec.balance_metrics.gini));
        nakamoto.push_back(rec.balance_metrics.nakamoto);
        power_gini.push_back(rec.power_metrics ? json(round_places(rec.power_metrics->gini)) : json(nullptr));
        power_nakamoto.push_back(rec.power_metrics ? json(rec.power_metrics->nakamoto) : json(nullptr));
        price.push_back(round_places(rec.price));
        circulating.push_back(to_fixed_string(rec.supply.circulating, 6));
        std::optional<double> share;
        for (const auto& g : rec.governance)
            if (g.attacker_share) share = g.attacker_share;
        attacker.push_back(share ? json(round_places(*share)) : json(nullptr));
        for (const auto& e : rec.events) events.push_back({{"epoch", rec.epoch}, {"kind", e.kind}, {"detail", e.detail}});
    }
    const Summary& s = report.summary;
    json out = {{"scenario", report.scenario},
                {"seed", report.seed},
                {"mechanism", report.mechanism},
                {"epochs", report.epochs.size()},
                {"capture", s.capture},
                {"first_capture_epoch", s.first_capture_epoch ? json(*s.first_capture_epoch) : json(nullptr)},
                {"min_power_nakamoto", optional_json(s.min_power_nakamoto)},
                {"max_power_nakamoto", optional_json(s.max_power_nakamoto)},
                {"max_drawdown", s.max_drawdown},
                {"proposals", s.proposals},
                {"proposals_passed", s.passed},
                {"event_count", s.events},
                {"events", std::move(events)},
                {"paths",
                 {{"gini", std::move(gini)},
                  {"nakamoto", std::move(nakamoto)},
                  {"power_gini", std::move(power_gini)},
                  {"power_nakamoto", std::move(power_nakamoto)},
                  {"price", std::move(price)},
                  {"circulating", std::move(circulating)},
                  {"attacker_share", std::move(attacker)}}}};
    if (!report.epochs.empty()) out["final_supply"] = supply_json(report.epochs.back().supply);
    return out;
}

std::string render_summary_text(const ScenarioReport& report) {
    const Summary& s = report.summary;
    std::ostringstream out;
    out << "scenario " << report.scenario << " (seed " << report.seed << ", " << report.mechanism << ", "
        << report.epochs.size() << " epochs)\n";
    if (!report.epochs.empty()) {
        const auto& first = report.epochs.front();
        const auto& last = report.epochs.back();
        out << "gini " << round_places(first.balance_metrics.gini) << " -> " << round_places(last.balance_metrics.gini)
            << ", nakamoto " << first.balance_metrics.nakamoto << " -> " << last.balance_metrics.nakamoto << "\n";
        out << "circulating " << to_fixed_string(last.supply.circulating, 6) << ", price " << round_places(last.price)
            << "\n";
    }
    out << "voting-power nakamoto min " << (s.min_power_nakamoto ? std::to_string(*s.min_power_nakamoto) : "n/a")
        << " max " << (s.max_power_nakamoto ? std::to_string(*s.max_power_nakamoto) : "n/a") << "\n";
    out << "capture " << (s.capture ? "yes (first at epoch " + std::to_string(*s.first_capture_epoch) + ")" : "no")
        << "\n";
    out << "max drawdown " << s.max_drawdown << "\n";
    out << "proposals " << s.passed << "/" << s.proposals << " passed, " << s.events << " events\n";
    return out.str();
}

json to_json(const ScenarioReport& report) {
    json out = report_summary(report);
    json epochs = json::array();
    for (const auto& rec : report.epochs) epochs.push_back(epoch_json(rec));
    out["epoch_records"] = std::move(epochs);
    return out;
}

std::string epochs_csv(const ScenarioReport& report) {
    std::ostringstream out;
    out << "epoch,circulating,staked,vesting_locked,market_pool,price,gini,nakamoto,power_gini,power_nakamoto,"
           "capture,yes,no,passed,attacker_share,events\n";
    for (const auto& rec : report.epochs) {
        out << rec.epoch << ',' << to_fixed_string(rec.supply.circulating, 6) << ','
            << to_fixed_string(rec.supply.staked, 6) << ',' << to_fixed_string(rec.supply.vesting_locked, 6) << ','
            << to_fixed_string(rec.market_pool, 6) << ',' << round_places(rec.price) << ','
            << round_places(rec.balance_metrics.gini) << ',' << rec.balance_metrics.nakamoto << ',';
        if (rec.power_metrics) out << round_places(rec.power_metrics->gini) << ',' << rec.power_metrics->nakamoto;
        else out << ',';
        out << ',' << (rec.capture ? 1 : 0) << ',';
        if (!rec.governance.empty()) {
            const auto& g = rec.governance.back();
            out << to_fixed_string(g.result.yes, 6) << ',' << to_fixed_string(g.result.no, 6) << ','
                << (g.result.passed ? 1 : 0) << ',';
            if (g.attacker_share) out << round_places(*g.attacker_share);
        } else {
            out << ",,,";
        }
        out << ',' << rec.events.size() << '\n';
    }
    return out.str();
}

}  // namespace tedm::sim
