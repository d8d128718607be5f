#pragma once

#include "tedm/concentration.hpp"
#include "tedm/economy_spec.hpp"
#include "tedm/governance.hpp"
#include "tedm/supply.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tedm::sim {

using Epoch = std::int64_t;

enum class BehaviorKind { hold, threshold_seller, governance_participant };
extern const EnumNames<BehaviorKind, 3, 3> kBehaviorNames;

struct Behavior {
    BehaviorKind kind = BehaviorKind::hold;
    /// threshold_seller: share of balance sold once the price falls below reference * (1 - drop).
    Quantity sell_fraction;
    Quantity drop;
    /// Chance of casting a ballot in a governance round. Hold and threshold agents abstain from voting
    /// unless this is set.
    double participation = 0.0;
};

enum class BalanceKind { fixed, uniform, pareto };

struct BalanceSpec {
    BalanceKind kind = BalanceKind::fixed;
    Quantity value;
    Quantity low;
    Quantity high;
    double alpha = 1.5;
    Quantity scale{1};
};

struct AgentGroup {
    std::string name;
    spec::StakeholderCategory category = spec::StakeholderCategory::users;
    int population = 1;
    BalanceSpec balance;
    Behavior behavior;
    /// Vote-escrow lock as a fraction of the mechanism's lock_max; re-locked every epoch.
    Quantity lock_fraction{1};
    Quantity reputation{1};
    /// Every member shares this identity cluster; defaults to each agent's own id.
    std::optional<std::string> cluster;
    /// Per-agent vesting grant on top of the initial balance.
    std::optional<supply::VestingSchedule> vesting;
};

enum class ShockKind { sell_off, whale_accumulation, sybil_split, unlock_event };
extern const EnumNames<ShockKind, 4> kShockNames;

/// sell_off: every agent sells `magnitude` of its balance to the market.
/// whale_accumulation: the target cluster acquires `magnitude` of every other agent's balance.
/// sybil_split: the target cluster is re-split into `magnitude` identities.
/// unlock_event: `magnitude` of all still-locked vesting is released at once.
struct Shock {
    Epoch epoch = 1;
    ShockKind kind = ShockKind::sell_off;
    Quantity magnitude;
    std::string target;
};

struct PriceModel {
    bool linear_impact = false;
    double coefficient = 0.0;
    double reference_price = 1.0;
};

struct FlowEntry {
    Epoch epoch = 1;
    Quantity minted;
    Quantity burned;
    Quantity buyback;
};

struct GovernanceSchedule {
    /// A round every `every` epochs; 0 disables governance.
    Epoch every = 1;
    Quantity threshold{1, 2};
    /// Conviction family only; defaults to a quarter of the initial total balance.
    std::optional<Quantity> conviction_threshold;
};

struct Scenario {
    std::string name;
    spec::EconomySpec spec;
    /// Token whose supply policy drives the run; defaults to the first token.
    std::string token;
    /// Overrides the spec's chosen mechanism.
    std::optional<governance::VotingMechanism> mechanism;
    Epoch epochs = 1;
    std::uint64_t seed = 0;
    std::vector<AgentGroup> agents;
    std::vector<Shock> shocks;
    PriceModel price_model;
    std::vector<FlowEntry> flows;
    GovernanceSchedule governance;
    /// Cluster whose share of cast votes is tracked.
    std::optional<std::string> attacker;

    /// Throws Error{InvalidArgument} with a JSON-pointer path.
    void check() const;
};

struct Event {
    Epoch epoch = 0;
    std::string kind;
    std::string detail;
};

struct GovernanceOutcome {
    std::string proposal;
    governance::TallyResult result;
    /// Attacker cluster's weight over all yes/no weight, when an attacker is set and votes were cast.
    std::optional<double> attacker_share;
};

struct EpochRecord {
    Epoch epoch = 0;
    supply::SupplyState supply;
    Quantity market_pool;
    double price = 1.0;
    /// Balances per identity.
    metrics::HolderDistribution balances;
    metrics::ConcentrationReport balance_metrics;
    /// Voting power per identity cluster.
    metrics::HolderDistribution voting_power;
    std::optional<metrics::ConcentrationReport> power_metrics;
    /// Some cluster holds strictly more than half of the voting power.
    bool capture = false;
    std::vector<GovernanceOutcome> governance;
    std::vector<Event> events;
};

struct Summary {
    std::optional<std::size_t> min_power_nakamoto;
    std::optional<std::size_t> max_power_nakamoto;
    double max_drawdown = 0.0;
    bool capture = false;
    std::optional<Epoch> first_capture_epoch;
    std::size_t proposals = 0;
    std::size_t passed = 0;
    std::size_t events = 0;
};

struct ScenarioReport {
    std::string scenario;
    std::uint64_t seed = 0;
    std::string mechanism;
    std::vector<EpochRecord> epochs;
    Summary summary;
};

/// Epoch order: agent actions, supply step, shocks, price update, governance, metrics.
/// Errors carry the failing epoch. `on_epoch` sees each record as soon as it is complete.
ScenarioReport run_scenario(const Scenario& scenario,
                            const std::function<void(const EpochRecord&)>& on_epoch = {});

inline constexpr std::array<std::string_view, 4> kPresetNames = {"capture", "sell_off_cascade", "sybil",
                                                                "unlock_cliff"};
/// Canned scenario exercising one failure mode against `spec`. Throws Error{UnknownPreset}.
Scenario preset(std::string_view name, const spec::EconomySpec& spec);
std::string_view preset_description(std::string_view name);

/// Scenario document: spec given inline or as a path resolved against `base_dir`.
Scenario parse_scenario(const nlohmann::json& document, const std::string& base_dir = ".");
Scenario parse_scenario_text(std::string_view document, const std::string& base_dir = ".");

/// Stable summary: paths and indicators with metrics rounded to 6 places.
nlohmann::json report_summary(const ScenarioReport& report);
std::string render_summary_text(const ScenarioReport& report);
nlohmann::json epoch_json(const EpochRecord& record);
nlohmann::json to_json(const ScenarioReport& report);
/// One row per epoch for plotting.
std::string epochs_csv(const ScenarioReport& report);

}  // namespace tedm::sim
