#pragma once

#include "tedm/quantity.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tedm::supply {

using Epoch = std::int64_t;

enum class SupplyKind { capped, uncapped };

struct SupplyPolicy {
    SupplyKind kind = SupplyKind::uncapped;
    std::optional<Quantity> s_max;
    /// When set, every epoch must mint strictly more than it burns.
    bool inflationary_constraint = false;

    static SupplyPolicy capped(Quantity cap);
    static SupplyPolicy uncapped(bool inflationary = false);

    /// Throws InvalidArgument if kind and s_max disagree.
    void check() const;

    friend bool operator==(const SupplyPolicy&, const SupplyPolicy&) = default;
};

struct SupplyState {
    Epoch epoch = 0;
    Quantity circulating;
    Quantity staked;
    Quantity vesting_locked;
    /// Held by the treasury after a hold-variant buyback; outside circulation but not burned.
    Quantity treasury_held;
    Quantity cumulative_minted;
    Quantity cumulative_burned;

    /// circulating + staked + vesting_locked + treasury_held
    Quantity total_outstanding() const;

    friend bool operator==(const SupplyState&, const SupplyState&) = default;
};

struct EpochFlows {
    Quantity minted;
    Quantity burned;
    /// Tokens bought back and destroyed this epoch.
    Quantity buyback;
    /// Positive moves circulating into staked, negative releases stake.
    Quantity stake_delta;
    /// Moves vesting_locked into circulating.
    Quantity vest_release;

    void check() const;
};

struct SupplyStep {
    SupplyState state;
    /// Portion of the requested mint dropped to respect the cap.
    Quantity truncated;
    bool was_truncated() const { return truncated > 0; }
};

/// One epoch of the supply identity S_t = min(S_max, S_{t-1} + M_t - B_t),
/// extended with buyback burns, staking transfers, and vesting releases.
/// A mint that does not fit under the cap is truncated, never rejected.
SupplyStep step_supply(const SupplyState& state, const EpochFlows& flows, const SupplyPolicy& policy);

struct TruncationEvent {
    Epoch epoch;
    Quantity requested;
    Quantity dropped;
};

struct SupplyPath {
    std::vector<SupplyState> states;
    std::vector<TruncationEvent> truncations;
};

/// Folds step_supply over `flows`; a failing step rethrows with its epoch attached.
SupplyPath simulate_supply_path(const SupplyState& initial, const std::vector<EpochFlows>& flows,
                                const SupplyPolicy& policy);

struct VestingSchedule {
    Quantity total;
    Epoch start_epoch = 0;
    Epoch cliff_epochs = 0;
    Epoch duration_epochs = 1;

    void check() const;
    friend bool operator==(const VestingSchedule&, const VestingSchedule&) = default;
};

/// Cumulative amount released by `epoch`: nothing before the cliff, then
/// total * (epoch - start) / duration, capped at total. Reaching the cliff
/// releases everything accrued since start in one tranche.
Quantity vesting_released(const VestingSchedule& schedule, Epoch epoch);

SupplyState apply_burn(const SupplyState& state, const Quantity& amount);

enum class BuybackVariant { burn, hold };

struct BuybackResult {
    SupplyState state;
    Quantity treasury;
};

BuybackResult apply_buyback(const SupplyState& state, const Quantity& amount, const Quantity& treasury,
                            const Quantity& price = Quantity(1), BuybackVariant variant = BuybackVariant::burn);

SupplyState stake(const SupplyState& state, const Quantity& amount);
SupplyState unstake(const SupplyState& state, const Quantity& amount);

/// Moves `amount` from vesting_locked into circulating without advancing the epoch.
SupplyState release_vesting(const SupplyState& state, const Quantity& amount);

/// Flow schedule CSV: header `epoch,minted,burned,buyback,stake_delta`, rows in
/// epoch order. Missing epochs are zero flows; returns one entry per epoch 1..max.
std::vector<EpochFlows> parse_flow_schedule_csv(const std::string& text);

}  // namespace tedm::supply
