#include "tedm/supply.hpp"

#include "tedm/csv.hpp"
#include "tedm/error.hpp"

#include <algorithm>
#include <map>

namespace tedm::supply {

SupplyPolicy SupplyPolicy::capped(Quantity cap) {
    SupplyPolicy p;
    p.kind = SupplyKind::capped;
    p.s_max = std::move(cap);
    return p;
}

SupplyPolicy SupplyPolicy::uncapped(bool inflationary) {
    SupplyPolicy p;
    p.kind = SupplyKind::uncapped;
    p.inflationary_constraint = inflationary;
    return p;
}

void SupplyPolicy::check() const {
    if (kind == SupplyKind::capped && !s_max)
        throw Error(ErrorCode::InvalidArgument, "capped policy requires s_max");
    if (kind == SupplyKind::uncapped && s_max)
        throw Error(ErrorCode::InvalidArgument, "uncapped policy must not define s_max");
    if (s_max && *s_max < 0) throw Error(ErrorCode::InvalidArgument, "s_max must be non-negative");
}

Quantity SupplyState::total_outstanding() const { return circulating + staked + vesting_locked + treasury_held; }

void EpochFlows::check() const {
    if (minted < 0) throw Error(ErrorCode::InvalidArgument, "minted must be non-negative");
    if (burned < 0) throw Error(ErrorCode::InvalidArgument, "burned must be non-negative");
    if (buyback < 0) throw Error(ErrorCode::InvalidArgument, "buyback must be non-negative");
    if (vest_release < 0) throw Error(ErrorCode::InvalidArgument, "vest_release must be non-negative");
}

SupplyStep step_supply(const SupplyState& state, const EpochFlows& flows, const SupplyPolicy& policy) {
    policy.check();
    flows.check();

    const Quantity destroyed = flows.burned + flows.buyback;
    if (destroyed > state.circulating + flows.minted)
        throw Error(ErrorCode::SupplyUnderflow, "burn and buyback exceed circulating supply plus mint");
    if (policy.inflationary_constraint && !(flows.minted > destroyed))
        throw Error(ErrorCode::ConstraintViolation, "inflationary policy requires minted > burned");
    if (flows.vest_release > state.vesting_locked)
        throw Error(ErrorCode::SupplyUnderflow, "vest_release exceeds vesting_locked");
    if (-flows.stake_delta > state.staked)
        throw Error(ErrorCode::SupplyUnderflow, "unstake exceeds staked balance");

    Quantity minted = flows.minted;
    Quantity truncated = 0;
    if (policy.kind == SupplyKind::capped) {
        const Quantity& cap = *policy.s_max;
        if (state.total_outstanding() > cap)
            throw Error(ErrorCode::ConstraintViolation, "input state already exceeds the supply cap");
        Quantity projected = state.total_outstanding() + minted - destroyed;
        if (projected > cap) {
            truncated = std::min<Quantity>(minted, projected - cap);
            minted -= truncated;
        }
    }

    SupplyStep out;
    SupplyState& next = out.state;
    next = state;
    next.epoch = state.epoch + 1;
    next.circulating = state.circulating + minted - destroyed + flows.vest_release - flows.stake_delta;
    next.staked = state.staked + flows.stake_delta;
    next.vesting_locked = state.vesting_locked - flows.vest_release;
    next.cumulative_minted = state.cumulative_minted + minted;
    next.cumulative_burned = state.cumulative_burned + destroyed;
    if (next.circulating < 0)
        throw Error(ErrorCode::SupplyUnderflow, "epoch flows drive circulating supply negative");
    out.truncated = std::move(truncated);
    return out;
}

SupplyPath simulate_supply_path(const SupplyState& initial, const std::vector<EpochFlows>& flows,
                                const SupplyPolicy& policy) {
    SupplyPath path;
    path.states.reserve(flows.size());
    SupplyState current = initial;
    for (const auto& f : flows) {
        SupplyStep step;
        try {
            step = step_supply(current, f, policy);
        } catch (const Error& e) {
            throw e.with_epoch(current.epoch + 1);
        }
        if (step.was_truncated()) path.truncations.push_back({step.state.epoch, f.minted, step.truncated});
        current = step.state;
        path.states.push_back(current);
    }
    return path;
}

void VestingSchedule::check() const {
    if (total < 0) throw Error(ErrorCode::InvalidArgument, "vesting total must be non-negative");
    if (duration_epochs < 1) throw Error(ErrorCode::InvalidArgument, "vesting duration must be at least 1 epoch");
    if (cliff_epochs < 0 || cliff_epochs > duration_epochs)
        throw Error(ErrorCode::InvalidArgument, "vesting cliff must lie within [0, duration]");
}

Quantity vesting_released(const VestingSchedule& schedule, Epoch epoch) {
    schedule.check();
    if (epoch < schedule.start_epoch + schedule.cliff_epochs) return 0;
    if (epoch >= schedule.start_epoch + schedule.duration_epochs) return schedule.total;
    return schedule.total * Quantity(epoch - schedule.start_epoch) / Quantity(schedule.duration_epochs);
}

SupplyState apply_burn(const SupplyState& state, const Quantity& amount) {
    if (amount < 0) throw Error(ErrorCode::InvalidArgument, "burn amount must be non-negative");
    if (amount > state.circulating) throw Error(ErrorCode::SupplyUnderflow, "burn exceeds circulating supply");
    SupplyState next = state;
    next.circulating -= amount;
    next.cumulative_burned += amount;
    return next;
}

BuybackResult apply_buyback(const SupplyState& state, const Quantity& amount, const Quantity& treasury,
                            const Quantity& price, BuybackVariant variant) {
    if (amount < 0) throw Error(ErrorCode::InvalidArgument, "buyback amount must be non-negative");
    if (price < 0) throw Error(ErrorCode::InvalidArgument, "price must be non-negative");
    Quantity cost = amount * price;
    if (cost > treasury) throw Error(ErrorCode::InsufficientTreasury, "buyback cost exceeds treasury");
    if (amount > state.circulating) throw Error(ErrorCode::SupplyUnderflow, "buyback exceeds circulating supply");

    BuybackResult out;
    if (variant == BuybackVariant::burn) {
        out.state = apply_burn(state, amount);
    } else {
        out.state = state;
        out.state.circulating -= amount;
        out.state.treasury_held += amount;
    }
    out.treasury = treasury - cost;
    return out;
}

SupplyState stake(const SupplyState& state, const Quantity& amount) {
    if (amount < 0) throw Error(ErrorCode::InvalidArgument, "stake amount must be non-negative");
    if (amount > state.circulating) throw Error(ErrorCode::SupplyUnderflow, "stake exceeds circulating supply");
    SupplyState next = state;
    next.circulating -= amount;
    next.staked += amount;
    return next;
}

SupplyState unstake(const SupplyState& state, const Quantity& amount) {
    if (amount < 0) throw Error(ErrorCode::InvalidArgument, "unstake amount must be non-negative");
    if (amount > state.staked) throw Error(ErrorCode::SupplyUnderflow, "unstake exceeds staked balance");
    SupplyState next = state;
    next.staked -= amount;
    next.circulating += amount;
    return next;
}

SupplyState release_vesting(const SupplyState& state, const Quantity& amount) {
    if (amount < 0) throw Error(ErrorCode::InvalidArgument, "release amount must be non-negative");
    if (amount > state.vesting_locked) throw Error(ErrorCode::SupplyUnderflow, "release exceeds vesting_locked");
    SupplyState next = state;
    next.vesting_locked -= amount;
    next.circulating += amount;
    return next;
}

std::vector<EpochFlows> parse_flow_schedule_csv(const std::string& text) {
    csv::Table table = csv::parse(text);
    const char* required[] = {"epoch", "minted", "burned", "buyback", "stake_delta"};
    std::size_t cols[5];
    for (int i = 0; i < 5; ++i) {
        cols[i] = table.column(required[i]);
        if (cols[i] == std::string::npos)
            throw Error(ErrorCode::SchemaError, std::string("missing column '") + required[i] + "'", "line 1");
    }

    std::map<Epoch, EpochFlows> by_epoch;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string where = "line " + std::to_string(table.line_numbers[r]);
        try {
            Quantity epoch_q = parse_quantity(row[cols[0]]);
            if (boost::multiprecision::denominator(epoch_q) != 1 || epoch_q < 1)
                throw Error(ErrorCode::SchemaError, "epoch must be a positive integer", where);
            auto epoch = boost::multiprecision::numerator(epoch_q).convert_to<Epoch>();
            if (by_epoch.count(epoch)) throw Error(ErrorCode::SchemaError, "duplicate epoch", where);
            EpochFlows f;
            f.minted = parse_quantity(row[cols[1]]);
            f.burned = parse_quantity(row[cols[2]]);
            f.buyback = parse_quantity(row[cols[3]]);
            f.stake_delta = parse_quantity(row[cols[4]]);
            f.check();
            by_epoch.emplace(epoch, std::move(f));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::SchemaError) throw;
            throw Error(ErrorCode::SchemaError, e.what(), where);
        }
    }

    std::vector<EpochFlows> out;
    if (by_epoch.empty()) return out;
    out.resize(static_cast<std::size_t>(by_epoch.rbegin()->first));
    for (auto& [epoch, f] : by_epoch) out[static_cast<std::size_t>(epoch - 1)] = std::move(f);
    return out;
}

}  // namespace tedm::supply
