#pragma once

#include "tedm/concentration.hpp"
#include "tedm/governance.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tedm::snapshot {

struct HolderRow {
    std::string entity;
    Quantity weight;
    /// Epoch at which the holder's lock expires; vote-escrow snapshots only.
    std::optional<std::int64_t> lock_end;
};

/// Holder snapshot CSV: `entity,weight[,lock_end]`.
std::vector<HolderRow> parse_holder_csv(const std::string& text);

struct EscrowView {
    std::int64_t current_epoch = 0;
    std::int64_t lock_max = 4;
};

/// Plain weights, or ve power (weight * remaining lock / lock_max) when `escrow` is given.
/// Rows without lock_end count as unlocked under an escrow view.
metrics::HolderDistribution to_distribution(const std::vector<HolderRow>& rows,
                                            const std::optional<EscrowView>& escrow = std::nullopt);

struct VoteSet {
    std::vector<governance::Voter> voters;
    std::vector<governance::Ballot> ballots;
};

/// Voter CSV: `id,balance` plus any of `lock_remaining,lock_max,reputation,credits,cluster,choice,credits_spent`.
/// Rows with an empty choice register the voter without casting a ballot.
VoteSet parse_vote_csv(const std::string& text);

}  // namespace tedm::snapshot
