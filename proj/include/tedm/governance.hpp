#pragma once

#include "tedm/enum_names.hpp"
#include "tedm/quantity.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tedm::governance {

using Epoch = std::int64_t;

enum class Family { one_token_one_vote, conviction, vote_escrow, reputation_weighted, quadratic };
inline constexpr std::array<Family, 5> kFamilies = {Family::one_token_one_vote, Family::conviction,
                                                    Family::vote_escrow, Family::reputation_weighted,
                                                    Family::quadratic};

enum class Property { simplicity, accountability, inclusivity, time_efficiency, preference_intensity, security };
inline constexpr std::array<Property, 6> kProperties = {Property::simplicity,      Property::accountability,
                                                        Property::inclusivity,     Property::time_efficiency,
                                                        Property::preference_intensity, Property::security};

enum class GovernanceArea { treasury, governance_process, protocol_upgrade, tokenomics };

enum class Choice { yes, no, abstain };

extern const EnumNames<Family, 5, 8> kFamilyNames;
extern const EnumNames<Property, 6, 2> kPropertyNames;
extern const EnumNames<GovernanceArea, 4> kAreaNames;
extern const EnumNames<Choice, 3, 4> kChoiceNames;

/// Human label used in comparison tables, e.g. "1-Token-1-Vote".
std::string_view display_name(Family family);

struct Voter {
    std::string id;
    Quantity balance;
    Epoch lock_remaining = 0;
    Epoch lock_max = 4;
    Quantity reputation;
    /// Quadratic voice credits.
    Quantity credits;
    /// Ground-truth owner for Sybil experiments; never visible to mechanisms.
    std::optional<std::string> identity_cluster;

    void check() const;
    /// identity_cluster if tagged, otherwise the voter's own id.
    const std::string& cluster() const { return identity_cluster ? *identity_cluster : id; }

    friend bool operator==(const Voter&, const Voter&) = default;
};

struct Proposal {
    std::string id;
    GovernanceArea kind = GovernanceArea::governance_process;
    /// Binary families pass when yes / (yes + no) > threshold.
    Quantity threshold{1, 2};
    /// Conviction family passes when accumulated conviction >= this.
    std::optional<Quantity> conviction_threshold;

    void check() const;
};

struct MechanismParams {
    /// Conviction decay, in (0, 1).
    Quantity conviction_alpha{9, 10};
    /// Vote-escrow horizon in epochs.
    Epoch lock_max = 4;
    /// Bond-style scaling applied on top of the escrow fraction.
    Quantity stake_scale{1};
    /// Per-proposal quadratic credit allocation; unset means each voter's own credits.
    std::optional<Quantity> credit_budget;

    friend bool operator==(const MechanismParams&, const MechanismParams&) = default;
};

struct VotingMechanism {
    Family family = Family::one_token_one_vote;
    MechanismParams params;

    void check() const;
    friend bool operator==(const VotingMechanism&, const VotingMechanism&) = default;
};

Quantity power_1t1v(const Voter& voter);
/// balance * lock_remaining / lock_max, times stake_scale.
Quantity power_ve(const Voter& voter, const Quantity& stake_scale = Quantity(1));
Quantity power_reputation(const Voter& voter);
/// Real square root of the credits spent; cost(v) = v^2.
double votes_quadratic(const Quantity& credits_spent, const std::optional<Quantity>& budget = std::nullopt);
/// y_t = alpha * y_{t-1} + support
Quantity conviction_update(const Quantity& previous, const Quantity& support, const Quantity& alpha);

/// Weight a voter brings to a proposal under the mechanism, before any
/// conviction accumulation. Quadratic assumes all of the voter's credits are spent.
Quantity voting_power(const Voter& voter, const VotingMechanism& mechanism);

struct Ballot {
    std::string voter;
    Choice choice = Choice::yes;
    /// Quadratic only; defaults to all of the voter's credits.
    std::optional<Quantity> credits_spent;
};

struct TallyResult {
    Quantity yes;
    Quantity no;
    std::size_t turnout = 0;
    bool passed = false;
    /// Conviction family only: accumulated conviction after this round.
    std::optional<Quantity> conviction;

    friend bool operator==(const TallyResult&, const TallyResult&) = default;
};

/// Deterministic tally. Each voter may cast at most one ballot (DuplicateVote).
/// `prior_conviction` carries the accumulated conviction into this round.
TallyResult tally(const Proposal& proposal, std::span<const Voter> voters, std::span<const Ballot> ballots,
                  const VotingMechanism& mechanism, const Quantity& prior_conviction = Quantity(0));

struct MatrixCell {
    int score = 1;
    /// Short rationale in our own words; empty for cells set to the partial default.
    std::string_view basis;
    /// False where the characterization does not pin the score down.
    bool determined = true;
};

class PropertyMatrix {
public:
    PropertyMatrix();
    const MatrixCell& cell(Family family, Property property) const;
    int score(Family family, Property property) const { return cell(family, property).score; }

private:
    std::array<std::array<MatrixCell, kProperties.size()>, kFamilies.size()> cells_;
};

/// 0 = weak, 1 = partial, 2 = strong.
const PropertyMatrix& property_matrix();

using Requirements = std::map<Property, int>;

struct Recommendation {
    std::vector<Family> ranked;
    /// Set when no family meets every requirement.
    bool no_candidate = false;
};

/// Families meeting every minimum, ordered by descending scores on `prefer`
/// (lexicographically), then by canonical family name.
Recommendation recommend_mechanism(const Requirements& required, const std::vector<Property>& prefer);

bool satisfies(Family family, const Requirements& required);

/// Replaces the cluster's identities with k identities sharing the cluster tag.
/// Balance and credits are split evenly; every identity inherits the lock;
/// reputation stays with the first identity.
std::vector<Voter> sybil_split(std::span<const Voter> voters, const std::string& cluster, int k);

}  // namespace tedm::governance
