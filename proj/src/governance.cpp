#include "tedm/governance.hpp"

#include "tedm/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

namespace tedm::governance {

const EnumNames<Family, 5, 8> kFamilyNames{
    {{{Family::one_token_one_vote, "one_token_one_vote"},
      {Family::conviction, "conviction"},
      {Family::vote_escrow, "vote_escrow"},
      {Family::reputation_weighted, "reputation_weighted"},
      {Family::quadratic, "quadratic"}}},
    {{{Family::one_token_one_vote, "1t1v"},
      {Family::one_token_one_vote, "token_weighted"},
      {Family::conviction, "conviction_voting"},
      {Family::vote_escrow, "ve"},
      {Family::vote_escrow, "vetoken"},
      {Family::vote_escrow, "bond"},
      {Family::reputation_weighted, "reputation"},
      {Family::quadratic, "quadratic_voting"}}}};

const EnumNames<Property, 6, 2> kPropertyNames{
    {{{Property::simplicity, "simplicity"},
      {Property::accountability, "accountability"},
      {Property::inclusivity, "inclusivity"},
      {Property::time_efficiency, "time_efficiency"},
      {Property::preference_intensity, "preference_intensity"},
      {Property::security, "security"}}},
    {{{Property::preference_intensity, "intensity_of_preferences"},
      {Property::preference_intensity, "intensity"}}}};

const EnumNames<GovernanceArea, 4> kAreaNames{{{{GovernanceArea::treasury, "treasury"},
                                                {GovernanceArea::governance_process, "governance-process"},
                                                {GovernanceArea::protocol_upgrade, "protocol-upgrade"},
                                                {GovernanceArea::tokenomics, "tokenomics"}}}};

const EnumNames<Choice, 3, 4> kChoiceNames{
    {{{Choice::yes, "for"}, {Choice::no, "against"}, {Choice::abstain, "abstain"}}},
    {{{Choice::yes, "yes"}, {Choice::no, "no"}, {Choice::yes, "yea"}, {Choice::no, "nay"}}}};

std::string_view display_name(Family family) {
    switch (family) {
        case Family::one_token_one_vote: return "1-Token-1-Vote";
        case Family::conviction: return "time-weighted conviction voting";
        case Family::vote_escrow: return "time-weighted vote-escrow";
        case Family::reputation_weighted: return "reputation-weighted voting";
        case Family::quadratic: return "quadratic voting";
    }
    return "?";
}

void Voter::check() const {
    if (balance < 0 || reputation < 0 || credits < 0)
        throw Error(ErrorCode::InvalidArgument, "voter '" + id + "' has a negative quantity");
    if (lock_max < 1) throw Error(ErrorCode::InvalidArgument, "lock_max must be at least 1");
    if (lock_remaining < 0 || lock_remaining > lock_max)
        throw Error(ErrorCode::InvalidArgument, "voter '" + id + "' lock_remaining outside [0, lock_max]");
}

void Proposal::check() const {
    if (threshold <= 0 || threshold > 1)
        throw Error(ErrorCode::InvalidArgument, "proposal threshold must lie in (0, 1]");
    if (conviction_threshold && *conviction_threshold < 0)
        throw Error(ErrorCode::InvalidArgument, "conviction threshold must be non-negative");
}

void VotingMechanism::check() const {
    if (params.conviction_alpha <= 0 || params.conviction_alpha >= 1)
        throw Error(ErrorCode::InvalidDecay, "conviction alpha must lie strictly between 0 and 1");
    if (params.lock_max < 1) throw Error(ErrorCode::InvalidArgument, "lock_max must be at least 1");
    if (params.stake_scale <= 0) throw Error(ErrorCode::InvalidArgument, "stake_scale must be positive");
    if (params.credit_budget && *params.credit_budget <= 0)
        throw Error(ErrorCode::InvalidArgument, "quadratic credit budget must be positive");
}

Quantity power_1t1v(const Voter& voter) { return voter.balance; }

Quantity power_ve(const Voter& voter, const Quantity& stake_scale) {
    voter.check();
    return voter.balance * Quantity(voter.lock_remaining) / Quantity(voter.lock_max) * stake_scale;
}

Quantity power_reputation(const Voter& voter) { return voter.reputation; }

double votes_quadratic(const Quantity& credits_spent, const std::optional<Quantity>& budget) {
    if (credits_spent < 0) throw Error(ErrorCode::InvalidArgument, "credits spent must be non-negative");
    if (budget && credits_spent > *budget)
        throw Error(ErrorCode::BudgetExceeded, "credits spent exceed the voice-credit budget");
    return std::sqrt(to_double(credits_spent));
}

Quantity conviction_update(const Quantity& previous, const Quantity& support, const Quantity& alpha) {
    if (alpha <= 0 || alpha >= 1)
        throw Error(ErrorCode::InvalidDecay, "conviction alpha must lie strictly between 0 and 1");
    if (support < 0) throw Error(ErrorCode::InvalidArgument, "support must be non-negative");
    return alpha * previous + support;
}

namespace {

Quantity quadratic_power(const Voter& voter, const Quantity& spent, const MechanismParams& params) {
    if (spent > voter.credits)
        throw Error(ErrorCode::BudgetExceeded, "voter '" + voter.id + "' spends more credits than held");
    return from_double(votes_quadratic(spent, params.credit_budget));
}

}  // namespace

Quantity voting_power(const Voter& voter, const VotingMechanism& mechanism) {
    switch (mechanism.family) {
        case Family::one_token_one_vote:
        case Family::conviction:
            return power_1t1v(voter);
        case Family::vote_escrow: {
            Voter escrowed = voter;
            escrowed.lock_max = mechanism.params.lock_max;
            return power_ve(escrowed, mechanism.params.stake_scale);
        }
        case Family::reputation_weighted:
            return power_reputation(voter);
        case Family::quadratic: {
            Quantity spent = voter.credits;
            if (mechanism.params.credit_budget) spent = std::min(spent, *mechanism.params.credit_budget);
            return quadratic_power(voter, spent, mechanism.params);
        }
    }
    return 0;
}

TallyResult tally(const Proposal& proposal, std::span<const Voter> voters, std::span<const Ballot> ballots,
                  const VotingMechanism& mechanism, const Quantity& prior_conviction) {
    proposal.check();
    mechanism.check();
    if (mechanism.family == Family::conviction && !proposal.conviction_threshold)
        throw Error(ErrorCode::InvalidArgument, "conviction tally requires a conviction_threshold");

    std::unordered_map<std::string_view, const Voter*> by_id;
    by_id.reserve(voters.size());
    for (const auto& v : voters) by_id.emplace(v.id, &v);

    std::set<std::string_view> seen;
    TallyResult result;
    for (const auto& ballot : ballots) {
        auto it = by_id.find(ballot.voter);
        if (it == by_id.end())
            throw Error(ErrorCode::InvalidArgument, "ballot from unknown voter '" + ballot.voter + "'");
        if (!seen.insert(ballot.voter).second)
            throw Error(ErrorCode::DuplicateVote, "voter '" + ballot.voter + "' voted twice on " + proposal.id);
        ++result.turnout;
        if (ballot.choice == Choice::abstain) continue;

        const Voter& voter = *it->second;
        Quantity power;
        if (mechanism.family == Family::quadratic) {
            Quantity spent = ballot.credits_spent ? *ballot.credits_spent : voter.credits;
            power = quadratic_power(voter, spent, mechanism.params);
        } else {
            power = voting_power(voter, mechanism);
        }
        (ballot.choice == Choice::yes ? result.yes : result.no) += power;
    }

    if (mechanism.family == Family::conviction) {
        Quantity conviction = conviction_update(prior_conviction, result.yes, mechanism.params.conviction_alpha);
        result.passed = conviction >= *proposal.conviction_threshold;
        result.conviction = std::move(conviction);
    } else {
        Quantity cast = result.yes + result.no;
        result.passed = cast > 0 && result.yes > proposal.threshold * cast;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Property matrix. Rows follow kFamilies, columns follow kProperties.

PropertyMatrix::PropertyMatrix() {
    using F = Family;
    using P = Property;
    auto set = [this](F f, P p, int score, std::string_view basis, bool determined = true) {
        cells_[static_cast<std::size_t>(f)][static_cast<std::size_t>(p)] = {score, basis, determined};
    };

    set(F::one_token_one_vote, P::simplicity, 2, "power equals balance; nothing else to explain or implement");
    set(F::one_token_one_vote, P::accountability, 1,
        "holding tokens is some exposure, but no lock or time commitment; time-weighting improves on it");
    set(F::one_token_one_vote, P::inclusivity, 0, "small holders are outweighed by wealth; plutocracy risk");
    set(F::one_token_one_vote, P::time_efficiency, 2, "a single snapshot vote can settle urgent decisions");
    set(F::one_token_one_vote, P::preference_intensity, 0, "one weight per holder regardless of how much they care");
    set(F::one_token_one_vote, P::security, 0, "vote buying and capture by large holders");

    set(F::conviction, P::simplicity, 1,
        "time weighting adds complexity, though this is the simplest member of the time-weighted family");
    set(F::conviction, P::accountability, 2, "support must be sustained over time");
    set(F::conviction, P::inclusivity, 1, {}, false);
    set(F::conviction, P::time_efficiency, 0, "conviction needs many epochs to accumulate");
    set(F::conviction, P::preference_intensity, 1, {}, false);
    set(F::conviction, P::security, 1, "time commitment mitigates short-term capture but not Sybil splitting");

    set(F::vote_escrow, P::simplicity, 0, "lock schedules and decaying weights are harder to implement and explain");
    set(F::vote_escrow, P::accountability, 2, "tokens are escrowed for the lock duration");
    set(F::vote_escrow, P::inclusivity, 1, {}, false);
    set(F::vote_escrow, P::time_efficiency, 0, "weight is tied to long lock horizons");
    set(F::vote_escrow, P::preference_intensity, 1, {}, false);
    set(F::vote_escrow, P::security, 1, "locking raises the cost of short-term capture but not Sybil splitting");

    set(F::reputation_weighted, P::simplicity, 0, "needs extra machinery to quantify and update reputation");
    set(F::reputation_weighted, P::accountability, 2, "reputation at stake is a form of commitment");
    set(F::reputation_weighted, P::inclusivity, 2, "weight does not depend on wealth");
    set(F::reputation_weighted, P::time_efficiency, 1, {}, false);
    set(F::reputation_weighted, P::preference_intensity, 0, "fixed weight per identity on every issue");
    set(F::reputation_weighted, P::security, 1, "mitigates wealth capture but opens new attack surfaces");

    set(F::quadratic, P::simplicity, 0, "credit accounting adds complexity");
    set(F::quadratic, P::accountability, 1, {}, false);
    set(F::quadratic, P::inclusivity, 1, "dampens large holders relative to token weighting");
    set(F::quadratic, P::time_efficiency, 1, {}, false);
    set(F::quadratic, P::preference_intensity, 2, "increasing marginal cost lets voters signal intensity");
    set(F::quadratic, P::security, 0, "splitting identities amplifies votes; strategic robustness is contested");
}

const MatrixCell& PropertyMatrix::cell(Family family, Property property) const {
    return cells_[static_cast<std::size_t>(family)][static_cast<std::size_t>(property)];
}

const PropertyMatrix& property_matrix() {
    static const PropertyMatrix matrix;
    return matrix;
}

bool satisfies(Family family, const Requirements& required) {
    const auto& m = property_matrix();
    return std::all_of(required.begin(), required.end(),
                       [&](const auto& req) { return m.score(family, req.first) >= req.second; });
}

Recommendation recommend_mechanism(const Requirements& required, const std::vector<Property>& prefer) {
    for (const auto& [property, level] : required)
        if (level < 0 || level > 2)
            throw Error(ErrorCode::InvalidArgument,
                        "requirement level for " + std::string(kPropertyNames.name(property)) + " must be 0, 1 or 2");

    Recommendation rec;
    for (Family f : kFamilies)
        if (satisfies(f, required)) rec.ranked.push_back(f);

    const auto& m = property_matrix();
    std::sort(rec.ranked.begin(), rec.ranked.end(), [&](Family a, Family b) {
        for (Property p : prefer) {
            int sa = m.score(a, p), sb = m.score(b, p);
            if (sa != sb) return sa > sb;
        }
        return kFamilyNames.name(a) < kFamilyNames.name(b);
    });
    rec.no_candidate = rec.ranked.empty();
    return rec;
}

std::vector<Voter> sybil_split(std::span<const Voter> voters, const std::string& cluster, int k) {
    if (k < 1) throw Error(ErrorCode::InvalidArgument, "sybil split requires k >= 1");

    std::vector<Voter> out;
    out.reserve(voters.size() + static_cast<std::size_t>(k));
    const Voter* first = nullptr;
    Quantity balance = 0, credits = 0, reputation = 0;
    std::size_t insert_at = 0;
    for (const auto& v : voters) {
        if (v.cluster() != cluster) {
            out.push_back(v);
            continue;
        }
        if (!first) {
            first = &v;
            insert_at = out.size();
        }
        balance += v.balance;
        credits += v.credits;
        reputation += v.reputation;
    }
    if (!first) throw Error(ErrorCode::UnknownCluster, "no voter belongs to cluster '" + cluster + "'");

    // Clone ids derive from the first identity's base id, so re-splitting is stable.
    std::string base = first->id;
    if (auto hash = base.find('#'); hash != std::string::npos && first->identity_cluster) base.resize(hash);

    std::vector<Voter> identities;
    identities.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        Voter v = *first;
        v.id = i == 0 ? base : base + "#" + std::to_string(i + 1);
        v.identity_cluster = cluster;
        v.balance = balance / k;
        v.credits = credits / k;
        v.reputation = i == 0 ? reputation : Quantity(0);
        identities.push_back(std::move(v));
    }
    out.insert(out.begin() + static_cast<std::ptrdiff_t>(insert_at), identities.begin(), identities.end());
    return out;
}

}  // namespace tedm::governance
