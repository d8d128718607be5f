#include "tedm/snapshot.hpp"

#include "tedm/csv.hpp"
#include "tedm/error.hpp"

#include <algorithm>
#include <charconv>

namespace tedm::snapshot {

namespace {

std::string where(const csv::Table& t, std::size_t row, std::string_view column) {
    return "line " + std::to_string(t.line_numbers[row]) + ", column " + std::string(column);
}

std::size_t require_column(const csv::Table& t, std::string_view name) {
    std::size_t c = t.column(name);
    if (c == std::string::npos)
        throw Error(ErrorCode::SchemaError, "missing CSV column '" + std::string(name) + "'", "line 1");
    return c;
}

Quantity cell_quantity(const csv::Table& t, std::size_t row, std::size_t col) {
    try {
        return parse_quantity(t.rows[row][col]);
    } catch (const Error& e) {
        throw Error(ErrorCode::SchemaError, e.what(), where(t, row, t.header[col]));
    }
}

std::int64_t cell_integer(const csv::Table& t, std::size_t row, std::size_t col) {
    const std::string& s = t.rows[row][col];
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw Error(ErrorCode::SchemaError, "expected an integer, got '" + s + "'", where(t, row, t.header[col]));
    return v;
}

}  // namespace

std::vector<HolderRow> parse_holder_csv(const std::string& text) {
    csv::Table t = csv::parse(text);
    std::size_t entity = require_column(t, "entity");
    std::size_t weight = require_column(t, "weight");
    std::size_t lock_end = t.column("lock_end");

    std::vector<HolderRow> rows;
    rows.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        HolderRow row{t.rows[r][entity], cell_quantity(t, r, weight), std::nullopt};
        if (row.weight < 0)
            throw Error(ErrorCode::SchemaError, "negative weight", where(t, r, "weight"));
        if (lock_end != std::string::npos && !t.rows[r][lock_end].empty()) row.lock_end = cell_integer(t, r, lock_end);
        rows.push_back(std::move(row));
    }
    return rows;
}

metrics::HolderDistribution to_distribution(const std::vector<HolderRow>& rows, const std::optional<EscrowView>& escrow) {
    std::vector<metrics::Holding> holdings;
    holdings.reserve(rows.size());
    for (const auto& row : rows) {
        if (!escrow) {
            holdings.push_back({row.entity, row.weight});
            continue;
        }
        governance::Voter v;
        v.id = row.entity;
        v.balance = row.weight;
        v.lock_max = escrow->lock_max;
        v.lock_remaining = row.lock_end ? std::clamp<std::int64_t>(*row.lock_end - escrow->current_epoch, 0, escrow->lock_max) : 0;
        holdings.push_back({row.entity, governance::power_ve(v)});
    }
    return metrics::HolderDistribution(std::move(holdings));
}

VoteSet parse_vote_csv(const std::string& text) {
    csv::Table t = csv::parse(text);
    std::size_t id = require_column(t, "id");
    std::size_t balance = require_column(t, "balance");
    std::size_t lock_remaining = t.column("lock_remaining");
    std::size_t lock_max = t.column("lock_max");
    std::size_t reputation = t.column("reputation");
    std::size_t credits = t.column("credits");
    std::size_t cluster = t.column("cluster");
    std::size_t choice = t.column("choice");
    std::size_t spent = t.column("credits_spent");

    auto present = [&](std::size_t col, std::size_t r) { return col != std::string::npos && !t.rows[r][col].empty(); };

    VoteSet set;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        governance::Voter v;
        v.id = t.rows[r][id];
        v.balance = cell_quantity(t, r, balance);
        if (present(lock_remaining, r)) v.lock_remaining = cell_integer(t, r, lock_remaining);
        if (present(lock_max, r)) v.lock_max = cell_integer(t, r, lock_max);
        if (present(reputation, r)) v.reputation = cell_quantity(t, r, reputation);
        if (present(credits, r)) v.credits = cell_quantity(t, r, credits);
        if (present(cluster, r)) v.identity_cluster = t.rows[r][cluster];
        try {
            v.check();
        } catch (const Error& e) {
            throw Error(ErrorCode::SchemaError, e.what(), "line " + std::to_string(t.line_numbers[r]));
        }
        if (present(choice, r)) {
            governance::Ballot b;
            b.voter = v.id;
            b.choice = governance::kChoiceNames.parse(t.rows[r][choice], "vote choice", where(t, r, "choice"));
            if (present(spent, r)) b.credits_spent = cell_quantity(t, r, spent);
            set.ballots.push_back(std::move(b));
        }
        set.voters.push_back(std::move(v));
    }
    return set;
}

}  // namespace tedm::snapshot
