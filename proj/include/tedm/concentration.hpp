#pragma once

#include "tedm/quantity.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace tedm::metrics {

struct Holding {
    std::string entity;
    Quantity weight;
};

/// Snapshot of per-entity balances or voting power. Weights are non-negative;
/// the constructor enforces that, metric functions enforce non-degeneracy.
class HolderDistribution {
public:
    HolderDistribution() = default;
    explicit HolderDistribution(std::vector<Holding> entries);
    /// Anonymous entities named h0, h1, ...
    static HolderDistribution from_weights(const std::vector<Quantity>& weights);

    const std::vector<Holding>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    Quantity total() const;
    std::vector<Quantity> weights() const;

    void add(std::string entity, Quantity weight);

    friend bool operator==(const HolderDistribution&, const HolderDistribution&) = default;

private:
    std::vector<Holding> entries_;
};

struct ConcentrationReport {
    double gini = 0.0;
    Quantity gini_exact;
    std::size_t nakamoto = 0;
    Quantity total_weight;
    std::size_t holder_count = 0;
    /// (k, cumulative share of the k largest holders); the last k is always holder_count.
    std::vector<std::pair<std::size_t, double>> top_k_shares;

    friend bool operator==(const ConcentrationReport&, const ConcentrationReport&) = default;
};

/// Exact Gini coefficient via the sorted-rank identity
///   G = sum_i (2i - n - 1) x_(i) / (n * sum x),  x_(i) ascending, i = 1..n
/// which equals the mean-absolute-difference double sum over all pairs.
Quantity gini_exact(const HolderDistribution& dist);
double gini(const HolderDistribution& dist);

/// Smallest k such that the k largest weights strictly exceed half the total.
std::size_t nakamoto(const HolderDistribution& dist);

/// top_k_prefix bounds how many leading k values are listed; the full-set entry
/// (k = holder_count, share 1) is always appended.
ConcentrationReport concentration_report(const HolderDistribution& dist, std::size_t top_k_prefix = 10);

}  // namespace tedm::metrics
