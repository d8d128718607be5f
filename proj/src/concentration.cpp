#include "tedm/concentration.hpp"

#include "tedm/error.hpp"

#include <algorithm>
#include <functional>

namespace tedm::metrics {

HolderDistribution::HolderDistribution(std::vector<Holding> entries) {
    entries_.reserve(entries.size());
    for (auto& h : entries) add(std::move(h.entity), std::move(h.weight));
}

HolderDistribution HolderDistribution::from_weights(const std::vector<Quantity>& weights) {
    HolderDistribution dist;
    for (std::size_t i = 0; i < weights.size(); ++i) dist.add("h" + std::to_string(i), weights[i]);
    return dist;
}

void HolderDistribution::add(std::string entity, Quantity weight) {
    if (weight < 0)
        throw Error(ErrorCode::InvalidArgument, "negative weight for entity '" + entity + "'");
    entries_.push_back({std::move(entity), std::move(weight)});
}

Quantity HolderDistribution::total() const {
    Quantity sum = 0;
    for (const auto& h : entries_) sum += h.weight;
    return sum;
}

std::vector<Quantity> HolderDistribution::weights() const {
    std::vector<Quantity> out;
    out.reserve(entries_.size());
    for (const auto& h : entries_) out.push_back(h.weight);
    return out;
}

namespace {

Quantity require_positive_total(const HolderDistribution& dist) {
    if (dist.size() == 0)
        throw Error(ErrorCode::DegenerateDistribution, "distribution has no entries");
    Quantity total = dist.total();
    if (total == 0)
        throw Error(ErrorCode::DegenerateDistribution, "all weights are zero");
    return total;
}

}  // namespace

Quantity gini_exact(const HolderDistribution& dist) {
    Quantity total = require_positive_total(dist);
    std::vector<Quantity> sorted = dist.weights();
    std::sort(sorted.begin(), sorted.end());

    const auto n = static_cast<long long>(sorted.size());
    Quantity weighted = 0;
    for (long long i = 0; i < n; ++i) weighted += sorted[i] * (2 * (i + 1) - n - 1);
    return weighted / (total * n);
}

double gini(const HolderDistribution& dist) { return to_double(gini_exact(dist)); }

std::size_t nakamoto(const HolderDistribution& dist) {
    Quantity total = require_positive_total(dist);
    std::vector<Quantity> sorted = dist.weights();
    std::sort(sorted.begin(), sorted.end(), std::greater<>());

    Quantity running = 0;
    std::size_t k = 0;
    for (const auto& w : sorted) {
        running += w;
        ++k;
        if (running * 2 > total) return k;
    }
    // unreachable: the full set always holds the whole (positive) total
    return sorted.size();
}

ConcentrationReport concentration_report(const HolderDistribution& dist, std::size_t top_k_prefix) {
    ConcentrationReport report;
    report.total_weight = require_positive_total(dist);
    report.gini_exact = gini_exact(dist);
    report.gini = to_double(report.gini_exact);
    report.nakamoto = nakamoto(dist);
    report.holder_count = dist.size();

    std::vector<Quantity> sorted = dist.weights();
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    Quantity running = 0;
    const std::size_t listed = std::min(top_k_prefix, sorted.size());
    for (std::size_t k = 0; k < listed; ++k) {
        running += sorted[k];
        report.top_k_shares.emplace_back(k + 1, to_double(running / report.total_weight));
    }
    if (listed < sorted.size()) report.top_k_shares.emplace_back(sorted.size(), 1.0);
    return report;
}

}  // namespace tedm::metrics
