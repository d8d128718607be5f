#pragma once

// Reference implementations used only by tests. They follow the textbook
// definitions directly and share no code with the library.

#include "tedm/quantity.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace oracle {

using tedm::Quantity;

/// Mean absolute difference over all ordered pairs divided by twice the mean:
///   G = sum_i sum_j |x_i - x_j| / (2 n^2 mean)
inline Quantity gini_double_sum(const std::vector<Quantity>& x) {
    const std::size_t n = x.size();
    Quantity total = 0;
    for (const auto& v : x) total += v;
    if (n == 0 || total == 0) throw std::domain_error("degenerate distribution");
    Quantity pair_sum = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) pair_sum += boost::multiprecision::abs(x[i] - x[j]);
    Quantity mean = total / static_cast<long long>(n);
    return pair_sum / (2 * Quantity(static_cast<long long>(n * n)) * mean);
}

/// Literal subset enumeration: the smallest coalition whose weight is a strict majority.
inline std::size_t nakamoto_subsets(const std::vector<Quantity>& x) {
    const std::size_t n = x.size();
    if (n > 22) throw std::length_error("subset enumeration limited to 22 holders");
    Quantity total = 0;
    for (const auto& v : x) total += v;
    std::size_t best = n + 1;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        auto size = static_cast<std::size_t>(__builtin_popcount(mask));
        if (size >= best) continue;
        Quantity sum = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) sum += x[i];
        if (sum * 2 > total) best = size;
    }
    if (best > n) throw std::domain_error("no majority coalition");
    return best;
}

/// Exhaustive over coalitions by size: best[c] is the heaviest coalition of exactly c
/// holders, built by a 0/1 knapsack over holders in input order (no sorting).
inline std::size_t nakamoto_by_size(const std::vector<Quantity>& x) {
    const std::size_t n = x.size();
    Quantity total = 0;
    for (const auto& v : x) total += v;
    std::vector<std::optional<Quantity>> best(n + 1);
    best[0] = Quantity(0);
    for (const auto& w : x)
        for (std::size_t c = n; c >= 1; --c)
            if (best[c - 1]) {
                Quantity candidate = *best[c - 1] + w;
                if (!best[c] || candidate > *best[c]) best[c] = candidate;
            }
    for (std::size_t c = 1; c <= n; ++c)
        if (best[c] && *best[c] * 2 > total) return c;
    throw std::domain_error("no majority coalition");
}

}  // namespace oracle
