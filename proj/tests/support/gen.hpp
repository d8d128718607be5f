#pragma once

// Hand-rolled generators for property tests. Every generator draws from one
// seeded engine so a failing case is reproduced from its seed alone.

#include "tedm/quantity.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace gen {

using tedm::Quantity;

class Gen {
public:
    explicit Gen(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [lo, hi].
    long long between(long long lo, long long hi) {
        return lo + static_cast<long long>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    bool chance(double p) { return unit() < p; }

    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Decimal with `places` fractional digits in [0, max].
    Quantity decimal(long long max, int places) {
        long long scale = 1;
        for (int i = 0; i < places; ++i) scale *= 10;
        return Quantity(between(0, max * scale), scale);
    }

    /// Non-negative weights in [0, max] with a positive total. Shapes alternate between
    /// uniform, heavy-tailed, a single whale, ties and sparse (many zeros).
    std::vector<Quantity> distribution(std::size_t max_n, long long max = 1'000'000) {
        std::size_t n = static_cast<std::size_t>(between(1, static_cast<long long>(max_n)));
        std::vector<Quantity> w(n);
        switch (between(0, 4)) {
            case 0:
                for (auto& v : w) v = decimal(max, static_cast<int>(between(0, 6)));
                break;
            case 1:
                for (auto& v : w) {
                    double x = std::pow(1.0 - unit(), -1.0 / 1.1);
                    v = Quantity(std::min<long long>(max, static_cast<long long>(x * 100)));
                }
                break;
            case 2:
                for (auto& v : w) v = Quantity(between(0, 1000));
                w[static_cast<std::size_t>(between(0, static_cast<long long>(n) - 1))] = Quantity(max);
                break;
            case 3: {
                Quantity tie(between(1, max));
                for (auto& v : w) v = chance(0.7) ? tie : Quantity(between(0, max));
                break;
            }
            default:
                for (auto& v : w) v = chance(0.8) ? Quantity(0) : Quantity(between(1, max));
                break;
        }
        Quantity total = 0;
        for (const auto& v : w) total += v;
        if (total == 0) w[0] = Quantity(between(1, max));
        return w;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace gen
