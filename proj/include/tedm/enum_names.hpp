#pragma once

#include "tedm/error.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>

namespace tedm {

/// Case-insensitive, treats '-', '_' and ' ' as the same separator.
std::string fold_enum_token(std::string_view text);

/// Edit distance between folded tokens.
std::size_t edit_distance(std::string_view a, std::string_view b);

/// Canonical spellings for an enum; aliases map extra inputs onto values.
template <typename E, std::size_t N, std::size_t A = 0>
struct EnumNames {
    std::array<std::pair<E, std::string_view>, N> canonical;
    std::array<std::pair<E, std::string_view>, A> aliases{};

    std::string_view name(E value) const {
        for (const auto& [v, n] : canonical)
            if (v == value) return n;
        return "?";
    }

    bool try_parse(std::string_view text, E& out) const {
        const std::string folded = fold_enum_token(text);
        for (const auto& [v, n] : canonical)
            if (fold_enum_token(n) == folded) { out = v; return true; }
        for (const auto& [v, n] : aliases)
            if (fold_enum_token(n) == folded) { out = v; return true; }
        return false;
    }

    /// Throws UnknownEnumValue naming the closest canonical spelling.
    E parse(std::string_view text, std::string_view what, const std::string& path = {}) const {
        E out{};
        if (try_parse(text, out)) return out;
        const std::string folded = fold_enum_token(text);
        std::string_view best;
        std::size_t best_distance = static_cast<std::size_t>(-1);
        for (const auto& [v, n] : canonical) {
            std::size_t d = edit_distance(folded, fold_enum_token(n));
            if (d < best_distance) { best_distance = d; best = n; }
        }
        std::string message = "unknown " + std::string(what) + " '" + std::string(text) + "'";
        if (!best.empty()) message += "; did you mean '" + std::string(best) + "'?";
        message += " (allowed:";
        for (const auto& [v, n] : canonical) message += " " + std::string(n);
        message += ")";
        throw Error(ErrorCode::UnknownEnumValue, message, path);
    }
};

}  // namespace tedm
