#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tedm {

enum class ErrorCode {
    DegenerateDistribution,
    SupplyUnderflow,
    ConstraintViolation,
    InsufficientTreasury,
    InvalidArgument,
    BudgetExceeded,
    InvalidDecay,
    DuplicateVote,
    UnknownCluster,
    SchemaError,
    UnknownEnumValue,
    UnknownPreset,
    IoError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; callers branch on code().
///
/// Simulation paths attach the epoch at which a step failed so that a
/// scenario author can locate the offending flow or shock.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message, std::string path = {})
        : std::runtime_error(std::move(message)), code_(code), path_(std::move(path)) {}

    ErrorCode code() const noexcept { return code_; }
    /// JSON pointer or "line:col" location for parse-time errors; empty otherwise.
    const std::string& path() const noexcept { return path_; }
    std::optional<std::int64_t> epoch() const noexcept { return epoch_; }

    Error with_epoch(std::int64_t epoch) const {
        Error copy = *this;
        copy.epoch_ = epoch;
        return copy;
    }

    std::string describe() const;

private:
    ErrorCode code_;
    std::string path_;
    std::optional<std::int64_t> epoch_;
};

}  // namespace tedm
