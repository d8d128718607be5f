#include "tedm/error.hpp"

namespace tedm {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DegenerateDistribution: return "DegenerateDistribution";
        case ErrorCode::SupplyUnderflow: return "SupplyUnderflow";
        case ErrorCode::ConstraintViolation: return "ConstraintViolation";
        case ErrorCode::InsufficientTreasury: return "InsufficientTreasury";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::InvalidDecay: return "InvalidDecay";
        case ErrorCode::DuplicateVote: return "DuplicateVote";
        case ErrorCode::UnknownCluster: return "UnknownCluster";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::UnknownEnumValue: return "UnknownEnumValue";
        case ErrorCode::UnknownPreset: return "UnknownPreset";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

std::string Error::describe() const {
    std::string out(to_string(code_));
    if (epoch_) out += " at epoch " + std::to_string(*epoch_);
    if (!path_.empty()) out += " at " + path_;
    out += ": ";
    out += what();
    return out;
}

}  // namespace tedm
