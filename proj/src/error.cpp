#include "tamed/error.hpp"

namespace tamed {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::NotCommensurate: return "NotCommensurate";
        case ErrorKind::InvalidRange: return "InvalidRange";
        case ErrorKind::NotDivisible: return "NotDivisible";
        case ErrorKind::NonFiniteState: return "NonFiniteState";
        case ErrorKind::GridMismatch: return "GridMismatch";
        case ErrorKind::InsufficientData: return "InsufficientData";
        case ErrorKind::NonPositiveValue: return "NonPositiveValue";
        case ErrorKind::UnknownProblem: return "UnknownProblem";
        case ErrorKind::ConfigError: return "ConfigError";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace tamed
