#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tamed {

enum class ErrorKind {
    NotCommensurate,
    InvalidRange,
    NotDivisible,
    NonFiniteState,
    GridMismatch,
    InsufficientData,
    NonPositiveValue,
    UnknownProblem,
    ConfigError,
    IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Library error. `kind()` is the stable machine-readable tag; `what()` is
/// for humans. NonFiniteState errors carry the index of the failing step.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message,
          std::optional<std::int64_t> step = std::nullopt)
        : std::runtime_error(message), kind_(kind), step_(step) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<std::int64_t> step() const noexcept { return step_; }

private:
    ErrorKind kind_;
    std::optional<std::int64_t> step_;
};

}  // namespace tamed
