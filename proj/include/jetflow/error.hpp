#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace jetflow {

enum class ErrorKind {
    ModeMismatch,
    DimensionMismatch,
    IndexOutOfRange,
    InvalidArgument,
    NotDivisible,
    Inconsistent,
    NotOnSubgroup,
    NoSuchFactor,
    NonFinite,
    StencilOutsidePlateau,
    Parse,
};

std::string_view to_string(ErrorKind kind);

// Mathematical failures (as opposed to bad input) map to a distinct CLI exit code.
bool is_mathematical(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail, std::optional<unsigned> order = std::nullopt)
        : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
          kind_(kind), detail_(detail), order_(order) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& detail() const noexcept { return detail_; }
    std::optional<unsigned> order() const noexcept { return order_; }

private:
    ErrorKind kind_;
    std::string detail_;
    std::optional<unsigned> order_;
};

} // namespace jetflow
