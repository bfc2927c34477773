#include "jetflow/error.hpp"

namespace jetflow {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::ModeMismatch: return "ModeMismatch";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotDivisible: return "NotDivisible";
    case ErrorKind::Inconsistent: return "Inconsistent";
    case ErrorKind::NotOnSubgroup: return "NotOnSubgroup";
    case ErrorKind::NoSuchFactor: return "NoSuchFactor";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::StencilOutsidePlateau: return "StencilOutsidePlateau";
    case ErrorKind::Parse: return "Parse";
    }
    return "Unknown";
}

bool is_mathematical(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::NotDivisible:
    case ErrorKind::Inconsistent:
    case ErrorKind::NotOnSubgroup:
    case ErrorKind::NoSuchFactor:
    case ErrorKind::NonFinite:
    case ErrorKind::StencilOutsidePlateau:
        return true;
    default:
        return false;
    }
}

} // namespace jetflow
