#pragma once

#include <stdexcept>
#include <string>

namespace qrf {

// Error taxonomy. Validation covers malformed files and schema violations;
// the remaining kinds are runtime preconditions of individual operations.
enum class ErrorKind {
    Validation,
    Size,
    Dimension,
    Normalization,
    Symmetry,
    Constraint,
    Overlap,
    Convention,
    Precondition,
    Domain,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

inline bool is_input_error(ErrorKind k) { return k == ErrorKind::Validation; }

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Size: return "size";
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::Normalization: return "normalization";
    case ErrorKind::Symmetry: return "symmetry";
    case ErrorKind::Constraint: return "constraint";
    case ErrorKind::Overlap: return "overlap";
    case ErrorKind::Convention: return "convention";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Domain: return "domain";
    }
    return "unknown";
}

} // namespace qrf
