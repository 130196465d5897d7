#pragma once

#include <stdexcept>
#include <string>

namespace latdef {

// Input fails a structural precondition (zero vector, common factor, det != 1).
struct NotPrimitiveError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ZeroVectorError : NotPrimitiveError {
    using NotPrimitiveError::NotPrimitiveError;
};

// Requested polygon or locus level would exceed the configured size cap.
struct LevelTooDeepError : std::length_error {
    explicit LevelTooDeepError(int level, int max_level)
        : std::length_error("level " + std::to_string(level) +
                            " exceeds configured maximum " + std::to_string(max_level)),
          level(level), max_level(max_level) {}
    int level;
    int max_level;
};

// A corner-locus edge failed its midpoint active-set validation.
struct EdgeValidationError : std::runtime_error {
    explicit EdgeValidationError(int from, int to, const std::string& detail)
        : std::runtime_error("edge " + std::to_string(from) + "->" + std::to_string(to) +
                             " failed midpoint validation: " + detail),
          from(from), to(to) {}
    int from;
    int to;
};

struct UnsupportedFormatError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct VertexOutsideDiscError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace latdef
