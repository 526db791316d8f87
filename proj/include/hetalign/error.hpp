#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hetalign {

enum class ErrorCode {
    MalformedLine,
    UnknownNode,
    DuplicateEdge,
    SelfLoop,
    DuplicateColorAssignment,
    InfeasibleSpec,
    InvalidNode,
    UnwarmedSource,
    DuplicatePair,
    SimilarityOutOfRange,
    ColorInconsistentSeed,
    EmptySeedList,
    InvalidSchema,
    InvalidParameter,
    IsolatedNodeWithoutSelfLoop,
    DeterminismViolation,
    IoFailure,
};

std::string_view to_string(ErrorCode code);

/// Library-wide exception. `line` is 1-based when the error came from a text
/// stream and 0 otherwise. `source` names the input stream for readers that
/// consume more than one (e.g. "edges" or "colors").
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::size_t line = 0, std::string source = {});

    ErrorCode code() const noexcept { return code_; }
    std::size_t line() const noexcept { return line_; }
    const std::string& source() const noexcept { return source_; }

private:
    ErrorCode code_;
    std::size_t line_;
    std::string source_;
};

}  // namespace hetalign
