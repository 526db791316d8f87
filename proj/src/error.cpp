#include "hetalign/error.hpp"

#include <utility>

namespace hetalign {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedLine: return "MalformedLine";
        case ErrorCode::UnknownNode: return "UnknownNode";
        case ErrorCode::DuplicateEdge: return "DuplicateEdge";
        case ErrorCode::SelfLoop: return "SelfLoop";
        case ErrorCode::DuplicateColorAssignment: return "DuplicateColorAssignment";
        case ErrorCode::InfeasibleSpec: return "InfeasibleSpec";
        case ErrorCode::InvalidNode: return "InvalidNode";
        case ErrorCode::UnwarmedSource: return "UnwarmedSource";
        case ErrorCode::DuplicatePair: return "DuplicatePair";
        case ErrorCode::SimilarityOutOfRange: return "SimilarityOutOfRange";
        case ErrorCode::ColorInconsistentSeed: return "ColorInconsistentSeed";
        case ErrorCode::EmptySeedList: return "EmptySeedList";
        case ErrorCode::InvalidSchema: return "InvalidSchema";
        case ErrorCode::InvalidParameter: return "InvalidParameter";
        case ErrorCode::IsolatedNodeWithoutSelfLoop: return "IsolatedNodeWithoutSelfLoop";
        case ErrorCode::DeterminismViolation: return "DeterminismViolation";
        case ErrorCode::IoFailure: return "IoFailure";
    }
    return "Unknown";
}

namespace {

std::string format_message(ErrorCode code, const std::string& message, std::size_t line) {
    std::string out(to_string(code));
    if (line != 0) {
        out += " at line " + std::to_string(line);
    }
    if (!message.empty()) {
        out += ": " + message;
    }
    return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::size_t line, std::string source)
    : std::runtime_error(format_message(code, message, line)), code_(code), line_(line), source_(std::move(source)) {}

}  // namespace hetalign
