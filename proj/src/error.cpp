#include "tcw/error.hpp"

namespace tcw {

std::string_view error_kind_name(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::CycleInCausality: return "CycleInCausality";
    case ErrorKind::SelfConflict: return "SelfConflict";
    case ErrorKind::ConflictCauseOverlap: return "ConflictCauseOverlap";
    case ErrorKind::UnknownEventId: return "UnknownEventId";
    case ErrorKind::DuplicateEventId: return "DuplicateEventId";
    case ErrorKind::SizeLimitExceeded: return "SizeLimitExceeded";
    case ErrorKind::NotAConfiguration: return "NotAConfiguration";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::NonPositiveOccurrence: return "NonPositiveOccurrence";
    case ErrorKind::FreeVarMismatch: return "FreeVarMismatch";
    case ErrorKind::NotApplicable: return "NotApplicable";
    case ErrorKind::PrefixNotClosed: return "PrefixNotClosed";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::UnboundProposition: return "UnboundProposition";
    case ErrorKind::FormulaNotClosed: return "FormulaNotClosed";
    case ErrorKind::NotWellFormed: return "NotWellFormed";
    case ErrorKind::ActuallyEquivalent: return "ActuallyEquivalent";
    case ErrorKind::DepthExceeded: return "DepthExceeded";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind),
      detail_(message)
{
}

Error::Error(ErrorKind kind, const std::string& message, SourcePos pos)
    : std::runtime_error(std::string(error_kind_name(kind)) + " at " + std::to_string(pos.line) +
                         ":" + std::to_string(pos.column) + ": " + message),
      kind_(kind), has_pos_(true), pos_(pos), detail_(message)
{
}

} // namespace tcw
