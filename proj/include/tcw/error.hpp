#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tcw {

enum class ErrorKind {
    SyntaxError,
    CycleInCausality,
    SelfConflict,
    ConflictCauseOverlap,
    UnknownEventId,
    DuplicateEventId,
    SizeLimitExceeded,
    NotAConfiguration,
    ArityMismatch,
    NonPositiveOccurrence,
    FreeVarMismatch,
    NotApplicable,
    PrefixNotClosed,
    UnboundVariable,
    UnboundProposition,
    FormulaNotClosed,
    NotWellFormed,
    ActuallyEquivalent,
    DepthExceeded,
    InvalidArgument,
};

std::string_view error_kind_name(ErrorKind kind);

// Source position of a parse error. Offsets are 0-based, line/column 1-based.
struct SourcePos {
    std::size_t offset = 0;
    std::size_t line = 1;
    std::size_t column = 1;
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message);
    Error(ErrorKind kind, const std::string& message, SourcePos pos);

    ErrorKind kind() const noexcept { return kind_; }
    bool has_position() const noexcept { return has_pos_; }
    const SourcePos& position() const noexcept { return pos_; }
    const std::string& detail() const noexcept { return detail_; }

  private:
    ErrorKind kind_;
    bool has_pos_ = false;
    SourcePos pos_;
    std::string detail_;
};

} // namespace tcw
