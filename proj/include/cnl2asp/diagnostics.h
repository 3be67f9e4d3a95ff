#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cnl2asp {

struct SourceSpan {
    std::size_t offset = 0;
    std::size_t length = 0;
    int line = 1;
    int column = 1;
};

enum class ErrorKind {
    // parse errors
    IllegalCharacter,
    SyntaxError,
    UnterminatedProposition,
    // semantic errors
    ConflictingSignature,
    EmptyRange,
    MisalignedStep,
    UnknownAttribute,
    ArityConflict,
    LengthMismatch,
    UnboundWhereVariable,
    MissingAttribute,
    NonGroundFact,
    MixedModality,
    UnknownConcept,
    UndefinedSignature,
    NonNumericSum,
    ConflictingDirections,
    LabelOutOfRange,
    WindowExceedsRange,
    UnsafeRule,
};

const char* kind_name(ErrorKind kind);
bool is_parse_error(ErrorKind kind);

struct Diagnostic {
    ErrorKind kind = ErrorKind::SyntaxError;
    SourceSpan span;
    std::string message;

    /// "line:column: Kind: message"
    std::string format() const;
};

class CompileError : public std::runtime_error {
public:
    CompileError(ErrorKind kind, SourceSpan span, const std::string& message);
    CompileError(ErrorKind kind, const std::string& message);

    const Diagnostic& diagnostic() const { return diag_; }

private:
    Diagnostic diag_;
};

}  // namespace cnl2asp
