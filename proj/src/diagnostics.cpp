#include "cnl2asp/diagnostics.h"

namespace cnl2asp {

const char* kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::IllegalCharacter: return "IllegalCharacter";
        case ErrorKind::SyntaxError: return "SyntaxError";
        case ErrorKind::UnterminatedProposition: return "UnterminatedProposition";
        case ErrorKind::ConflictingSignature: return "ConflictingSignature";
        case ErrorKind::EmptyRange: return "EmptyRange";
        case ErrorKind::MisalignedStep: return "MisalignedStep";
        case ErrorKind::UnknownAttribute: return "UnknownAttribute";
        case ErrorKind::ArityConflict: return "ArityConflict";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::UnboundWhereVariable: return "UnboundWhereVariable";
        case ErrorKind::MissingAttribute: return "MissingAttribute";
        case ErrorKind::NonGroundFact: return "NonGroundFact";
        case ErrorKind::MixedModality: return "MixedModality";
        case ErrorKind::UnknownConcept: return "UnknownConcept";
        case ErrorKind::UndefinedSignature: return "UndefinedSignature";
        case ErrorKind::NonNumericSum: return "NonNumericSum";
        case ErrorKind::ConflictingDirections: return "ConflictingDirections";
        case ErrorKind::LabelOutOfRange: return "LabelOutOfRange";
        case ErrorKind::WindowExceedsRange: return "WindowExceedsRange";
        case ErrorKind::UnsafeRule: return "UnsafeRule";
    }
    return "Unknown";
}

bool is_parse_error(ErrorKind kind) {
    return kind == ErrorKind::IllegalCharacter || kind == ErrorKind::SyntaxError ||
           kind == ErrorKind::UnterminatedProposition;
}

std::string Diagnostic::format() const {
    return std::to_string(span.line) + ":" + std::to_string(span.column) + ": " + kind_name(kind) + ": " +
           message;
}

CompileError::CompileError(ErrorKind kind, SourceSpan span, const std::string& message)
    : std::runtime_error(message), diag_{kind, span, message} {}

CompileError::CompileError(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), diag_{kind, SourceSpan{}, message} {}

}  // namespace cnl2asp
