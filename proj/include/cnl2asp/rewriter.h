#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cnl2asp/asp/ast.h"
#include "cnl2asp/cnl/ast.h"
#include "cnl2asp/diagnostics.h"
#include "cnl2asp/registry.h"

namespace cnl2asp {

struct CompiledProposition {
    std::size_t index = 0;  // position in the source document
    cnl::Proposition::Kind kind = cnl::Proposition::Kind::DomainDefinition;
    SourceSpan span;
    std::vector<asp::Statement> statements;
};

struct CompileResult {
    std::vector<CompiledProposition> propositions;  // source order, failed ones omitted
    std::vector<Diagnostic> diagnostics;
    Registry registry;

    bool ok() const { return diagnostics.empty(); }
    bool has_parse_errors() const;
    std::vector<asp::Statement> statements() const;
    /// One statement per line, in source order.
    std::string program() const;
};

/// Translates parsed propositions. Definitions are processed before the sentences that use
/// them; output keeps source order. A failing proposition yields a diagnostic and no output.
CompileResult compile_document(const std::vector<cnl::Proposition>& propositions);

/// Tokenizes, parses and compiles. Parse diagnostics come first.
CompileResult compile_source(std::string_view source);

/// Operator for the violation of a required comparison.
asp::CmpOp negate_condition(asp::CmpOp op);

}  // namespace cnl2asp
