#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "cnl2asp/cnl/ast.h"
#include "cnl2asp/cnl/token.h"

namespace cnl2asp::cnl {

/// Names the parser needs to split phrases: concepts (possibly multi-word), their attribute
/// names, and constants. Filled from definitions before standard sentences are parsed and
/// extended with every concept_name a sentence mentions.
class Lexicon {
public:
    void add_concept(const std::string& key);
    void add_attribute(const std::string& concept_name, const std::string& attribute);
    void add_constant(const std::string& name) { constants_.insert(name); }

    bool is_concept(const std::string& key) const;
    bool is_constant(const std::string& name) const { return constants_.count(name) != 0; }
    const std::vector<std::string>& attributes_of(const std::string& concept_name) const;
    const std::set<std::string>& constants() const { return constants_; }

    /// Longest concept_name name starting at words[0..]; the last word may be plural.
    std::size_t match_concept(const std::vector<std::string>& words, std::string* key = nullptr) const;
    /// Singular concept_name key for a (possibly plural) single word, or empty.
    std::string singular(const std::string& word) const;

    /// Records the names a proposition introduces.
    void learn(const Proposition& prop);

private:
    std::vector<std::string> concepts_;
    std::map<std::string, std::vector<std::string>> attributes_;
    std::set<std::string> constants_;
};

struct ParseResult {
    std::vector<Proposition> propositions;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return diagnostics.empty(); }
};

/// Parses every dot-terminated sentence. On a syntax error the sentence is skipped and the
/// diagnostic recorded; parsing continues with the next sentence.
ParseResult parse_document(const std::vector<Token>& tokens);

/// Convenience: tokenize + parse. Lexer errors become diagnostics.
ParseResult parse_text(std::string_view source);

/// Variable iff no lower-case letter and at least one upper-case letter; NumberValue iff all
/// digits (optionally signed); registered names become ConstantRef; otherwise StringValue.
Term classify_term(const Token& token, const std::set<std::string>& constants = {});
Term classify_word(const std::string& text, const std::set<std::string>& constants = {});

/// Canonical CNL text of a proposition, re-parseable to the same structure.
std::string render_cnl(const Proposition& prop);
/// Structural dump without source spans; equal dumps mean structurally identical ASTs.
std::string dump(const Proposition& prop);

}  // namespace cnl2asp::cnl
