#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cnl2asp/diagnostics.h"

namespace cnl2asp::cnl {

enum class TokenKind {
    Word,
    Number,
    Time,         // "07:30 AM"
    Date,         // "01/01/2022"
    Punctuation,  // "," or "."
    Symbol,       // + - * / | ( ) = < > !
    Quoted,       // "a quoted string", quotes included
};

const char* token_kind_name(TokenKind kind);

struct Token {
    TokenKind kind = TokenKind::Word;
    std::string text;
    SourceSpan span;

    bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
    bool is_word(std::string_view t) const { return is(TokenKind::Word, t); }
    bool is_dot() const { return is(TokenKind::Punctuation, "."); }
    bool is_comma() const { return is(TokenKind::Punctuation, ","); }
};

/// Splits a CNL document into tokens. Whitespace is dropped; every other byte belongs to exactly
/// one token. Throws CompileError(IllegalCharacter) on bytes outside the accepted alphabet.
std::vector<Token> tokenize(std::string_view source);

}  // namespace cnl2asp::cnl
