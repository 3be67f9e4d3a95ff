#include <cctype>

#include "cnl2asp/cnl/token.h"

namespace cnl2asp::cnl {

const char* token_kind_name(TokenKind kind) {
    switch (kind) {
        case TokenKind::Word: return "word";
        case TokenKind::Number: return "number";
        case TokenKind::Time: return "time-literal";
        case TokenKind::Date: return "date-literal";
        case TokenKind::Punctuation: return "punctuation";
        case TokenKind::Symbol: return "symbol";
        case TokenKind::Quoted: return "quoted-string";
    }
    return "?";
}

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\n') {
                advance(1);
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
                advance(1);
                continue;
            }
            if (is_digit(c)) {
                out.push_back(numeric());
            } else if (is_alpha(c)) {
                out.push_back(word());
            } else if (c == ',' || c == '.') {
                out.push_back(make(TokenKind::Punctuation, 1));
            } else if (c == '"') {
                out.push_back(quoted());
            } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '|' || c == '(' || c == ')' ||
                       c == '=' || c == '<' || c == '>' || c == '!') {
                out.push_back(make(TokenKind::Symbol, 1));
            } else {
                throw CompileError(ErrorKind::IllegalCharacter, span_at(pos_, 1),
                                   "illegal character '" + printable(c) + "'");
            }
        }
        return out;
    }

private:
    static std::string printable(char c) {
        auto u = static_cast<unsigned char>(c);
        if (u >= 0x20 && u < 0x7f) return std::string(1, c);
        static const char* hex = "0123456789abcdef";
        return std::string("\\x") + hex[u >> 4] + hex[u & 0xf];
    }

    SourceSpan span_at(std::size_t offset, std::size_t length) const {
        return SourceSpan{offset, length, line_, static_cast<int>(offset - line_start_) + 1};
    }

    void advance(std::size_t n) {
        for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
            if (src_[pos_] == '\n') {
                ++line_;
                line_start_ = pos_ + 1;
            }
            ++pos_;
        }
    }

    Token make(TokenKind kind, std::size_t length) {
        Token t{kind, std::string(src_.substr(pos_, length)), span_at(pos_, length)};
        advance(length);
        return t;
    }

    char at(std::size_t i) const { return i < src_.size() ? src_[i] : '\0'; }

    std::size_t digits_from(std::size_t i) const {
        std::size_t n = 0;
        while (is_digit(at(i + n))) ++n;
        return n;
    }

    Token numeric() {
        std::size_t n = digits_from(pos_);
        // DD/MM/YYYY
        if (n <= 2 && at(pos_ + n) == '/') {
            std::size_t m = digits_from(pos_ + n + 1);
            if (m >= 1 && m <= 2 && at(pos_ + n + 1 + m) == '/') {
                std::size_t y = digits_from(pos_ + n + m + 2);
                if (y == 4 && !is_alpha(at(pos_ + n + m + 2 + y))) return make(TokenKind::Date, n + m + 2 + y);
            }
        }
        // HH:MM AM|PM
        if (n <= 2 && at(pos_ + n) == ':') {
            std::size_t m = digits_from(pos_ + n + 1);
            if (m == 2) {
                std::size_t i = pos_ + n + 1 + m;
                std::size_t j = i;
                while (at(j) == ' ' || at(j) == '\t') ++j;
                if ((at(j) == 'A' || at(j) == 'P') && at(j + 1) == 'M' && !is_alpha(at(j + 2)) &&
                    !is_digit(at(j + 2)) && at(j + 2) != '_')
                    return make(TokenKind::Time, j + 2 - pos_);
            }
            throw CompileError(ErrorKind::IllegalCharacter, span_at(pos_ + n, 1),
                               "illegal character ':' (time literals look like 07:30 AM)");
        }
        return make(TokenKind::Number, n);
    }

    Token word() {
        std::size_t n = 0;
        while (is_alpha(at(pos_ + n)) || is_digit(at(pos_ + n)) || at(pos_ + n) == '_') ++n;
        return make(TokenKind::Word, n);
    }

    Token quoted() {
        std::size_t n = 1;
        while (pos_ + n < src_.size() && src_[pos_ + n] != '"' && src_[pos_ + n] != '\n') ++n;
        if (at(pos_ + n) != '"')
            throw CompileError(ErrorKind::IllegalCharacter, span_at(pos_, 1), "unterminated quoted string");
        return make(TokenKind::Quoted, n + 1);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    std::size_t line_start_ = 0;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace cnl2asp::cnl
