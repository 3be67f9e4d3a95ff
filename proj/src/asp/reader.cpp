#include <cctype>
#include <stdexcept>

#include "cnl2asp/asp/ast.h"

namespace cnl2asp::asp {

namespace {

struct Tok {
    enum class Kind { Ident, Var, Number, String, Op, End };
    Kind kind;
    std::string text;
    std::size_t offset;
};

std::vector<Tok> lex(const std::string& src) {
    static const char* ops[] = {":-", ":~", "..", "!=", "<=", ">=", "#count", "#sum", "#min", "#max",
                                ".",  ",",  ";",  ":",  "(",  ")",  "{",      "}",    "[",    "]",
                                "@",  "|",  "+",  "-",  "*",  "/",  "\\",     "=",    "<",    ">"};
    std::vector<Tok> out;
    std::size_t i = 0;
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '%') {
            while (i < src.size() && src[i] != '\n') ++i;
            continue;
        }
        std::size_t start = i;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) ++i;
            std::string word = src.substr(start, i - start);
            bool var = std::isupper(static_cast<unsigned char>(c)) ||
                       (c == '_' && (word.size() == 1 || !std::islower(static_cast<unsigned char>(word[1]))));
            out.push_back({var ? Tok::Kind::Var : Tok::Kind::Ident, word, start});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
            out.push_back({Tok::Kind::Number, src.substr(start, i - start), start});
            continue;
        }
        if (c == '"') {
            ++i;
            while (i < src.size() && src[i] != '"') ++i;
            if (i >= src.size()) throw std::runtime_error("unterminated string at offset " + std::to_string(start));
            ++i;
            out.push_back({Tok::Kind::String, src.substr(start + 1, i - start - 2), start});
            continue;
        }
        bool matched = false;
        for (const char* op : ops) {
            std::string s(op);
            if (src.compare(i, s.size(), s) == 0) {
                out.push_back({Tok::Kind::Op, s, start});
                i += s.size();
                matched = true;
                break;
            }
        }
        if (!matched) throw std::runtime_error("unexpected character '" + std::string(1, c) + "' at offset " + std::to_string(i));
    }
    out.push_back({Tok::Kind::End, "", src.size()});
    return out;
}

bool cmp_of(const std::string& s, CmpOp& op) {
    if (s == "=") op = CmpOp::Eq;
    else if (s == "!=") op = CmpOp::Ne;
    else if (s == "<") op = CmpOp::Lt;
    else if (s == "<=") op = CmpOp::Le;
    else if (s == ">") op = CmpOp::Gt;
    else if (s == ">=") op = CmpOp::Ge;
    else return false;
    return true;
}

class Reader {
public:
    explicit Reader(const std::string& src) : toks_(lex(src)) {}

    std::vector<Statement> program() {
        std::vector<Statement> out;
        while (peek().kind != Tok::Kind::End) out.push_back(statement());
        return out;
    }

private:
    std::vector<Tok> toks_;
    std::size_t p_ = 0;

    const Tok& peek(std::size_t k = 0) const { return toks_[std::min(p_ + k, toks_.size() - 1)]; }
    bool is_op(const std::string& s, std::size_t k = 0) const {
        return peek(k).kind == Tok::Kind::Op && peek(k).text == s;
    }
    bool accept(const std::string& s) {
        if (!is_op(s)) return false;
        ++p_;
        return true;
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw std::runtime_error("expected " + what + " at offset " + std::to_string(peek().offset) + " near '" +
                                 peek().text + "'");
    }
    void expect(const std::string& s) {
        if (!accept(s)) fail("'" + s + "'");
    }

    Statement statement() {
        Statement s;
        if (accept(":~")) {
            s.weak = true;
            s.body = body({"."});
            expect(".");
            expect("[");
            s.weight = term();
            expect("@");
            if (peek().kind != Tok::Kind::Number) fail("priority level");
            s.level = std::stol(toks_[p_++].text);
            while (accept(",")) s.terms.push_back(term());
            expect("]");
            return s;
        }
        if (accept(":-")) {
            s.body = body({"."});
            expect(".");
            return s;
        }
        s.head = head();
        if (accept(":-")) s.body = body({"."});
        expect(".");
        return s;
    }

    Head head() {
        Head h;
        bool choice = is_op("{");
        std::optional<Term> lower;
        if (!choice) {
            std::size_t save = p_;
            try {
                Term t = term();
                if (is_op("<=") && is_op("{", 1)) {
                    ++p_;
                    lower = t;
                    choice = true;
                } else {
                    p_ = save;
                }
            } catch (const std::runtime_error&) {
                p_ = save;
            }
        }
        if (choice) {
            h.kind = Head::Kind::Choice;
            h.lower = lower;
            expect("{");
            if (!is_op("}")) {
                do {
                    ChoiceElement e;
                    e.atom = atom();
                    if (accept(":")) e.condition = body({";", "}"});
                    h.elements.push_back(std::move(e));
                } while (accept(";"));
            }
            expect("}");
            if (accept("<=")) h.upper = term();
            return h;
        }
        h.atoms.push_back(atom());
        while (accept("|")) h.atoms.push_back(atom());
        h.kind = h.atoms.size() > 1 ? Head::Kind::Disjunction : Head::Kind::Normal;
        return h;
    }

    Atom atom() {
        if (peek().kind != Tok::Kind::Ident) fail("atom");
        Atom a;
        a.predicate = toks_[p_++].text;
        if (accept("(")) {
            if (!is_op(")")) {
                do a.args.push_back(term());
                while (accept(","));
            }
            expect(")");
        }
        return a;
    }

    std::vector<BodyElement> body(std::initializer_list<const char*> stops) {
        std::vector<BodyElement> out;
        for (;;) {
            out.push_back(element());
            if (!accept(",")) break;
        }
        for (const char* s : stops)
            if (is_op(s)) return out;
        fail("end of body");
    }

    BodyElement element() {
        if (peek().kind == Tok::Kind::Ident && peek().text == "not") {
            ++p_;
            return BodyElement::literal(atom(), true);
        }
        if (peek().kind == Tok::Kind::Op && peek().text[0] == '#') {
            Aggregate a;
            std::string fn = toks_[p_++].text;
            a.fn = fn == "#sum" ? AggFn::Sum : fn == "#min" ? AggFn::Min : fn == "#max" ? AggFn::Max : AggFn::Count;
            expect("{");
            if (!is_op(":") && !is_op("}")) {
                do a.terms.push_back(term());
                while (accept(","));
            }
            if (accept(":")) a.condition = body({"}"});
            expect("}");
            if (!cmp_of(peek().text, a.op) || peek().kind != Tok::Kind::Op) fail("aggregate guard");
            ++p_;
            a.guard = term();
            return BodyElement::aggregate(std::move(a));
        }
        Term lhs = term();
        CmpOp op;
        if (peek().kind == Tok::Kind::Op && cmp_of(peek().text, op)) {
            ++p_;
            Term rhs = term();
            return BodyElement::comparison(std::move(lhs), op, std::move(rhs));
        }
        if (lhs.kind == Term::Kind::Function) return BodyElement::literal(Atom{lhs.name, lhs.args});
        if (lhs.kind == Term::Kind::Symbol) return BodyElement::literal(Atom{lhs.name, {}});
        fail("literal");
    }

    Term term() {
        Term t = additive();
        if (accept("..")) return Term::range(std::move(t), additive());
        return t;
    }

    Term additive() {
        Term t = multiplicative();
        while (is_op("+") || is_op("-")) {
            std::string op = toks_[p_++].text;
            t = Term::arith(op, std::move(t), multiplicative());
        }
        return t;
    }

    Term multiplicative() {
        Term t = primary();
        while (is_op("*") || is_op("/")) {
            std::string op = toks_[p_++].text;
            t = Term::arith(op, std::move(t), primary());
        }
        return t;
    }

    Term primary() {
        const Tok& t = peek();
        switch (t.kind) {
        case Tok::Kind::Number: ++p_; return Term::num(std::stol(t.text));
        case Tok::Kind::String: ++p_; return Term::str(t.text);
        case Tok::Kind::Var: {
            ++p_;
            if (t.text == "_") return Term::anon();
            if (t.text.size() > 2 && t.text.compare(0, 2, "_X") == 0 &&
                t.text.find_first_not_of("0123456789", 2) == std::string::npos)
                return Term::gen(std::stol(t.text.substr(2)));
            return Term::var(t.text);
        }
        case Tok::Kind::Ident: {
            std::string name = t.text;
            ++p_;
            if (accept("(")) {
                std::vector<Term> args;
                if (!is_op(")")) {
                    do args.push_back(term());
                    while (accept(","));
                }
                expect(")");
                return Term::func(name, std::move(args));
            }
            return Term::symbol(name);
        }
        case Tok::Kind::Op:
            if (accept("(")) {
                Term inner = additive();
                expect(")");
                if (accept("\\")) {
                    if (peek().kind != Tok::Kind::Number) fail("modulus");
                    return Term::mod(std::move(inner), std::stol(toks_[p_++].text));
                }
                return Term::paren(std::move(inner));
            }
            if (accept("|")) {
                Term inner = additive();
                expect("|");
                return Term::abs(std::move(inner));
            }
            if (accept("-")) {
                if (peek().kind == Tok::Kind::Number) return Term::num(-std::stol(toks_[p_++].text));
                return Term::neg(primary());
            }
            break;
        default: break;
        }
        fail("term");
    }
};

}  // namespace

std::vector<Statement> read_program(const std::string& text) { return Reader(text).program(); }

}  // namespace cnl2asp::asp
