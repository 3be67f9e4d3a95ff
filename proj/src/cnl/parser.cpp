#include "cnl2asp/cnl/parser.h"

#include <algorithm>
#include <cctype>
#include <functional>

namespace cnl2asp::cnl {

std::string to_lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string join(const Words& words, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) out += sep;
        out += words[i];
    }
    return out;
}

std::string key_of(const Words& words) { return to_lower(join(words)); }

const char* proposition_kind_name(Proposition::Kind kind) {
    switch (kind) {
        case Proposition::Kind::DomainDefinition: return "DomainDefinition";
        case Proposition::Kind::TemporalDefinition: return "TemporalDefinition";
        case Proposition::Kind::ConstantDefinition: return "ConstantDefinition";
        case Proposition::Kind::CompoundDefinition: return "CompoundDefinition";
        case Proposition::Kind::EnumerativeDefinition: return "EnumerativeDefinition";
        case Proposition::Kind::WheneverThen: return "WheneverThen";
        case Proposition::Kind::FactProposition: return "FactProposition";
        case Proposition::Kind::QuantifiedChoice: return "QuantifiedChoice";
        case Proposition::Kind::NegativeStrongConstraint: return "NegativeStrongConstraint";
        case Proposition::Kind::PositiveStrongConstraint: return "PositiveStrongConstraint";
        case Proposition::Kind::WeakConstraint: return "WeakConstraint";
    }
    return "?";
}

const char* cmp_word_text(CmpWord op) {
    switch (op) {
        case CmpWord::Eq: return "equal to";
        case CmpWord::Ne: return "different from";
        case CmpWord::Lt: return "less than";
        case CmpWord::Le: return "less than or equal to";
        case CmpWord::Gt: return "greater than";
        case CmpWord::Ge: return "greater than or equal to";
        case CmpWord::After: return "after";
        case CmpWord::Before: return "before";
        case CmpWord::NotAfter: return "not after";
        case CmpWord::NotBefore: return "not before";
    }
    return "?";
}

// ---- terms -----------------------------------------------------------------------------

Term classify_word(const std::string& text, const std::set<std::string>& constants) {
    if (constants.count(text)) return Term{Term::Kind::ConstantRef, text};
    if (!text.empty() && text.front() == '"') return Term{Term::Kind::StringValue, text};
    std::size_t start = (!text.empty() && (text[0] == '-' || text[0] == '+')) ? 1 : 0;
    bool digits = text.size() > start;
    for (std::size_t i = start; i < text.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) digits = false;
    if (digits) return Term{Term::Kind::NumberValue, text};
    bool upper = false, lower = false;
    for (char c : text) {
        if (std::isupper(static_cast<unsigned char>(c))) upper = true;
        if (std::islower(static_cast<unsigned char>(c))) lower = true;
    }
    if (upper && !lower) return Term{Term::Kind::Variable, text};
    return Term{Term::Kind::StringValue, text};
}

Term classify_term(const Token& token, const std::set<std::string>& constants) {
    if (token.kind == TokenKind::Number) return Term{Term::Kind::NumberValue, token.text};
    return classify_word(token.text, constants);
}

// ---- lexicon ---------------------------------------------------------------------------

void Lexicon::add_concept(const std::string& key) {
    if (key.empty()) return;
    if (std::find(concepts_.begin(), concepts_.end(), key) == concepts_.end()) concepts_.push_back(key);
}

void Lexicon::add_attribute(const std::string& concept_name, const std::string& attribute) {
    auto& list = attributes_[concept_name];
    if (std::find(list.begin(), list.end(), attribute) == list.end()) list.push_back(attribute);
}

bool Lexicon::is_concept(const std::string& key) const {
    return std::find(concepts_.begin(), concepts_.end(), key) != concepts_.end();
}

const std::vector<std::string>& Lexicon::attributes_of(const std::string& concept_name) const {
    static const std::vector<std::string> none;
    auto it = attributes_.find(concept_name);
    return it == attributes_.end() ? none : it->second;
}

namespace {

Words split_words(const std::string& s) {
    Words out;
    std::string cur;
    for (char c : s) {
        if (c == ' ') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

bool plural_of(const std::string& word, const std::string& singular) {
    if (word == singular + "s") return true;
    if (word == singular + "es") return true;
    if (singular.size() > 1 && singular.back() == 'y' && word == singular.substr(0, singular.size() - 1) + "ies")
        return true;
    return false;
}

}  // namespace

std::size_t Lexicon::match_concept(const std::vector<std::string>& words, std::string* key) const {
    std::size_t best = 0;
    for (const auto& c : concepts_) {
        Words cw = split_words(c);
        if (cw.size() > words.size() || cw.size() <= best) continue;
        bool ok = true;
        for (std::size_t i = 0; i < cw.size() && ok; ++i) {
            std::string w = to_lower(words[i]);
            if (w == cw[i]) continue;
            ok = (i + 1 == cw.size()) && plural_of(w, cw[i]);
        }
        if (ok) {
            best = cw.size();
            if (key) *key = c;
        }
    }
    return best;
}

std::string Lexicon::singular(const std::string& word) const {
    std::string w = to_lower(word);
    if (is_concept(w)) return w;
    for (const auto& c : concepts_)
        if (plural_of(w, c)) return c;
    return "";
}

namespace {

void visit_mentions(const Mention& m, const std::function<void(const Mention&)>& f);
void visit_expr(const Expr& e, const std::function<void(const Mention&)>& f);

void visit_clause(const SimpleClause& c, const std::function<void(const Mention&)>& f) {
    if (c.subject) visit_mentions(*c.subject, f);
    for (const auto& o : c.objects) visit_mentions(o, f);
}

void visit_aggregate(const Aggregate& a, const std::function<void(const Mention&)>& f) {
    if (a.of) visit_mentions(*a.of, f);
    if (a.in) visit_mentions(*a.in, f);
    for (const auto& m : a.with) visit_mentions(m, f);
    for (const auto& c : a.clause) visit_clause(c, f);
    for (const auto& m : a.forEach) visit_mentions(m, f);
    for (const auto& m : a.suchThat) visit_mentions(m, f);
}

void visit_expr(const Expr& e, const std::function<void(const Mention&)>& f) {
    for (const auto& o : e.operands) visit_expr(o, f);
    for (const auto& a : e.aggregate) visit_aggregate(a, f);
}

void visit_mentions(const Mention& m, const std::function<void(const Mention&)>& f) {
    f(m);
    for (const auto& r : m.relativeObjects) visit_mentions(r, f);
}

void visit_body(const ConstraintBody& b, const std::function<void(const Mention&)>& f) {
    for (const auto& m : b.leadingWhenever) visit_mentions(m, f);
    for (const auto& c : b.clauses) visit_clause(c, f);
    for (const auto& c : b.thenClauses) visit_clause(c, f);
    if (b.condition) {
        if (b.condition->lhs) visit_expr(*b.condition->lhs, f);
        visit_expr(b.condition->rhs, f);
    }
    if (b.objective) visit_expr(*b.objective, f);
    for (const auto& m : b.whenever) visit_mentions(m, f);
}

}  // namespace

void Lexicon::learn(const Proposition& prop) {
    auto mention = [this](const Mention& m) {
        if (!m.concept_name.empty()) add_concept(key_of(m.concept_name));
    };
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, DomainDefinition>) {
                std::string c = key_of(p.name);
                add_concept(c);
                for (const auto& k : p.keys) add_attribute(c, key_of(k));
                for (const auto& k : p.params) add_attribute(c, key_of(k));
            } else if constexpr (std::is_same_v<T, TemporalDefinition>) {
                std::string c = key_of(p.name);
                add_concept(c);
                add_attribute(c, c);
            } else if constexpr (std::is_same_v<T, ConstantDefinition>) {
                add_constant(p.name);
            } else if constexpr (std::is_same_v<T, CompoundDefinition>) {
                std::string c = key_of(p.name);
                add_concept(c);
                if (!p.range) add_attribute(c, "id");
                add_attribute(c, c);
                for (const auto& a : p.attributes) add_attribute(c, key_of(a.name));
            } else if constexpr (std::is_same_v<T, EnumerativeDefinition>) {
                if (p.isA) add_concept(key_of(p.concept_name));
                visit_clause(p.statement, mention);
                for (const auto& c : p.when) visit_clause(c, mention);
            } else if constexpr (std::is_same_v<T, WheneverThen>) {
                for (const auto& m : p.whenever) visit_mentions(m, mention);
                for (const auto& m : p.heads) visit_mentions(m, mention);
                for (const auto& m : p.suchThat) visit_mentions(m, mention);
                for (const auto& m : p.targets) visit_mentions(m, mention);
            } else if constexpr (std::is_same_v<T, FactProposition>) {
                visit_mentions(p.mention, mention);
            } else if constexpr (std::is_same_v<T, QuantifiedChoice>) {
                visit_mentions(p.subject, mention);
                for (const auto& m : p.objects) visit_mentions(m, mention);
                for (const auto& m : p.forEach) visit_mentions(m, mention);
            } else if constexpr (std::is_same_v<T, StrongConstraint>) {
                visit_body(p.body, mention);
            } else if constexpr (std::is_same_v<T, WeakConstraint>) {
                visit_body(p.body, mention);
            }
        },
        prop.payload);
}

// ---- parser ----------------------------------------------------------------------------

namespace {

const std::set<std::string> kReserved = {
    "a",         "an",       "the",        "with",     "and",        "or",        "is",       "are",
    "be",        "can",      "must",       "have",     "has",        "that",      "where",    "when",
    "whenever",  "then",     "such",       "for",      "each",       "to",        "in",       "of",
    "not",       "does",     "do",         "there",    "it",         "every",     "any",      "we",
    "exactly",   "at",       "most",       "least",    "between",    "than",      "equal",    "different",
    "greater",   "less",     "more",       "after",    "before",     "next",      "previous", "respect",
    "also",      "one",      "respectively", "ranging", "by",        "from",      "made",     "goes",
    "identified", "preferred", "prohibited", "required", "possible", "priority", "much",     "little",
    "as",        "maximized", "minimized",  "consecutive", "on",     "into"};

const std::set<std::string> kPrepositions = {"in", "to", "on", "at", "from", "into"};

bool is_agg_word(const std::string& w) {
    return w == "number" || w == "total" || w == "lowest" || w == "highest" || w == "smallest" || w == "biggest";
}

class Parser {
public:
    Parser(const std::vector<Token>& tokens, const Lexicon& lexicon) : t_(tokens), lex_(lexicon) {}

    Proposition parse_sentence() {
        Proposition prop;
        prop.span = t_.front().span;
        prop.span.length = t_.back().span.offset + t_.back().span.length - t_.front().span.offset;
        if (at_seq({"It", "is", "prohibited", "that"}) || at_seq({"It", "is", "required", "that"})) {
            bool required = peek(2).text == "required";
            p_ += 4;
            StrongConstraint sc;
            sc.required = required;
            sc.body = parse_constraint_body(false);
            prop.kind = required ? Proposition::Kind::PositiveStrongConstraint
                                 : Proposition::Kind::NegativeStrongConstraint;
            prop.payload = std::move(sc);
        } else if (at_seq({"It", "is", "preferred"})) {
            p_ += 3;
            prop.kind = Proposition::Kind::WeakConstraint;
            prop.payload = parse_weak();
        } else if (tok_is(0, "Whenever")) {
            prop.kind = Proposition::Kind::WheneverThen;
            prop.payload = parse_whenever_then();
        } else if (tok_is(0, "Every")) {
            prop.kind = Proposition::Kind::QuantifiedChoice;
            prop.payload = parse_quantified_choice();
        } else if (at_seq({"There", "is"})) {
            p_ += 2;
            FactProposition f;
            f.mention = parse_mention(MentionOpts{});
            prop.kind = Proposition::Kind::FactProposition;
            prop.payload = std::move(f);
        } else if (contains_seq({"is", "a", "temporal", "concept", "expressed", "in"})) {
            prop.kind = Proposition::Kind::TemporalDefinition;
            prop.payload = parse_temporal();
        } else if (is_word(0) && at_seq({"is", "a", "constant"}, 1)) {
            prop.kind = Proposition::Kind::ConstantDefinition;
            prop.payload = parse_constant();
        } else if (contains_seq({"is", "identified", "by"}) || domain_has_pattern()) {
            prop.kind = Proposition::Kind::DomainDefinition;
            prop.payload = parse_domain();
        } else if (before_comma_seq({"goes", "from"}) || before_comma_seq({"is", "one", "of"})) {
            prop.kind = Proposition::Kind::CompoundDefinition;
            prop.payload = parse_compound();
        } else {
            prop.kind = Proposition::Kind::EnumerativeDefinition;
            prop.payload = parse_enumerative();
        }
        if (!at_end()) fail("end of sentence");
        return prop;
    }

private:
    struct MentionOpts {
        bool label = true;
        bool relative = false;
        bool withless = false;
        bool conditions = true;
    };
    struct ClauseOpts {
        bool aggregate = false;
        bool elided = false;
        bool quantifier = false;
    };

    // ---- token helpers ----

    const Token& peek(std::size_t k = 0) const { return t_[std::min(p_ + k, t_.size() - 1)]; }

    bool tok_is(std::size_t k, std::string_view s) const {
        const Token& t = peek(k);
        if (t.kind == TokenKind::Quoted || t.kind == TokenKind::Time || t.kind == TokenKind::Date) return false;
        return t.text == s;
    }

    bool at_seq(std::initializer_list<std::string_view> seq, std::size_t k = 0) const {
        for (auto s : seq)
            if (!tok_is(k++, s)) return false;
        return true;
    }

    bool accept(std::initializer_list<std::string_view> seq) {
        if (!at_seq(seq)) return false;
        p_ += seq.size();
        return true;
    }

    void expect(std::initializer_list<std::string_view> seq) {
        if (accept(seq)) return;
        std::string s;
        for (auto w : seq) s += (s.empty() ? "" : " ") + std::string(w);
        fail("'" + s + "'");
    }

    [[noreturn]] void fail(const std::string& expected) const {
        const Token& t = peek();
        throw CompileError(ErrorKind::SyntaxError, t.span, "expected " + expected + " but found '" + t.text + "'");
    }

    bool at_end() const { return p_ + 1 >= t_.size(); }

    bool contains_seq(std::initializer_list<std::string_view> seq) const {
        for (std::size_t k = 0; p_ + k < t_.size(); ++k)
            if (at_seq(seq, k)) return true;
        return false;
    }

    bool before_comma_seq(std::initializer_list<std::string_view> seq) const {
        for (std::size_t k = 0; p_ + k < t_.size() && !peek(k).is_comma(); ++k)
            if (at_seq(seq, k)) return true;
        return false;
    }

    bool domain_has_pattern() const {
        if (!(tok_is(0, "A") || tok_is(0, "An"))) return false;
        for (std::size_t k = 1; p_ + k < t_.size(); ++k) {
            if (tok_is(k, "has")) return k > 1;
            if (!is_word(k) || reserved(k)) return false;
        }
        return false;
    }

    bool is_word(std::size_t k) const { return peek(k).kind == TokenKind::Word; }
    std::string lower(std::size_t k) const { return to_lower(peek(k).text); }
    bool reserved(std::size_t k) const {
        if (!is_word(k) || !kReserved.count(lower(k))) return false;
        const std::string& w = peek(k).text;
        return classify_word(w).kind != Term::Kind::Variable;
    }

    bool accept_article() {
        if (tok_is(0, "a") || tok_is(0, "an") || tok_is(0, "A") || tok_is(0, "An")) {
            ++p_;
            return true;
        }
        return false;
    }

    bool article_at(std::size_t k) const { return tok_is(k, "a") || tok_is(k, "an"); }

    std::size_t concept_at(std::size_t k, std::string* key = nullptr) const {
        Words ws;
        for (std::size_t i = k; is_word(i) && ws.size() < 8 && p_ + i < t_.size(); ++i) ws.push_back(peek(i).text);
        if (ws.empty() || reserved(k)) return 0;
        return lex_.match_concept(ws, key);
    }

    std::size_t attribute_at(const std::string& concept_name, std::size_t k, std::string* name = nullptr) const {
        std::size_t best = 0;
        for (const auto& a : lex_.attributes_of(concept_name)) {
            Words aw = split_words(a);
            if (aw.size() <= best) continue;
            bool ok = true;
            for (std::size_t i = 0; i < aw.size() && ok; ++i) ok = is_word(k + i) && lower(k + i) == aw[i];
            if (ok) {
                best = aw.size();
                if (name) *name = a;
            }
        }
        return best;
    }

    Term term_at(std::size_t k) const {
        const Token& t = peek(k);
        if (t.kind == TokenKind::Number) return Term{Term::Kind::NumberValue, t.text};
        if (t.kind == TokenKind::Quoted) return Term{Term::Kind::StringValue, t.text};
        return classify_word(t.text, lex_.constants());
    }

    /// Variable, number, constant, quoted string or capitalized string value.
    bool value_at(std::size_t k) const {
        const Token& t = peek(k);
        if (t.kind == TokenKind::Number || t.kind == TokenKind::Quoted) return true;
        if (t.kind == TokenKind::Symbol && t.text == "-" && peek(k + 1).kind == TokenKind::Number) return true;
        if (t.kind != TokenKind::Word || p_ + k + 1 >= t_.size()) return false;
        Term term = classify_word(t.text, lex_.constants());
        if (term.kind == Term::Kind::Variable || term.kind == Term::Kind::ConstantRef) return true;
        return std::isupper(static_cast<unsigned char>(t.text[0])) && !reserved(k);
    }

    bool terminator_at(std::size_t k) const {
        const Token& t = peek(k);
        if (t.kind == TokenKind::Punctuation) return true;
        static const std::set<std::string> words = {"and",  "or",   "where", "when", "whenever", "then",
                                                    "for",  "is",   "such",  "that", "before",   "after"};
        return t.kind == TokenKind::Word && words.count(t.text) != 0;
    }

    bool lowercase_label_at(std::size_t k) const {
        if (!is_word(k) || reserved(k) || concept_at(k) > 0) return false;
        if (!std::islower(static_cast<unsigned char>(peek(k).text[0]))) return false;
        return terminator_at(k + 1);
    }

    std::optional<Term> accept_label() {
        if (value_at(0)) {
            if (peek().kind == TokenKind::Symbol) {
                std::string text = "-" + peek(1).text;
                p_ += 2;
                return Term{Term::Kind::NumberValue, text};
            }
            Term t = term_at(0);
            ++p_;
            return t;
        }
        if (lowercase_label_at(0)) {
            Term t = term_at(0);
            ++p_;
            return t;
        }
        return std::nullopt;
    }

    Term expect_term() {
        if (peek().kind == TokenKind::Symbol && peek().text == "-" && peek(1).kind == TokenKind::Number) {
            std::string text = "-" + peek(1).text;
            p_ += 2;
            return Term{Term::Kind::NumberValue, text};
        }
        const Token& t = peek();
        if (t.kind == TokenKind::Number || t.kind == TokenKind::Quoted || (t.kind == TokenKind::Word && !reserved(0)) ||
            (t.kind == TokenKind::Word && value_at(0))) {
            Term term = term_at(0);
            ++p_;
            return term;
        }
        fail("a value");
    }

    std::optional<CmpWord> accept_cmp() {
        if (accept({"less", "than", "or", "equal", "to"})) return CmpWord::Le;
        if (accept({"greater", "than", "or", "equal", "to"})) return CmpWord::Ge;
        if (accept({"equal", "to"})) return CmpWord::Eq;
        if (accept({"different", "from"})) return CmpWord::Ne;
        if (accept({"less", "than"})) return CmpWord::Lt;
        if (accept({"greater", "than"})) return CmpWord::Gt;
        if (accept({"more", "than"})) return CmpWord::Gt;
        if (accept({"at", "most"})) return CmpWord::Le;
        if (accept({"at", "least"})) return CmpWord::Ge;
        if (accept({"not", "after"})) return CmpWord::NotAfter;
        if (accept({"not", "before"})) return CmpWord::NotBefore;
        if (accept({"after"})) return CmpWord::After;
        if (accept({"before"})) return CmpWord::Before;
        return std::nullopt;
    }

    void skip_unit_word() {
        if (!is_word(0) || reserved(0)) return;
        std::string w = lower(0);
        bool unit = w == "minutes" || w == "days" || w == "steps" ||
                    (w.size() > 1 && w.back() == 's' && !lex_.singular(w).empty() && !lex_.is_concept(w));
        if (unit && terminator_at(1)) ++p_;
    }

    // ---- expressions ----

    bool expr_start(std::size_t k) const {
        const Token& t = peek(k);
        if (t.kind == TokenKind::Time || t.kind == TokenKind::Date) return true;
        if (t.kind == TokenKind::Symbol) return t.text == "(" || t.text == "|" || t.text == "-";
        return value_at(k);
    }

    Expr parse_expr() {
        Expr lhs = parse_product();
        while (peek().kind == TokenKind::Symbol && (peek().text == "+" || peek().text == "-")) {
            std::string op = peek().text;
            ++p_;
            Expr rhs = parse_product();
            lhs = binary(op, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    Expr parse_product() {
        Expr lhs = parse_unary();
        while (peek().kind == TokenKind::Symbol && peek().text == "*") {
            ++p_;
            Expr rhs = parse_unary();
            lhs = binary("*", std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    static Expr binary(const std::string& op, Expr lhs, Expr rhs) {
        Expr e;
        e.kind = Expr::Kind::Binary;
        e.text = op;
        e.operands.push_back(std::move(lhs));
        e.operands.push_back(std::move(rhs));
        return e;
    }

    Expr parse_unary() {
        if (peek().kind == TokenKind::Symbol && peek().text == "-") {
            if (peek(1).kind == TokenKind::Number) {
                Expr e = Expr::of(Term{Term::Kind::NumberValue, "-" + peek(1).text});
                p_ += 2;
                return e;
            }
            ++p_;
            Expr e;
            e.kind = Expr::Kind::Negate;
            e.operands.push_back(parse_unary());
            return e;
        }
        return parse_primary();
    }

    Expr parse_primary() {
        const Token& t = peek();
        if (t.kind == TokenKind::Symbol && (t.text == "(" || t.text == "|")) {
            std::string close = t.text == "(" ? ")" : "|";
            Expr e;
            e.kind = t.text == "(" ? Expr::Kind::Paren : Expr::Kind::Abs;
            ++p_;
            e.operands.push_back(parse_expr());
            expect({close});
            return e;
        }
        if (t.kind == TokenKind::Time || t.kind == TokenKind::Date) {
            Expr e;
            e.kind = t.kind == TokenKind::Time ? Expr::Kind::Time : Expr::Kind::Date;
            e.text = t.text;
            ++p_;
            return e;
        }
        if (t.kind == TokenKind::Number || t.kind == TokenKind::Quoted) {
            Expr e = Expr::of(term_at(0));
            ++p_;
            return e;
        }
        if (t.kind == TokenKind::Word) {
            if (t.text == "the") return parse_the();
            if (!reserved(0)) {
                Expr e = Expr::of(term_at(0));
                ++p_;
                return e;
            }
        }
        fail("an expression");
    }

    Expr parse_the() {
        if (accept({"the", "sum", "between"})) {
            Expr e;
            e.kind = Expr::Kind::Sum;
            e.operands.push_back(parse_expr());
            for (;;) {
                if (tok_is(0, ",") && (expr_start(1) || tok_is(1, "the"))) {
                    ++p_;
                    e.operands.push_back(parse_expr());
                } else if (at_seq({",", "and"})) {
                    p_ += 2;
                    e.operands.push_back(parse_expr());
                    break;
                } else if (accept({"and"})) {
                    e.operands.push_back(parse_expr());
                    break;
                } else {
                    break;
                }
            }
            return e;
        }
        if (accept({"the", "difference", "in", "absolute", "value", "between"})) {
            Expr e;
            e.kind = Expr::Kind::AbsDifference;
            e.operands.push_back(parse_expr());
            accept({","});
            expect({"and"});
            e.operands.push_back(parse_expr());
            return e;
        }
        if (accept({"the", "difference", "between"})) {
            Expr e;
            e.kind = Expr::Kind::Difference;
            e.operands.push_back(parse_expr());
            expect({"and"});
            e.operands.push_back(parse_expr());
            return e;
        }
        if (auto e = try_attribute_of()) return *e;
        if (is_word(1) && is_agg_word(lower(1))) {
            ++p_;
            Expr e;
            e.kind = Expr::Kind::Aggregate;
            e.aggregate.push_back(parse_aggregate());
            return e;
        }
        expect({"the"});
        Expr e;
        e.kind = Expr::Kind::EntityRef;
        std::size_t n = concept_at(0);
        if (n == 0) {
            if (!is_word(0) || reserved(0)) fail("a concept_name name");
            n = 1;
        }
        for (std::size_t i = 0; i < n; ++i) e.concept_name.push_back(peek(i).text);
        p_ += n;
        e.label = accept_label();
        return e;
    }

    /// "the first joint J1 of the rotation R"
    std::optional<Expr> try_attribute_of() {
        for (std::size_t i = 1; i < 14 && p_ + i < t_.size(); ++i) {
            if (!is_word(i)) return std::nullopt;
            if (tok_is(i, "of")) {
                std::size_t j = i + 1;
                if (tok_is(j, "the") || article_at(j)) ++j;
                std::size_t n = concept_at(j);
                if (n > 0 && value_at(j + n) && i > 1) {
                    Expr e;
                    e.kind = Expr::Kind::AttributeOf;
                    for (std::size_t k = 1; k < i; ++k) e.attribute.push_back(peek(k).text);
                    Term last = classify_word(e.attribute.back(), lex_.constants());
                    if (e.attribute.size() > 1 && last.kind == Term::Kind::Variable) {
                        e.attributeVar = last;
                        e.attribute.pop_back();
                    }
                    for (std::size_t k = 0; k < n; ++k) e.concept_name.push_back(peek(j + k).text);
                    p_ += j + n;
                    e.label = accept_label();
                    return e;
                }
                continue;
            }
            if (i > 1 && (tok_is(i, "where") || tok_is(i, "that") || tok_is(i, "is") || tok_is(i, "with") ||
                          tok_is(i, "and") || tok_is(i, "in")))
                return std::nullopt;
        }
        return std::nullopt;
    }

    Window parse_window_unit(Window::Kind kind) {
        Window w;
        w.kind = kind;
        if (peek().kind != TokenKind::Number) fail("a number");
        w.length = std::stol(peek().text);
        ++p_;
        accept({"consecutive"});
        if (!is_word(0)) fail("a unit");
        std::string u = lex_.singular(peek().text);
        w.unit = u.empty() ? to_lower(peek().text) : u;
        ++p_;
        return w;
    }

    Aggregate parse_aggregate() {
        Aggregate a;
        std::string fn = lower(0);
        a.fn = fn == "number" ? AggFn::Count : fn == "total" ? AggFn::Sum
               : (fn == "lowest" || fn == "smallest") ? AggFn::Min
                                                       : AggFn::Max;
        ++p_;
        if (accept({"of"})) {
            if (a.fn == AggFn::Count) {
                std::size_t n = concept_at(0);
                if (n == 0) {
                    if (!is_word(0) || reserved(0)) fail("what to count");
                    n = 1;
                }
                for (std::size_t i = 0; i < n; ++i) a.counted.push_back(peek(i).text);
                p_ += n;
                if (accept({"between", "each"})) a.window = parse_window_unit(Window::Kind::Each);
                while (accept({"with"}) || accept({"and", "with"})) {
                    MentionOpts o;
                    o.conditions = false;
                    a.with.push_back(parse_mention(o));
                }
            } else {
                while (is_word(0) && !tok_is(0, "in") && !reserved(0)) {
                    a.attribute.push_back(peek().text);
                    ++p_;
                }
                if (a.attribute.empty()) fail("an attribute name");
                expect({"in"});
                a.in = parse_mention(MentionOpts{});
            }
        } else {
            while (is_word(0) && !tok_is(0, "of")) {
                a.attribute.push_back(peek().text);
                ++p_;
            }
            if (a.attribute.empty()) fail("an attribute name");
            expect({"of"});
            a.of = parse_mention(MentionOpts{});
        }
        if (accept({"where"})) {
            a.link = Aggregate::Link::Where;
            ClauseOpts o;
            o.aggregate = true;
            a.clause.push_back(parse_clause(o));
        } else if (accept({"that"})) {
            a.link = Aggregate::Link::That;
            ClauseOpts o;
            o.aggregate = true;
            o.elided = true;
            a.clause.push_back(parse_clause(o));
        }
        while (accept({"for", "each"})) {
            MentionOpts o;
            o.label = false;
            a.forEach.push_back(parse_mention(o));
        }
        if (accept({"ranging", "between"})) {
            a.ranging.push_back(parse_expr());
            expect({"and"});
            a.ranging.push_back(parse_expr());
        }
        return a;
    }

    // ---- mentions ----

    std::optional<TemporalShift> accept_shift() {
        if ((at_seq({"the", "next"}) || at_seq({"the", "previous"})) && is_word(2) &&
            !(peek(2).kind == TokenKind::Number)) {
            TemporalShift s;
            s.offset = tok_is(1, "next") ? 1 : -1;
            std::string u = lex_.singular(peek(2).text);
            s.unit = u.empty() ? to_lower(peek(2).text) : u;
            p_ += 3;
            return s;
        }
        return std::nullopt;
    }

    AttributeSpec parse_attribute(const std::string& concept_name, bool with) {
        AttributeSpec a;
        a.with = with;
        if (auto s = accept_shift()) {
            if (accept({"respect", "to"})) s->anchor = expect_term();
            a.shift = s;
            return a;
        }
        if (tok_is(0, "the") || article_at(0)) ++p_;
        std::string cur = concept_name;
        for (;;) {
            std::string name;
            std::size_t n = attribute_at(cur, 0, &name);
            if (n == 0) break;
            Words w;
            for (std::size_t i = 0; i < n; ++i) w.push_back(peek(i).text);
            p_ += n;
            a.path.push_back(w);
            if (!lex_.is_concept(name) || name == cur) break;
            cur = name;
            if (attribute_at(cur, 0) == 0) break;
        }
        if (a.path.empty()) {
            Words w;
            while (is_word(0) && !reserved(0) && !value_at(0)) {
                w.push_back(peek().text);
                ++p_;
            }
            if (w.empty()) fail("an attribute name");
            a.path.push_back(w);
        }
        if (accept({"equal", "to"})) {
            a.value = parse_expr();
        } else if (expr_start(0)) {
            a.value = parse_expr();
        }
        while (true) {
            std::size_t save = p_;
            auto op = accept_cmp();
            if (!op) break;
            if (!expr_start(0) && !tok_is(0, "the") && !(is_word(0) && !reserved(0))) {
                p_ = save;
                break;
            }
            Condition c;
            c.op = *op;
            c.rhs = parse_expr();
            a.conditions.push_back(std::move(c));
            skip_unit_word();
        }
        return a;
    }

    bool attribute_continues() const {
        return at_seq({",", "and", "with"}) || at_seq({",", "with"}) || at_seq({"and", "with"}) ||
               tok_is(0, "with");
    }

    void parse_attributes(Mention& m, const MentionOpts& o) {
        for (;;) {
            std::string concept_name = key_of(m.concept_name);
            if (attribute_continues()) {
                if (!accept({",", "and", "with"}) && !accept({",", "with"}) && !accept({"and", "with"})) accept({"with"});
                m.attributes.push_back(parse_attribute(concept_name, true));
                continue;
            }
            if (o.withless) {
                std::size_t k = tok_is(0, ",") ? 1 : 0;
                if ((k == 1 || m.attributes.empty()) && attribute_at(concept_name, k) > 0) {
                    std::size_t n = attribute_at(concept_name, k);
                    if (expr_start(k + n)) {
                        p_ += k;
                        m.attributes.push_back(parse_attribute(concept_name, false));
                        continue;
                    }
                }
            }
            break;
        }
    }

    Mention parse_mention(const MentionOpts& o) {
        Mention m;
        m.article = accept_article();
        std::size_t n = concept_at(0);
        if (n == 0) {
            if (!is_word(0) || reserved(0)) fail("a concept_name name");
            n = 1;
        }
        for (std::size_t i = 0; i < n; ++i) m.concept_name.push_back(peek(i).text);
        p_ += n;
        if (o.label) m.label = accept_label();
        m.shift = accept_shift();
        parse_attributes(m, o);
        // a multi-word concept_name split around its attributes: "a position with id S ... in"
        if (is_word(0) && !m.concept_name.empty()) {
            Words joined = m.concept_name;
            joined.push_back(peek().text);
            if (lex_.is_concept(key_of(joined)) && !lex_.is_concept(key_of(m.concept_name))) {
                m.concept_name = joined;
                ++p_;
                parse_attributes(m, o);
            }
        }
        if (o.conditions) {
            for (;;) {
                if (at_seq({"that", "is"})) {
                    std::size_t save = p_;
                    p_ += 2;
                    auto op = accept_cmp();
                    if (!op) {
                        p_ = save;
                        break;
                    }
                    Condition c;
                    c.op = *op;
                    c.rhs = parse_expr();
                    m.conditions.push_back(std::move(c));
                    continue;
                }
                if ((tok_is(0, "before") || tok_is(0, "after")) && expr_start(1)) {
                    Condition c;
                    c.op = *accept_cmp();
                    c.rhs = parse_expr();
                    m.conditions.push_back(std::move(c));
                    continue;
                }
                break;
            }
        }
        if (o.relative && is_word(0) && !reserved(0) && peek().text.size() > 2 &&
            peek().text.substr(peek().text.size() - 2) == "ed") {
            while (is_word(0) && !object_start(0) && !reserved_clause_end(0)) {
                m.relativeVerb.push_back(peek().text);
                ++p_;
            }
            if (!object_start(0)) fail("an object");
            MentionOpts ro;
            m.relativeObjects.push_back(parse_mention(ro));
        }
        return m;
    }

    bool reserved_clause_end(std::size_t k) const {
        return peek(k).kind == TokenKind::Punctuation || tok_is(k, "for") || tok_is(k, "or");
    }

    /// Does a concept_name mention (object of a verb) start at k?
    bool object_start(std::size_t k) const {
        if (article_at(k)) {
            if (concept_at(k + 1) > 0) return true;
            if (!is_word(k + 1) || reserved(k + 1)) return false;
            if (terminator_at(k + 2)) return true;
            if (tok_is(k + 2, "with")) return true;
            if ((value_at(k + 2) || lowercase_label_at(k + 2)) && terminator_at(k + 3)) return true;
            return false;
        }
        std::string key;
        std::size_t n = concept_at(k, &key);
        if (n > 0) {
            if (value_at(k + n) || lowercase_label_at(k + n)) return true;
            if (attribute_at(key, k + n) > 0 && expr_start(k + n + attribute_at(key, k + n))) return true;
            return false;
        }
        if (is_word(k) && !reserved(k) && std::islower(static_cast<unsigned char>(peek(k).text[0])) &&
            value_at(k + 1)) {
            const Token& v = peek(k + 1);
            bool numeric_or_var = v.kind == TokenKind::Number ||
                                  classify_word(v.text, lex_.constants()).kind == Term::Kind::Variable;
            return numeric_or_var && terminator_at(k + 2);
        }
        return false;
    }

    // ---- clauses ----

    bool clause_end(const ClauseOpts& o, bool verb_started) const {
        if (at_end()) return true;
        const Token& t = peek();
        if (t.kind == TokenKind::Punctuation) return true;
        if (at_seq({"and", "also"}) || tok_is(0, "then") || tok_is(0, "when") || tok_is(0, "whenever") ||
            tok_is(0, "where") || at_seq({"for", "each"}) || tok_is(0, "such") || tok_is(0, "or"))
            return true;
        if (tok_is(0, "for") && peek(1).kind == TokenKind::Number) return true;
        if (o.aggregate && verb_started && (tok_is(0, "is") || tok_is(0, "ranging"))) return true;
        return false;
    }

    SimpleClause parse_clause(const ClauseOpts& o) {
        SimpleClause c;
        if (o.quantifier && (tok_is(0, "every") || tok_is(0, "any"))) {
            c.quantifier = peek().text;
            ++p_;
        }
        bool elided = o.elided;
        if (at_seq({"the", "previous"}) && peek(2).kind == TokenKind::Number) {
            p_ += 2;
            c.window = parse_window_unit(Window::Kind::Previous);
            elided = true;
        } else if (auto s = accept_shift()) {
            c.shift = s;
            elided = true;
        }
        if (!elided) {
            MentionOpts mo;
            c.subject = parse_mention(mo);
        }
        if (accept({"does", "not"}) || accept({"do", "not"})) c.negated = true;
        while (!clause_end(o, !c.verb.empty())) {
            if (!c.verb.empty() && object_start(0)) break;
            if (tok_is(0, "not") && !c.verb.empty()) {
                c.negated = true;
                ++p_;
                continue;
            }
            if (!is_word(0)) fail("a verb");
            c.verb.push_back(peek().text);
            ++p_;
        }
        if (c.verb.empty()) fail("a verb");
        while (!clause_end(o, true)) {
            Mention m;
            std::string prep;
            if (is_word(0) && kPrepositions.count(lower(0)) && object_start(1) && !c.objects.empty()) {
                prep = peek().text;
                ++p_;
            } else if (tok_is(0, "and") && object_start(1) && !c.objects.empty()) {
                ++p_;
            } else if (!object_start(0)) {
                fail("an object or end of clause");
            }
            MentionOpts mo;
            mo.withless = true;
            m = parse_mention(mo);
            m.preposition = prep;
            c.objects.push_back(std::move(m));
        }
        if (tok_is(0, "for") && peek(1).kind == TokenKind::Number) {
            ++p_;
            c.window = parse_window_unit(Window::Kind::Consecutive);
        }
        return c;
    }

    std::vector<SimpleClause> parse_clause_list(const ClauseOpts& o) {
        std::vector<SimpleClause> out;
        out.push_back(parse_clause(o));
        while (accept({"and", "also"})) out.push_back(parse_clause(o));
        return out;
    }

    std::vector<Mention> parse_whenever_list() {
        std::vector<Mention> out;
        for (;;) {
            if (!accept({"whenever"}) && !accept({"Whenever"})) fail("'whenever'");
            expect({"there", "is"});
            bool negated = accept({"not"});
            MentionOpts mo;
            Mention m = parse_mention(mo);
            m.negated = negated;
            out.push_back(std::move(m));
            if (at_seq({",", "whenever"})) {
                ++p_;
                continue;
            }
            if (tok_is(0, "whenever")) continue;
            break;
        }
        return out;
    }

    std::vector<WhereCondition> parse_where() {
        std::vector<WhereCondition> out;
        for (;;) {
            WhereCondition w;
            Term v = expect_term();
            if (v.kind != Term::Kind::Variable) fail("a variable");
            w.variable = v;
            expect({"is"});
            if (accept({"one", "of"})) {
                w.kind = WhereCondition::Kind::OneOf;
                w.respectively = accept({"respectively"});
                w.values.push_back(expect_term());
                for (;;) {
                    if (accept({","})) {
                        accept({"and"});
                        w.values.push_back(expect_term());
                        continue;
                    }
                    if (tok_is(0, "and") && !(value_at(1) && tok_is(2, "is"))) {
                        ++p_;
                        w.values.push_back(expect_term());
                        continue;
                    }
                    break;
                }
            } else if (accept({"between"})) {
                w.kind = WhereCondition::Kind::Between;
                w.values.push_back(expect_term());
                expect({"and"});
                w.values.push_back(expect_term());
            } else {
                auto op = accept_cmp();
                if (!op) fail("a comparison");
                w.kind = WhereCondition::Kind::Compare;
                w.op = *op;
                w.rhs = parse_expr();
            }
            out.push_back(std::move(w));
            if (tok_is(0, "and") && value_at(1) && tok_is(2, "is")) {
                ++p_;
                continue;
            }
            break;
        }
        return out;
    }

    bool condition_start() const {
        if (tok_is(0, "the") && !at_seq({"the", "next"}) && !at_seq({"the", "previous"})) return true;
        if (value_at(0) && tok_is(1, "is")) return true;
        if (peek().kind == TokenKind::Symbol && (peek().text == "|" || peek().text == "(")) return true;
        return false;
    }

    /// expr "is" (cmp expr | maximized | minimized)
    void parse_condition_or_objective(ConstraintBody& b, WeakConstraint* weak) {
        Expr lhs = parse_expr();
        expect({"is"});
        if (weak && (tok_is(0, "maximized") || tok_is(0, "minimized"))) {
            weak->suffix = tok_is(0, "maximized") ? WeakConstraint::Direction::Maximize
                                                 : WeakConstraint::Direction::Minimize;
            ++p_;
            b.kind = ConstraintBody::Kind::Objective;
            b.objective = std::move(lhs);
            return;
        }
        auto op = accept_cmp();
        if (!op) fail("a comparison");
        Condition c;
        c.lhs = std::move(lhs);
        c.op = *op;
        c.rhs = parse_expr();
        skip_unit_word();
        b.kind = ConstraintBody::Kind::Condition;
        b.condition = std::move(c);
    }

    void parse_trailers(ConstraintBody& b, WeakConstraint* weak) {
        for (;;) {
            if (at_seq({",", "such", "that", "there", "is"}) || at_seq({"such", "that", "there", "is"})) {
                accept({","});
                p_ += 4;
                std::vector<Mention> ms;
                ms.push_back(parse_mention(MentionOpts{}));
                while (tok_is(0, ",") && article_at(1)) {
                    ++p_;
                    ms.push_back(parse_mention(MentionOpts{}));
                }
                Aggregate* agg = nullptr;
                if (b.condition && b.condition->lhs && b.condition->lhs->kind == Expr::Kind::Aggregate)
                    agg = &b.condition->lhs->aggregate.front();
                if (!agg) fail("an aggregate before 'such that'");
                for (auto& m : ms) agg->suchThat.push_back(std::move(m));
                continue;
            }
            if (at_seq({",", "where"}) || tok_is(0, "where")) {
                accept({","});
                expect({"where"});
                auto w = parse_where();
                for (auto& x : w) b.where.push_back(std::move(x));
                continue;
            }
            if (at_seq({",", "whenever"}) || tok_is(0, "whenever")) {
                accept({","});
                auto w = parse_whenever_list();
                for (auto& x : w) b.whenever.push_back(std::move(x));
                continue;
            }
            if (weak && (at_seq({"is", "maximized"}) || at_seq({"is", "minimized"}))) {
                weak->suffix = tok_is(1, "maximized") ? WeakConstraint::Direction::Maximize
                                                     : WeakConstraint::Direction::Minimize;
                p_ += 2;
                continue;
            }
            break;
        }
    }

    ConstraintBody parse_constraint_body(bool /*weak*/, WeakConstraint* weak = nullptr) {
        ConstraintBody b;
        ClauseOpts co;
        if (accept({"when"})) {
            b.kind = ConstraintBody::Kind::WhenThen;
            b.clauses = parse_clause_list(co);
            expect({"then"});
            b.thenClauses = parse_clause_list(co);
        } else if (tok_is(0, "every") || tok_is(0, "any")) {
            b.kind = ConstraintBody::Kind::Quantified;
            ClauseOpts q;
            q.quantifier = true;
            b.clauses.push_back(parse_clause(q));
        } else if (tok_is(0, "whenever")) {
            b.leadingWhenever = parse_whenever_list();
            accept({","});
            parse_condition_or_objective(b, weak);
        } else if (condition_start()) {
            parse_condition_or_objective(b, weak);
        } else {
            b.kind = ConstraintBody::Kind::Clauses;
            b.clauses = parse_clause_list(co);
        }
        parse_trailers(b, weak);
        return b;
    }

    WeakConstraint parse_weak() {
        WeakConstraint w;
        for (;;) {
            accept({","});
            if (accept({"as", "much", "as", "possible"})) {
                w.prefix = WeakConstraint::Direction::Maximize;
                continue;
            }
            if (accept({"as", "little", "as", "possible"})) {
                w.prefix = WeakConstraint::Direction::Minimize;
                continue;
            }
            if (accept({"with"})) {
                if (!(tok_is(0, "low") || tok_is(0, "medium") || tok_is(0, "high"))) fail("low, medium or high");
                w.priority = peek().text;
                ++p_;
                expect({"priority"});
                continue;
            }
            break;
        }
        if (w.priority.empty()) fail("'with low|medium|high priority'");
        expect({"that"});
        w.body = parse_constraint_body(true, &w);
        return w;
    }

    Quantity parse_quantity() {
        Quantity q;
        if (accept({"exactly"})) {
            q.kind = Quantity::Kind::Exactly;
            q.low = expect_term();
        } else if (accept({"at", "most"})) {
            q.kind = Quantity::Kind::AtMost;
            q.high = expect_term();
        } else if (accept({"at", "least"})) {
            q.kind = Quantity::Kind::AtLeast;
            q.low = expect_term();
        } else if (accept({"between"})) {
            q.kind = Quantity::Kind::Between;
            q.low = expect_term();
            expect({"and"});
            q.high = expect_term();
        }
        return q;
    }

    bool quantity_start(std::size_t k) const {
        return tok_is(k, "exactly") || at_seq({"at", "most"}, k) || at_seq({"at", "least"}, k) ||
               (tok_is(k, "between") && peek(k + 1).kind != TokenKind::Word);
    }

    WheneverThen parse_whenever_then() {
        WheneverThen w;
        w.whenever = parse_whenever_list();
        accept({","});
        expect({"then"});
        if (!accept({"we"})) w.subject = expect_term();
        if (accept({"must"})) {
            w.modality = WheneverThen::Modality::Must;
        } else if (accept({"can"})) {
            w.modality = WheneverThen::Modality::Can;
        } else {
            fail("'must' or 'can'");
        }
        expect({"have"});
        w.quantity = parse_quantity();
        MentionOpts ho;
        ho.conditions = false;
        w.heads.push_back(parse_mention(ho));
        w.restated.push_back(std::nullopt);
        while (accept({"or"}) || accept({",", "or"})) {
            std::optional<WheneverThen::Modality> m;
            accept({"we"});
            if (accept({"must"})) m = WheneverThen::Modality::Must;
            else if (accept({"can"})) m = WheneverThen::Modality::Can;
            if (m) expect({"have"});
            w.restated.push_back(m);
            w.heads.push_back(parse_mention(ho));
        }
        if (accept({"such", "that", "there", "is"})) {
            w.suchThat.push_back(parse_mention(MentionOpts{}));
            while (tok_is(0, ",") && article_at(1)) {
                ++p_;
                w.suchThat.push_back(parse_mention(MentionOpts{}));
            }
        }
        if ((tok_is(0, "to") || tok_is(0, "in")) && quantity_start(1)) {
            w.targetPreposition = peek().text;
            ++p_;
        }
        if (quantity_start(0)) {
            w.targetQuantity = parse_quantity();
            w.targets.push_back(parse_mention(MentionOpts{}));
            while (at_seq({",", "and"}) || tok_is(0, ",")) {
                if (!accept({",", "and"})) accept({","});
                w.targets.push_back(parse_mention(MentionOpts{}));
            }
        }
        if (accept({"for"})) {
            w.duration = parse_expr();
            if (!is_word(0)) fail("a temporal unit");
            std::string u = lex_.singular(peek().text);
            w.durationUnit = u.empty() ? to_lower(peek().text) : u;
            ++p_;
        }
        return w;
    }

    QuantifiedChoice parse_quantified_choice() {
        QuantifiedChoice q;
        expect({"Every"});
        q.subject = parse_mention(MentionOpts{});
        expect({"can"});
        while (!at_end() && !quantity_start(0) && !at_seq({"for", "each"})) {
            if (!q.verb.empty() && object_start(0)) break;
            if (!is_word(0)) fail("a verb");
            q.verb.push_back(peek().text);
            ++p_;
        }
        if (q.verb.empty()) fail("a verb");
        q.quantity = parse_quantity();
        if (!at_end() && !at_seq({"for", "each"})) {
            MentionOpts o;
            o.relative = true;
            q.objects.push_back(parse_mention(o));
            while (accept({"or"}) || accept({",", "or"})) {
                q.disjunctive = true;
                q.objects.push_back(parse_mention(o));
            }
        }
        while (accept({"for", "each"})) {
            MentionOpts o;
            o.label = false;
            q.forEach.push_back(parse_mention(o));
            accept({"and"});
        }
        return q;
    }

    // ---- definitions ----

    Words words_until(const std::function<bool()>& stop) {
        Words w;
        while (!at_end() && !stop()) {
            if (!is_word(0)) fail("a word");
            w.push_back(peek().text);
            ++p_;
        }
        if (w.empty()) fail("a name");
        return w;
    }

    std::vector<Words> parse_decl_list(bool by) {
        std::vector<Words> out;
        for (;;) {
            if (by) accept({"by"});
            accept_article();
            out.push_back(
                words_until([this] { return tok_is(0, ",") || tok_is(0, "and") || tok_is(0, "has"); }));
            if (accept({","})) {
                accept({"and"});
            } else if (!accept({"and"})) {
                break;
            }
            if (tok_is(0, "has") || at_end()) break;
        }
        return out;
    }

    DomainDefinition parse_domain() {
        DomainDefinition d;
        accept_article();
        d.name = words_until([this] { return at_seq({"is", "identified", "by"}) || tok_is(0, "has"); });
        if (accept({"is", "identified", "by"})) d.keys = parse_decl_list(true);
        accept({","});
        accept({"and"});
        if (accept({"has"})) d.params = parse_decl_list(false);
        return d;
    }

    TemporalDefinition parse_temporal() {
        TemporalDefinition t;
        accept_article();
        t.name = words_until([this] { return at_seq({"is", "a", "temporal"}); });
        expect({"is", "a", "temporal", "concept", "expressed", "in"});
        if (!(tok_is(0, "minutes") || tok_is(0, "days") || tok_is(0, "steps"))) fail("minutes, days or steps");
        t.unit = peek().text;
        ++p_;
        expect({"ranging", "from"});
        t.start = peek().text;
        ++p_;
        expect({"to"});
        t.end = peek().text;
        ++p_;
        if (accept({"with", "a", "length", "of"})) {
            if (peek().kind != TokenKind::Number) fail("a number");
            t.length = std::stol(peek().text);
            ++p_;
            if (!(tok_is(0, "minutes") || tok_is(0, "days"))) fail("minutes or days");
            t.lengthUnit = peek().text;
            ++p_;
        }
        return t;
    }

    ConstantDefinition parse_constant() {
        ConstantDefinition c;
        c.name = peek().text;
        ++p_;
        expect({"is", "a", "constant"});
        if (accept({"equal", "to"})) c.value = expect_term();
        return c;
    }

    std::vector<Term> parse_value_list() {
        std::vector<Term> out;
        out.push_back(expect_term());
        for (;;) {
            if (tok_is(0, ",") && !at_seq({",", "and", "has"})) {
                ++p_;
                accept({"and"});
                out.push_back(expect_term());
                continue;
            }
            if (tok_is(0, "and") && !tok_is(1, "has") && !tok_is(1, "is")) {
                ++p_;
                out.push_back(expect_term());
                continue;
            }
            break;
        }
        return out;
    }

    CompoundDefinition parse_compound() {
        CompoundDefinition c;
        accept_article();
        c.name = words_until([this] { return at_seq({"goes", "from"}) || at_seq({"is", "one", "of"}); });
        if (accept({"goes", "from"})) {
            c.range = true;
            c.from = parse_expr();
            expect({"to"});
            c.to = parse_expr();
            if (accept({"and", "is", "made", "of"})) {
                c.madeOf.push_back(words_until([this] { return tok_is(0, "that"); }));
                while (accept({"that", "are", "made", "of"}))
                    c.madeOf.push_back(words_until([this] { return tok_is(0, "that"); }));
            }
        } else {
            expect({"is", "one", "of"});
            c.range = false;
            c.items = parse_value_list();
            while (accept({"and", "has"}) || accept({",", "and", "has"})) {
                CompoundDefinition::ListAttribute a;
                a.name = words_until([this] { return tok_is(0, "that"); });
                expect({"that"});
                if (!accept({"is"})) expect({"are"});
                expect({"equal", "to", "respectively"});
                a.values = parse_value_list();
                c.attributes.push_back(std::move(a));
            }
        }
        return c;
    }

    EnumerativeDefinition parse_enumerative() {
        EnumerativeDefinition e;
        if (value_at(0) && (at_seq({"is", "a"}, 1) || at_seq({"is", "an"}, 1))) {
            e.isA = true;
            e.value = term_at(0);
            p_ += 3;
            e.concept_name = words_until([] { return false; });
            return e;
        }
        ClauseOpts o;
        e.statement = parse_clause(o);
        if (accept({"when"})) e.when = parse_clause_list(o);
        if (accept({",", "where"})) e.where = parse_where();
        return e;
    }

    const std::vector<Token>& t_;
    const Lexicon& lex_;
    std::size_t p_ = 0;
};

Lexicon initial_lexicon(const std::vector<std::vector<Token>>& sentences) {
    Lexicon lex;
    for (const auto& s : sentences) {
        if (s.size() >= 4 && s[0].kind == TokenKind::Word && s[1].is_word("is") && s[2].is_word("a") &&
            s[3].is_word("constant"))
            lex.add_constant(s[0].text);
    }
    for (const auto& s : sentences) {
        bool definition = false;
        for (std::size_t i = 0; i + 2 < s.size(); ++i) {
            if ((s[i].is_word("identified") && s[i + 1].is_word("by")) ||
                (s[i].is_word("temporal") && s[i + 1].is_word("concept")) ||
                (s[i].is_word("goes") && s[i + 1].is_word("from")) ||
                (s[i].is_word("one") && s[i + 1].is_word("of") && i > 0 && s[i - 1].is_word("is")))
                definition = true;
            if (s[i].is_comma()) break;
        }
        if (!definition) continue;
        try {
            Parser p(s, lex);
            lex.learn(p.parse_sentence());
        } catch (const CompileError&) {
        }
    }
    return lex;
}

}  // namespace

ParseResult parse_document(const std::vector<Token>& tokens) {
    ParseResult result;
    std::vector<std::vector<Token>> sentences;
    std::vector<Token> cur;
    for (const auto& t : tokens) {
        cur.push_back(t);
        if (t.is_dot()) {
            sentences.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) {
        SourceSpan span = cur.back().span;
        result.diagnostics.push_back(Diagnostic{ErrorKind::UnterminatedProposition, span,
                                                "the last sentence does not end with a dot"});
    }
    Lexicon lex = initial_lexicon(sentences);
    for (const auto& s : sentences) {
        if (s.size() == 1) {
            result.diagnostics.push_back(
                Diagnostic{ErrorKind::SyntaxError, s[0].span, "expected a sentence but found '.'"});
            continue;
        }
        try {
            Parser p(s, lex);
            Proposition prop = p.parse_sentence();
            lex.learn(prop);
            result.propositions.push_back(std::move(prop));
        } catch (const CompileError& e) {
            result.diagnostics.push_back(e.diagnostic());
        }
    }
    return result;
}

ParseResult parse_text(std::string_view source) {
    try {
        return parse_document(tokenize(source));
    } catch (const CompileError& e) {
        ParseResult r;
        r.diagnostics.push_back(e.diagnostic());
        return r;
    }
}

}  // namespace cnl2asp::cnl
