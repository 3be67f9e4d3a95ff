#pragma once

#include <optional>
#include <string>
#include <vector>

namespace cnl2asp::asp {

struct Term {
    enum class Kind {
        Variable,   // X, NURSE
        Generated,  // _X<ordinal>
        Anonymous,  // _
        Symbol,     // acceptableTemperature
        Number,
        String,     // rendered double-quoted
        Function,   // movie(I)
        Range,      // lo..hi
        Arith,      // lhs op rhs, op in + - *
        Paren,      // (e)
        Abs,        // |e|
        Mod,        // (e)\m
    };
    Kind kind = Kind::Anonymous;
    std::string name;  // variable, symbol, string, functor or operator
    long number = 0;   // numbers, generated ordinals, modulus
    std::vector<Term> args;

    static Term var(std::string name);
    static Term gen(long ordinal);
    static Term anon();
    static Term symbol(std::string name);
    static Term num(long value);
    static Term str(std::string value);
    static Term func(std::string functor, std::vector<Term> args);
    static Term range(Term lo, Term hi);
    static Term arith(std::string op, Term lhs, Term rhs);
    /// Unary minus: an Arith term with a single argument.
    static Term neg(Term inner);
    static Term paren(Term inner);
    static Term abs(Term inner);
    static Term mod(Term inner, long modulus);

    bool is_variable() const { return kind == Kind::Variable || kind == Kind::Generated; }
    bool operator==(const Term&) const = default;
};

struct Atom {
    std::string predicate;
    std::vector<Term> args;
    bool operator==(const Atom&) const = default;
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

const char* cmp_text(CmpOp op);
/// Complement used when a required condition becomes a violation body.
CmpOp negate(CmpOp op);
/// The operator that keeps the comparison true when its sides are swapped.
CmpOp mirror(CmpOp op);

struct Comparison {
    Term lhs;
    CmpOp op = CmpOp::Eq;
    Term rhs;
    bool operator==(const Comparison&) const = default;
};

struct BodyElement;

enum class AggFn { Count, Sum, Min, Max };

struct Aggregate {
    AggFn fn = AggFn::Count;
    std::vector<Term> terms;
    std::vector<BodyElement> condition;
    CmpOp op = CmpOp::Eq;
    Term guard;
    bool operator==(const Aggregate&) const;
};

struct BodyElement {
    enum class Kind { Literal, Comparison, Aggregate };
    Kind kind = Kind::Literal;
    Atom atom;
    bool negated = false;
    asp::Comparison cmp;
    std::vector<asp::Aggregate> agg;  // exactly one element for Kind::Aggregate

    static BodyElement literal(Atom a, bool negated = false);
    static BodyElement comparison(Term lhs, CmpOp op, Term rhs);
    static BodyElement aggregate(asp::Aggregate a);
    bool operator==(const BodyElement&) const = default;
};

struct ChoiceElement {
    Atom atom;
    std::vector<BodyElement> condition;
    bool operator==(const ChoiceElement&) const = default;
};

struct Head {
    enum class Kind { Empty, Normal, Disjunction, Choice };
    Kind kind = Kind::Empty;
    std::vector<Atom> atoms;              // Normal: one, Disjunction: several
    std::vector<ChoiceElement> elements;  // Choice
    std::optional<Term> lower;
    std::optional<Term> upper;
    bool operator==(const Head&) const = default;
};

/// A rule, constraint, fact or weak constraint.
struct Statement {
    bool weak = false;
    Head head;
    std::vector<BodyElement> body;
    Term weight;  // weak constraints only
    long level = 1;
    std::vector<Term> terms;
    bool operator==(const Statement&) const = default;
};

std::string render(const Term& t);
std::string render(const Atom& a);
std::string render(const BodyElement& e);
std::string render(const Statement& s);
/// One statement per line.
std::string render_program(const std::vector<Statement>& program);

/// Reads the ASP subset produced by render(). Throws std::runtime_error on malformed input.
std::vector<Statement> read_program(const std::string& text);

struct SafetyReport {
    bool safe = true;
    std::vector<std::string> unbound;  // offending variable names
};

/// Every global variable occurs in a positive body atom (or is fixed by an equality over
/// bound terms), and every aggregate or choice-element local variable occurs in a positive
/// atom of its own condition.
SafetyReport is_safe(const Statement& s);

/// Variable names in textual order, without duplicates.
void collect_variables(const Term& t, std::vector<std::string>& out);
void collect_variables(const BodyElement& e, std::vector<std::string>& out);
void collect_variables(const Statement& s, std::vector<std::string>& out);

}  // namespace cnl2asp::asp
