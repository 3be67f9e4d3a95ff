#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cnl2asp/diagnostics.h"

namespace cnl2asp::cnl {

using Words = std::vector<std::string>;

/// A value slot of a sentence: "X", "John", "1", or a registered constant name.
struct Term {
    enum class Kind { Variable, StringValue, NumberValue, ConstantRef };
    Kind kind = Kind::StringValue;
    std::string text;

    bool operator==(const Term&) const = default;
};

enum class CmpWord { Eq, Ne, Lt, Le, Gt, Ge, After, Before, NotAfter, NotBefore };

struct Aggregate;

struct Expr {
    enum class Kind {
        Term,
        Time,           // 11:20 AM
        Date,           // 01/01/2022
        Binary,         // operands[0] text operands[1]
        Abs,            // |e|
        Paren,          // (e)
        Negate,         // -e
        AttributeOf,    // the desired angle A of the rotation R
        EntityRef,      // the assignment A
        Sum,            // the sum between a, b, and c
        Difference,     // the difference between a and b
        AbsDifference,  // the difference in absolute value between a, and b
        Aggregate,      // the number of ...
    };
    Kind kind = Kind::Term;
    cnl::Term term;
    std::string text;  // literal text or operator
    std::vector<Expr> operands;
    Words attribute;
    std::optional<cnl::Term> attributeVar;
    Words concept_name;
    std::optional<cnl::Term> label;
    std::vector<Aggregate> aggregate;  // exactly one element for Kind::Aggregate

    static Expr of(cnl::Term t) {
        Expr e;
        e.term = std::move(t);
        return e;
    }
};

/// A comparison. For conditions attached to an attribute or mention, lhs is absent and the
/// attribute value is implied.
struct Condition {
    std::optional<Expr> lhs;
    CmpWord op = CmpWord::Eq;
    Expr rhs;
};

/// "the next step", "the previous step", "the next day", "the next step respect to T"
struct TemporalShift {
    int offset = 1;
    std::string unit;
    std::optional<Term> anchor;
};

/// "for 2 consecutive days", "the previous 2 consecutive days", "between each 14 days"
struct Window {
    enum class Kind { Consecutive, Previous, Each };
    Kind kind = Kind::Consecutive;
    long length = 1;
    std::string unit;
};

struct AttributeSpec {
    std::vector<Words> path;  // {"registration"},{"patient"} for nested references
    std::optional<Expr> value;
    std::vector<Condition> conditions;
    std::optional<TemporalShift> shift;
    bool with = true;  // false for comma lists without "with" ("position in id S, day D")
};

/// A reference to a concept instance: "a movie with id X", "waiter W", "the assignment A".
struct Mention {
    Words concept_name;
    std::optional<Term> label;
    std::optional<TemporalShift> shift;
    std::vector<AttributeSpec> attributes;
    std::vector<Condition> conditions;  // "that is after 0", "before S"
    std::string preposition;            // leading preposition of an extra object ("in")
    Words relativeVerb;                 // "a node connected to node X"
    std::vector<Mention> relativeObjects;
    bool negated = false;               // "there is not a rotation"
    bool article = false;
};

struct SimpleClause {
    std::string quantifier;  // "every" in quantified constraints
    std::optional<Mention> subject;
    std::optional<TemporalShift> shift;  // "the next day works in ..."
    std::optional<Window> window;
    bool negated = false;
    Words verb;
    std::vector<Mention> objects;
};

enum class AggFn { Count, Sum, Min, Max };

struct Aggregate {
    enum class Link { None, Where, That };
    AggFn fn = AggFn::Count;
    Words attribute;  // "value", "hours"
    Words counted;    // "pub", "nodes", "occurrences"
    std::optional<Mention> of;
    std::optional<Mention> in;
    std::vector<Mention> with;  // "days with shift vacation"
    std::optional<Window> window;
    Link link = Link::None;
    std::vector<SimpleClause> clause;  // zero or one
    std::vector<Mention> forEach;
    std::vector<Mention> suchThat;
    std::vector<Expr> ranging;  // "ranging between a and b": zero or two
};

struct WhereCondition {
    enum class Kind { Compare, OneOf, Between };
    Kind kind = Kind::Compare;
    Term variable;
    CmpWord op = CmpWord::Eq;
    Expr rhs;
    bool respectively = false;
    std::vector<Term> values;  // OneOf values, or Between bounds
};

struct Quantity {
    enum class Kind { None, Exactly, AtMost, AtLeast, Between };
    Kind kind = Kind::None;
    std::optional<Term> low;
    std::optional<Term> high;
};

// ---- propositions ------------------------------------------------------------------------

struct DomainDefinition {
    Words name;
    std::vector<Words> keys;
    std::vector<Words> params;
};

struct TemporalDefinition {
    Words name;
    std::string unit;  // minutes | days | steps
    std::string start;
    std::string end;
    std::optional<long> length;
    std::string lengthUnit;
};

struct ConstantDefinition {
    std::string name;
    std::optional<Term> value;
    bool negativeNumber = false;
};

struct CompoundDefinition {
    struct ListAttribute {
        Words name;
        std::vector<Term> values;
    };
    Words name;
    bool range = true;
    Expr from;
    Expr to;
    std::vector<Term> items;
    std::vector<ListAttribute> attributes;
    std::vector<Words> madeOf;
};

struct EnumerativeDefinition {
    bool isA = false;  // "John is a waiter."
    Term value;
    Words concept_name;
    SimpleClause statement;
    std::vector<SimpleClause> when;
    std::vector<WhereCondition> where;
};

struct WheneverThen {
    enum class Modality { Must, Can };
    std::vector<Mention> whenever;
    Modality modality = Modality::Must;
    std::optional<Term> subject;  // "R can have ...", absent for "we"
    Quantity quantity;            // "at most 1 topmovie"
    std::vector<Mention> heads;   // more than one means "or"
    /// Modality restated before a later head ("or can have ..."); parallel to heads.
    std::vector<std::optional<Modality>> restated;
    std::vector<Mention> suchThat;
    Quantity targetQuantity;      // "to exactly 1 day, and timeslot"
    std::string targetPreposition;
    std::vector<Mention> targets;
    std::optional<Expr> duration;  // "for PH4 timeslots"
    std::string durationUnit;
};

struct FactProposition {
    Mention mention;
};

struct QuantifiedChoice {
    Mention subject;
    Words verb;
    Quantity quantity;
    bool disjunctive = false;
    std::vector<Mention> objects;
    std::vector<Mention> forEach;
};

struct ConstraintBody {
    enum class Kind { Clauses, Condition, WhenThen, Quantified, Objective };
    Kind kind = Kind::Clauses;
    std::vector<SimpleClause> clauses;
    std::vector<SimpleClause> thenClauses;
    std::optional<Condition> condition;
    std::optional<Expr> objective;
    std::vector<Mention> leadingWhenever;
    std::vector<Mention> whenever;
    std::vector<WhereCondition> where;
};

struct StrongConstraint {
    bool required = false;
    ConstraintBody body;
};

struct WeakConstraint {
    enum class Direction { None, Maximize, Minimize };
    Direction prefix = Direction::None;
    Direction suffix = Direction::None;
    std::string priority;  // low | medium | high
    ConstraintBody body;
};

struct Proposition {
    enum class Kind {
        DomainDefinition,
        TemporalDefinition,
        ConstantDefinition,
        CompoundDefinition,
        EnumerativeDefinition,
        WheneverThen,
        FactProposition,
        QuantifiedChoice,
        NegativeStrongConstraint,
        PositiveStrongConstraint,
        WeakConstraint,
    };
    Kind kind = Kind::DomainDefinition;
    SourceSpan span;
    std::variant<DomainDefinition, TemporalDefinition, ConstantDefinition, CompoundDefinition,
                 EnumerativeDefinition, WheneverThen, FactProposition, QuantifiedChoice, StrongConstraint,
                 WeakConstraint>
        payload;
};

const char* proposition_kind_name(Proposition::Kind kind);
const char* cmp_word_text(CmpWord op);

std::string to_lower(std::string s);
std::string join(const Words& words, const std::string& sep = " ");
/// Lowercased, space-joined key used for concept and attribute lookup.
std::string key_of(const Words& words);

}  // namespace cnl2asp::cnl
