#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "builder.h"

namespace cnl2asp::detail {

/// Where mention atoms and comparisons go. With lists set, elements are collected locally
/// (aggregate and choice conditions) instead of entering the rule body.
struct Sink {
    Group atoms = Group::Main;
    Group cmps = Group::MainCmps;
    std::vector<asp::BodyElement>* atomList = nullptr;
    std::vector<asp::BodyElement>* cmpList = nullptr;

    static Sink local(std::vector<asp::BodyElement>& atoms, std::vector<asp::BodyElement>& cmps) {
        Sink s;
        s.atomList = &atoms;
        s.cmpList = &cmps;
        return s;
    }
};

struct AggregateResult {
    asp::Aggregate agg;
    std::vector<Term> grouping;  // grouping variables, usable as discriminants
};

/// An argument offered to a verb: placed at the first free slot of the same concept.
struct Slotted {
    std::string concept_name;
    Term value;
};

/// Translates the parts of one sentence into a RuleBuilder.
class Translator {
public:
    Translator(Registry& reg, const std::vector<cnl::WhereCondition>& where, bool allowImplicit = false);

    Registry& reg;
    RuleBuilder b;

    const ConceptSignature* find_concept(const cnl::Words& words) const;
    const ConceptSignature& concept_of(const cnl::Words& words);
    /// Concept measured by a unit word: "day", "days", "step", "timeslots".
    std::string concept_for_unit(const std::string& unit) const;
    Term value_of(const cnl::Term& t) const;

    int mention(const cnl::Mention& m, const Sink& sink, bool addAtom);
    Term expr(const cnl::Expr& e);
    void condition(const cnl::Condition& c, bool negate, const Sink& sink);
    /// Adds the clause to the body; `flip` toggles its polarity.
    void clause(const cnl::SimpleClause& c, const Sink& sink, bool flip);
    /// Atom of a clause used as a rule head or fact.
    asp::Atom clause_atom(const cnl::SimpleClause& c, const Sink& sink, const std::vector<Slotted>& extra = {});
    /// Aggregate with grouping atoms added to `g` (before the aggregate itself).
    AggregateResult aggregate(const cnl::Aggregate& a, Group g);

    /// Comparison and "between" where-conditions; "one of" is applied by expand().
    void where_conditions();
    /// One statement per combination of "one of" values, duplicates removed.
    std::vector<asp::Statement> expand(const asp::Statement& s) const;

    Term shifted(const std::string& concept_name, long offset, const std::optional<Term>& anchor = std::nullopt);
    /// Value of instance `id` as an argument; its label cell is forced to a variable.
    Term forced_value(int id);
    std::vector<Term> key_terms(int id);
    std::optional<int> lastSubject;
    std::optional<asp::Atom> light_verb(const std::string& pred, int subject, const std::vector<int>& objects);
    asp::Atom place(const std::string& pred, const std::vector<Slotted>& items);
    /// Draft with the current body; "one of" variables count as bound.
    RuleBuilder::Draft draft() const;

private:
    std::vector<cnl::WhereCondition> where_;
    std::set<std::string> whereVars_;
    std::set<int> prefixed_;
    bool allowImplicit_;

    Node& node_at(int id, const std::vector<cnl::Words>& path);
    Node* temporal_node(int id, const std::string& concept_name);
    void assign(Node& n, const Term& value, const Sink& sink);
    void assign_expr(int id, Node& n, const cnl::Expr& e, const Sink& sink);
    Term node_value(Node& n);
    bool node_unset(const Node& n) const;
    void emit_atom(const Sink& s, asp::BodyElement e);
    void emit_cmp(const Sink& s, asp::BodyElement e);
    void update_cursors(int id, const std::string& skip);
    void add_prefix(int id);
    void ordinal_condition(int id, const cnl::Condition& c, int other);
    asp::CmpOp cmp_of(cnl::CmpWord w, const cnl::Expr& rhs) const;
    Term time_index(const cnl::Expr& e) const;
    asp::Atom place_concept(const ConceptSignature& sig, const std::vector<Slotted>& items);
    void window_count(const cnl::Window& w, const asp::Atom& atom, std::size_t slot, const Term& local,
                      bool negated, const Sink& sink);
    void add_grouping(int id, std::vector<Item>& out, std::vector<Term>& vars);
};

asp::CmpOp to_cmp(cnl::CmpWord w);

}  // namespace cnl2asp::detail
