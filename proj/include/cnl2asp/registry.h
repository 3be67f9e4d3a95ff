#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cnl2asp/asp/ast.h"
#include "cnl2asp/cnl/ast.h"

namespace cnl2asp {

struct Attribute {
    std::string name;       // lowercase, space-joined
    std::string reference;  // referenced concept, empty for a primitive attribute
    bool is_reference() const { return !reference.empty(); }
};

enum class ConceptKind { Domain, Temporal, Range, List, Implicit };

struct ConceptSignature {
    std::string name;       // lowercase, space-joined ("position in")
    std::string predicate;  // "position_in"
    ConceptKind kind = ConceptKind::Domain;
    std::vector<Attribute> keys;
    std::vector<Attribute> params;
    /// Argument a bare label ("waiter W", "shift S") fills; absent when the label names an
    /// instance of a concept with several keys ("registration R").
    std::optional<std::size_t> label_slot;
    std::vector<std::string> items;  // list concepts: values in declaration order
    std::optional<asp::Term> range_low;
    std::optional<asp::Term> range_high;

    std::size_t arity() const { return keys.size() + params.size(); }
    const Attribute& attribute(std::size_t position) const;
    std::optional<std::size_t> position_of(const std::string& attribute) const;
};

struct TemporalConcept {
    enum class Kind { Minutes, Days, Steps };
    std::string name;
    Kind kind = Kind::Steps;
    long start = 0;  // minute of day, day number since epoch, or step value
    long end = 0;
    long step = 1;
    std::vector<std::string> labels;  // labels[i] belongs to index i + 1

    long size() const { return static_cast<long>(labels.size()); }
    std::optional<long> index_of(const std::string& label) const;
    /// Throws std::out_of_range for indices outside [1, size()].
    const std::string& label_of(long index) const;
};

struct ConstantBinding {
    std::string name;
    std::optional<asp::Term> value;
};

struct VerbSignature {
    std::string predicate;
    std::string subject;               // concept of the first argument, may be empty
    std::vector<std::string> objects;  // concepts of the remaining arguments, may be empty
    std::size_t arity() const { return 1 + objects.size(); }
    /// Concept of argument i.
    const std::string& concept_at(std::size_t i) const { return i == 0 ? subject : objects[i - 1]; }
};

/// "07:30 AM" -> minutes after midnight. Throws CompileError(SyntaxError) on malformed text.
long parse_clock(const std::string& text);
/// Minutes after midnight -> "HH:MM".
std::string format_clock(long minutes);
/// "DD/MM/YYYY" -> days since 1970-01-01.
long parse_date(const std::string& text);
std::string format_date(long days);

class Registry {
public:
    const ConceptSignature& register_domain(const cnl::DomainDefinition& def);
    std::pair<TemporalConcept, std::vector<asp::Statement>> register_temporal(const cnl::TemporalDefinition& def);
    void register_constant(const cnl::ConstantDefinition& def);
    const ConceptSignature& register_range(const std::string& name, asp::Term low, asp::Term high);
    const ConceptSignature& register_list(const std::string& name, const std::vector<std::string>& items,
                                          const std::vector<std::string>& attributes);
    /// Concept introduced by use ("John is a waiter."): one primitive key per argument.
    const ConceptSignature& ensure_implicit(const std::string& name, std::size_t arity);
    /// Returns the stored signature, creating it on first use. Throws ArityConflict when the
    /// predicate was used with a different number of arguments.
    const VerbSignature& ensure_verb(const std::string& predicate, const std::string& subject,
                                     const std::vector<std::string>& objects);

    const ConceptSignature* find(const std::string& name) const;
    const TemporalConcept* temporal(const std::string& name) const;
    const VerbSignature* verb(const std::string& predicate) const;
    /// Temporal concept whose kind matches a literal ("11:20 AM" -> minutes, dates -> days).
    const TemporalConcept* temporal_of_kind(TemporalConcept::Kind kind) const;
    /// Temporal concept for a unit word ("day", "days", "step", "timeslots").
    const TemporalConcept* temporal_for_unit(const std::string& unit) const;

    bool is_constant(const std::string& name) const { return constants_.count(name) != 0; }
    /// Bound constants yield their value; unbound ones the bare symbol; other names nothing.
    std::optional<asp::Term> resolve_constant(const std::string& name) const;
    const std::map<std::string, ConstantBinding>& constants() const { return constants_; }
    /// Unbound constant names in declaration order.
    std::vector<std::string> unbound_constants() const;

    /// Atom of a concept with the given attributes placed at their declared positions; other
    /// positions are anonymous (references become c(_)). A plain term given for a reference
    /// attribute is wrapped as c(term). Throws UnknownAttribute / UndefinedSignature.
    asp::Atom signature_of(const std::string& concept_name, const std::map<std::string, asp::Term>& fields) const;

    /// Lowercases, drops copulas and articles, strips the third-person "s" of an active head
    /// verb and joins with '_': "works in" -> work_in, "is connected to" -> connected_to.
    static std::string normalize_verb(const cnl::Words& phrase, bool negated = false);
    static std::string predicate_name(const std::string& name);

    const std::vector<std::string>& concept_order() const { return order_; }

private:
    ConceptSignature& store(ConceptSignature sig);

    std::map<std::string, ConceptSignature> concepts_;
    std::vector<std::string> order_;
    std::map<std::string, TemporalConcept> temporals_;
    std::map<std::string, ConstantBinding> constants_;
    std::vector<std::string> constantOrder_;
    std::map<std::string, VerbSignature> verbs_;
};

}  // namespace cnl2asp
