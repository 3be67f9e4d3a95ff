#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cnl2asp/asp/ast.h"
#include "cnl2asp/cnl/ast.h"
#include "cnl2asp/registry.h"

namespace cnl2asp::detail {

using asp::Term;

/// One argument position of an atom under construction. A primitive argument owns a cell; a
/// reference argument holds the key positions of the referenced concept.
struct Node {
    int cell = -1;
    std::string ref;
    std::vector<Node> keys;
};

/// A concept instance mentioned in a rule. Cells are filled while the sentence is read and
/// resolved when the rule is finished: unset cells used once become "_", the others variables.
struct Instance {
    const ConceptSignature* sig = nullptr;
    std::vector<Node> slots;
    int labelCell = -1;
};

enum class Group { Prefix, WhenAtoms, WhenCmps, Main, MainCmps, Where, Tail, Count };

struct Item {
    asp::BodyElement element;
    int groupInstance = -1;  // kept only if the instance's label is not bound by another atom
};

/// Current position on a temporal axis, for "the next day" and windows.
struct Cursor {
    Term base;
    long offset = 0;
};

enum class Discriminants { None, Globals, Explicit };

class RuleBuilder {
public:
    explicit RuleBuilder(Registry& reg) : reg(reg) {}

    Registry& reg;

    // ---- cells -------------------------------------------------------------------------
    int new_cell(std::optional<Term> value = std::nullopt);
    Term cell_term(int cell) const;
    void set_cell(int cell, Term value) { cells_[static_cast<std::size_t>(cell)].value = std::move(value); }
    bool cell_set(int cell) const { return cells_[static_cast<std::size_t>(cell)].value.has_value(); }
    const std::optional<Term>& cell_value(int cell) const { return cells_[static_cast<std::size_t>(cell)].value; }
    void force(int cell) { cells_[static_cast<std::size_t>(cell)].forced = true; }
    void mark_angle(int cell) { cells_[static_cast<std::size_t>(cell)].angle = true; }
    /// A fresh variable that always survives finalization.
    Term fresh();

    // ---- instances ---------------------------------------------------------------------
    int instantiate(const ConceptSignature& sig);
    Instance& instance(int id) { return instances_[static_cast<std::size_t>(id)]; }
    const Instance& instance(int id) const { return instances_[static_cast<std::size_t>(id)]; }
    asp::Atom atom_of(int id) const;
    asp::Atom atom_of(const ConceptSignature& sig, const std::vector<Node>& slots) const;
    Term node_term(const Node& n) const;
    /// c(keys) for a referenced instance.
    Term ref_term(int id) const;
    /// The term an instance contributes as a verb argument.
    Term value_term(int id);
    /// Points `target` (a reference node) at the key positions of instance `id`.
    void link(Node& target, int id) const;
    /// First primitive cell under a node (descending into references).
    int leaf_cell(Node& n);

    std::map<std::string, int> labels;  // label text -> instance
    std::map<std::string, Cursor> cursors;

    // ---- body ----------------------------------------------------------------------------
    void add(Group g, asp::BodyElement e, int groupInstance = -1);
    void add_atom(Group g, int instanceId, bool negated = false);
    void add_cmp(Group g, Term lhs, asp::CmpOp op, Term rhs);
    std::vector<Item>& group(Group g) { return groups_[static_cast<std::size_t>(g)]; }

    /// Body elements in group order.
    std::vector<Item> body() const;

    // ---- output ----------------------------------------------------------------------------
    struct Draft {
        asp::Head head;
        std::vector<Item> body;
        bool weak = false;
        Term weight;
        long level = 1;
        Discriminants mode = Discriminants::None;
        std::vector<Term> discriminants;  // Explicit mode
        std::set<std::string> excluded;   // Globals mode: variables never used as discriminants
        std::vector<int> excludedCells;
        std::set<std::string> bound;  // variables substituted later ("one of" lists)
    };
    /// Resolves cells, appends binding atoms for unsafe variables, wraps angle comparisons,
    /// renumbers generated variables. Throws CompileError(UnsafeRule).
    asp::Statement finalize(const Draft& d) const;

    const std::vector<std::vector<Item>>& groups() const { return groups_; }

private:
    struct Cell {
        std::optional<Term> value;
        bool forced = false;
        bool angle = false;
    };
    std::vector<Cell> cells_;
    std::deque<Instance> instances_;
    std::vector<std::vector<Item>> groups_{static_cast<std::size_t>(Group::Count)};
    mutable long nextFresh_ = 1;

    Node make_node(const Attribute& a, int depth);
};

/// Placeholder name of a cell inside terms under construction.
bool is_placeholder(const Term& t, int* cell = nullptr);

/// Replaces every variable named in `subst` (by rendered name).
Term substitute(const Term& t, const std::map<std::string, Term>& subst);
asp::Statement substitute(const asp::Statement& s, const std::map<std::string, Term>& subst);

/// Renames generated variables _X<n> by first textual occurrence.
asp::Statement renumber(const asp::Statement& s);

}  // namespace cnl2asp::detail
