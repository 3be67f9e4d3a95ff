#include <algorithm>
#include <set>

#include "cnl2asp/asp/ast.h"

namespace cnl2asp::asp {

namespace {

using Names = std::set<std::string>;

void binding_vars(const Term& t, Names& out) {
    switch (t.kind) {
    case Term::Kind::Variable:
    case Term::Kind::Generated: out.insert(render(t)); break;
    case Term::Kind::Function:
        for (const Term& a : t.args) binding_vars(a, out);
        break;
    default: break;
    }
}

Names vars_of(const Term& t) {
    std::vector<std::string> v;
    collect_variables(t, v);
    return Names(v.begin(), v.end());
}

Names vars_of(const BodyElement& e) {
    std::vector<std::string> v;
    collect_variables(e, v);
    return Names(v.begin(), v.end());
}

bool subset(const Names& a, const Names& b) {
    return std::all_of(a.begin(), a.end(), [&](const std::string& n) { return b.count(n) != 0; });
}

/// Propagates bindings through positive atoms, equalities and assignment aggregates.
/// `globals` names the variables visible outside aggregates.
Names bound_by(const std::vector<BodyElement>& body, Names bound, const Names& globals) {
    for (const BodyElement& e : body)
        if (e.kind == BodyElement::Kind::Literal && !e.negated)
            for (const Term& t : e.atom.args) binding_vars(t, bound);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const BodyElement& e : body) {
            if (e.kind == BodyElement::Kind::Comparison && e.cmp.op == CmpOp::Eq) {
                const Term* sides[2] = {&e.cmp.lhs, &e.cmp.rhs};
                for (int i = 0; i < 2; ++i) {
                    const Term& target = *sides[i];
                    if (!target.is_variable() || bound.count(render(target))) continue;
                    if (subset(vars_of(*sides[1 - i]), bound)) {
                        bound.insert(render(target));
                        changed = true;
                    }
                }
            } else if (e.kind == BodyElement::Kind::Aggregate) {
                const Aggregate& a = e.agg.front();
                if (a.op != CmpOp::Eq || !a.guard.is_variable() || bound.count(render(a.guard))) continue;
                Names inner;
                for (const Term& t : a.terms)
                    for (const std::string& n : vars_of(t)) inner.insert(n);
                for (const BodyElement& c : a.condition)
                    for (const std::string& n : vars_of(c)) inner.insert(n);
                bool ok = true;
                for (const std::string& n : inner)
                    if (globals.count(n) && !bound.count(n)) ok = false;
                if (ok) {
                    bound.insert(render(a.guard));
                    changed = true;
                }
            }
        }
    }
    return bound;
}

void require(const Names& needed, const Names& bound, std::vector<std::string>& unbound) {
    for (const std::string& n : needed)
        if (!bound.count(n) && std::find(unbound.begin(), unbound.end(), n) == unbound.end())
            unbound.push_back(n);
}

}  // namespace

SafetyReport is_safe(const Statement& s) {
    // Globals: everything outside aggregate elements and choice elements, plus aggregate
    // variables shared with the outside.
    Names outside;
    for (const BodyElement& e : s.body) {
        if (e.kind == BodyElement::Kind::Aggregate) {
            for (const std::string& n : vars_of(e.agg.front().guard)) outside.insert(n);
        } else {
            for (const std::string& n : vars_of(e)) outside.insert(n);
        }
    }
    Names bodyVars = outside;
    for (const Atom& a : s.head.atoms)
        for (const Term& t : a.args)
            for (const std::string& n : vars_of(t)) outside.insert(n);
    if (s.head.lower)
        for (const std::string& n : vars_of(*s.head.lower)) outside.insert(n);
    if (s.head.upper)
        for (const std::string& n : vars_of(*s.head.upper)) outside.insert(n);
    if (s.weak) {
        for (const std::string& n : vars_of(s.weight)) outside.insert(n);
        for (const Term& t : s.terms)
            for (const std::string& n : vars_of(t)) outside.insert(n);
    }

    Names globals = outside;
    for (const BodyElement& e : s.body) {
        if (e.kind != BodyElement::Kind::Aggregate) continue;
        // An aggregate variable that also occurs in another aggregate is global as well.
        for (const BodyElement& other : s.body) {
            if (&other == &e || other.kind != BodyElement::Kind::Aggregate) continue;
            Names mine = vars_of(e), theirs = vars_of(other);
            for (const std::string& n : mine)
                if (theirs.count(n)) globals.insert(n);
        }
    }
    for (const ChoiceElement& c : s.head.elements) {
        Names elementVars;
        for (const Term& t : c.atom.args)
            for (const std::string& n : vars_of(t)) elementVars.insert(n);
        for (const BodyElement& e : c.condition)
            for (const std::string& n : vars_of(e)) elementVars.insert(n);
        for (const std::string& n : elementVars)
            if (bodyVars.count(n)) globals.insert(n);
    }

    SafetyReport report;
    Names bound = bound_by(s.body, {}, globals);
    require(globals, bound, report.unbound);

    for (const BodyElement& e : s.body) {
        if (e.kind != BodyElement::Kind::Aggregate) continue;
        const Aggregate& a = e.agg.front();
        Names local = bound_by(a.condition, bound, globals);
        for (const Term& t : a.terms) require(vars_of(t), local, report.unbound);
        for (const BodyElement& c : a.condition) require(vars_of(c), local, report.unbound);
    }
    for (const BodyElement& e : s.body)
        if (e.kind != BodyElement::Kind::Aggregate) require(vars_of(e), bound, report.unbound);
    for (const ChoiceElement& c : s.head.elements) {
        Names local = bound_by(c.condition, bound, globals);
        for (const Term& t : c.atom.args) require(vars_of(t), local, report.unbound);
        for (const BodyElement& e : c.condition) require(vars_of(e), local, report.unbound);
    }
    report.safe = report.unbound.empty();
    return report;
}

}  // namespace cnl2asp::asp
