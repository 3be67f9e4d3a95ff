#include "builder.h"

#include <algorithm>
#include <functional>
#include <regex>

namespace cnl2asp::detail {

namespace {

const std::string kPlaceholder = "@c";

bool is_angle_attribute(const std::string& name) {
    return name == "angle" || (name.size() > 6 && name.compare(name.size() - 6, 6, " angle") == 0);
}

template <typename F>
void for_each_term(asp::BodyElement& e, F&& f);

template <typename F>
void for_each_term(asp::Atom& a, F&& f) {
    for (Term& t : a.args) f(t);
}

template <typename F>
void for_each_term(asp::BodyElement& e, F&& f) {
    switch (e.kind) {
    case asp::BodyElement::Kind::Literal: for_each_term(e.atom, f); break;
    case asp::BodyElement::Kind::Comparison:
        f(e.cmp.lhs);
        f(e.cmp.rhs);
        break;
    case asp::BodyElement::Kind::Aggregate:
        for (Term& t : e.agg.front().terms) f(t);
        for (asp::BodyElement& c : e.agg.front().condition) for_each_term(c, f);
        f(e.agg.front().guard);
        break;
    }
}

template <typename F>
void for_each_term(asp::Head& h, F&& f) {
    for (asp::Atom& a : h.atoms) for_each_term(a, f);
    for (asp::ChoiceElement& c : h.elements) {
        for_each_term(c.atom, f);
        for (asp::BodyElement& e : c.condition) for_each_term(e, f);
    }
    if (h.lower) f(*h.lower);
    if (h.upper) f(*h.upper);
}

template <typename F>
void for_each_term(asp::Statement& s, F&& f) {
    for_each_term(s.head, f);
    for (asp::BodyElement& e : s.body) for_each_term(e, f);
    if (s.weak) {
        f(s.weight);
        for (Term& t : s.terms) f(t);
    }
}

void visit_placeholders(const Term& t, const std::function<void(int)>& f) {
    int c;
    if (is_placeholder(t, &c)) {
        f(c);
        return;
    }
    for (const Term& a : t.args) visit_placeholders(a, f);
}

Term strip_paren(const Term& t) { return t.kind == Term::Kind::Paren ? t.args[0] : t; }

bool mentions_any(const Term& t, const std::set<std::string>& names) {
    std::vector<std::string> vars;
    collect_variables(t, vars);
    return std::any_of(vars.begin(), vars.end(), [&](const std::string& v) { return names.count(v) != 0; });
}

}  // namespace

bool is_placeholder(const Term& t, int* cell) {
    if (t.kind != Term::Kind::Variable || t.name.compare(0, kPlaceholder.size(), kPlaceholder) != 0) return false;
    if (cell) *cell = std::stoi(t.name.substr(kPlaceholder.size()));
    return true;
}

Term substitute(const Term& t, const std::map<std::string, Term>& subst) {
    if (t.is_variable()) {
        auto it = subst.find(render(t));
        if (it != subst.end()) return it->second;
        return t;
    }
    Term out = t;
    for (Term& a : out.args) a = substitute(a, subst);
    return out;
}

asp::Statement substitute(const asp::Statement& s, const std::map<std::string, Term>& subst) {
    asp::Statement out = s;
    for_each_term(out, [&](Term& t) { t = substitute(t, subst); });
    return out;
}

asp::Statement renumber(const asp::Statement& s) {
    std::string text = render(s);
    std::map<std::string, Term> mapping;
    long next = 1;
    static const std::regex gen(R"(_X(\d+))");
    for (auto it = std::sregex_iterator(text.begin(), text.end(), gen); it != std::sregex_iterator(); ++it) {
        std::string name = (*it)[0].str();
        if (!mapping.count(name)) mapping[name] = Term::gen(next++);
    }
    // Two-step renaming through the map keeps swaps consistent.
    return substitute(s, mapping);
}

int RuleBuilder::new_cell(std::optional<Term> value) {
    cells_.push_back(Cell{std::move(value), false, false});
    return static_cast<int>(cells_.size()) - 1;
}

Term RuleBuilder::cell_term(int cell) const { return Term::var(kPlaceholder + std::to_string(cell)); }

Term RuleBuilder::fresh() {
    int c = new_cell();
    force(c);
    return cell_term(c);
}

Node RuleBuilder::make_node(const Attribute& a, int depth) {
    Node n;
    const ConceptSignature* ref = a.is_reference() ? reg.find(a.reference) : nullptr;
    if (!ref || depth > 8) {
        n.cell = new_cell();
        if (is_angle_attribute(a.name) && reg.find("angle")) mark_angle(n.cell);
        return n;
    }
    n.ref = ref->name;
    for (const Attribute& k : ref->keys) {
        n.keys.push_back(make_node(k, depth + 1));
        if (ref->name == "angle" && n.keys.back().cell >= 0) mark_angle(n.keys.back().cell);
    }
    return n;
}

int RuleBuilder::instantiate(const ConceptSignature& sig) {
    Instance inst;
    inst.sig = &sig;
    for (std::size_t i = 0; i < sig.arity(); ++i) inst.slots.push_back(make_node(sig.attribute(i), 0));
    if (sig.name == "angle" && !inst.slots.empty() && inst.slots[0].cell >= 0) mark_angle(inst.slots[0].cell);
    instances_.push_back(std::move(inst));
    int id = static_cast<int>(instances_.size()) - 1;
    if (sig.label_slot) instances_.back().labelCell = leaf_cell(instances_.back().slots[*sig.label_slot]);
    return id;
}

int RuleBuilder::leaf_cell(Node& n) {
    if (n.cell >= 0) return n.cell;
    if (n.keys.empty()) {
        n.cell = new_cell();
        return n.cell;
    }
    return leaf_cell(n.keys.front());
}

Term RuleBuilder::node_term(const Node& n) const {
    if (n.cell >= 0) return cell_term(n.cell);
    std::vector<Term> args;
    for (const Node& k : n.keys) args.push_back(node_term(k));
    return Term::func(Registry::predicate_name(n.ref), std::move(args));
}

asp::Atom RuleBuilder::atom_of(const ConceptSignature& sig, const std::vector<Node>& slots) const {
    asp::Atom a{sig.predicate, {}};
    for (const Node& n : slots) a.args.push_back(node_term(n));
    return a;
}

asp::Atom RuleBuilder::atom_of(int id) const { return atom_of(*instance(id).sig, instance(id).slots); }

Term RuleBuilder::ref_term(int id) const {
    const Instance& inst = instance(id);
    std::vector<Term> args;
    for (std::size_t i = 0; i < inst.sig->keys.size(); ++i) args.push_back(node_term(inst.slots[i]));
    return Term::func(inst.sig->predicate, std::move(args));
}

Term RuleBuilder::value_term(int id) {
    const Instance& inst = instance(id);
    if (inst.labelCell >= 0) return cell_term(inst.labelCell);
    return ref_term(id);
}

void RuleBuilder::link(Node& target, int id) const {
    const Instance& inst = instance(id);
    if (target.cell >= 0) {
        if (inst.labelCell >= 0) target.cell = inst.labelCell;
        return;
    }
    target.keys.assign(inst.slots.begin(), inst.slots.begin() + static_cast<long>(inst.sig->keys.size()));
}

void RuleBuilder::add(Group g, asp::BodyElement e, int groupInstance) {
    group(g).push_back(Item{std::move(e), groupInstance});
}

void RuleBuilder::add_atom(Group g, int instanceId, bool negated) {
    add(g, asp::BodyElement::literal(atom_of(instanceId), negated));
}

void RuleBuilder::add_cmp(Group g, Term lhs, asp::CmpOp op, Term rhs) {
    add(g, asp::BodyElement::comparison(std::move(lhs), op, std::move(rhs)));
}

std::vector<Item> RuleBuilder::body() const {
    std::vector<Item> out;
    for (const auto& g : groups_) out.insert(out.end(), g.begin(), g.end());
    return out;
}

asp::Statement RuleBuilder::finalize(const Draft& d) const {
    // Count placeholder uses outside conditional grouping atoms.
    std::vector<int> uses(cells_.size(), 0);
    auto count = [&](const Term& t) {
        visit_placeholders(t, [&](int c) { ++uses[static_cast<std::size_t>(c)]; });
    };
    asp::Statement s;
    s.head = d.head;
    s.weak = d.weak;
    s.weight = d.weight;
    s.level = d.level;
    s.terms = d.discriminants;
    for_each_term(s.head, count);
    for (const Item& it : d.body) {
        if (it.groupInstance >= 0) continue;
        asp::BodyElement e = it.element;
        for_each_term(e, count);
    }
    if (d.weak) {
        count(d.weight);
        for (const Term& t : d.discriminants) count(t);
    }
    // Cell values may mention other cells; count those as uses too.
    for (std::size_t c = 0; c < cells_.size(); ++c)
        if (cells_[c].value && uses[c] > 0) count(*cells_[c].value);

    std::vector<std::optional<Term>> resolved(cells_.size());
    std::function<Term(int)> resolve = [&](int c) -> Term {
        auto& r = resolved[static_cast<std::size_t>(c)];
        if (r) return *r;
        const Cell& cell = cells_[static_cast<std::size_t>(c)];
        if (cell.value) {
            r = cell.value;  // guard against self reference
            std::function<Term(const Term&)> sub = [&](const Term& t) -> Term {
                int inner;
                if (is_placeholder(t, &inner)) return inner == c ? Term::anon() : resolve(inner);
                Term out = t;
                for (Term& a : out.args) a = sub(a);
                return out;
            };
            r = sub(*cell.value);
        } else if (cell.forced || uses[static_cast<std::size_t>(c)] >= 2) {
            r = Term::gen(nextFresh_++);
        } else {
            r = Term::anon();
        }
        return *r;
    };
    std::function<Term(const Term&)> resolve_term = [&](const Term& t) -> Term {
        int c;
        if (is_placeholder(t, &c)) return resolve(c);
        Term out = t;
        for (Term& a : out.args) a = resolve_term(a);
        return out;
    };
    auto fix = [&](Term& t) { t = resolve_term(t); };

    for_each_term(s.head, fix);
    std::vector<asp::BodyElement> body;
    std::vector<asp::BodyElement> conditional;
    std::vector<int> conditionalAt;
    for (const Item& it : d.body) {
        asp::BodyElement e = it.element;
        for_each_term(e, fix);
        if (it.groupInstance >= 0) {
            conditional.push_back(e);
            conditionalAt.push_back(static_cast<int>(body.size()));
            body.push_back(e);
            continue;
        }
        body.push_back(std::move(e));
    }
    // Grouping atoms stay only if their variables are not bound by another positive atom.
    if (!conditional.empty()) {
        std::set<std::string> bound;
        for (std::size_t i = 0; i < body.size(); ++i) {
            if (std::find(conditionalAt.begin(), conditionalAt.end(), static_cast<int>(i)) != conditionalAt.end())
                continue;
            const asp::BodyElement& e = body[i];
            if (e.kind == asp::BodyElement::Kind::Literal && !e.negated) {
                std::vector<std::string> v;
                collect_variables(e, v);
                bound.insert(v.begin(), v.end());
            }
        }
        std::vector<asp::BodyElement> kept;
        for (std::size_t i = 0; i < body.size(); ++i) {
            auto pos = std::find(conditionalAt.begin(), conditionalAt.end(), static_cast<int>(i));
            if (pos == conditionalAt.end()) {
                kept.push_back(body[i]);
                continue;
            }
            std::vector<std::string> v;
            collect_variables(body[i], v);
            bool needed = !v.empty() && std::any_of(v.begin(), v.end(), [&](const std::string& n) {
                return !bound.count(n);
            });
            bool duplicate = std::find(kept.begin(), kept.end(), body[i]) != kept.end();
            if (needed && !duplicate) {
                kept.push_back(body[i]);
                bound.insert(v.begin(), v.end());
            }
        }
        body = std::move(kept);
    }

    // Angle comparisons are taken modulo 360.
    std::set<std::string> angles;
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        if (!cells_[c].angle) continue;
        Term v = resolve(static_cast<int>(c));
        if (v.is_variable()) angles.insert(render(v));
    }
    if (!angles.empty()) {
        for (asp::BodyElement& e : body) {
            if (e.kind != asp::BodyElement::Kind::Comparison) continue;
            for (Term* side : {&e.cmp.lhs, &e.cmp.rhs})
                if (mentions_any(*side, angles)) *side = Term::mod(strip_paren(*side), 360);
        }
    }
    s.body = std::move(body);
    if (s.weak) {
        fix(s.weight);
        for (Term& t : s.terms) fix(t);
    }

    // Binding atoms for variables left unsafe.
    std::map<std::string, Term> groundBound;
    for (const auto& v : d.bound) groundBound[v] = Term::num(0);
    auto unsafe = [&] {
        std::vector<std::string> out;
        for (const auto& v : asp::is_safe(substitute(s, groundBound)).unbound)
            if (!d.bound.count(v)) out.push_back(v);
        return out;
    };
    for (int round = 0; round < 8; ++round) {
        std::vector<std::string> unbound = unsafe();
        if (unbound.empty()) break;
        bool progress = false;
        for (const std::string& var : unbound) {
            for (std::size_t id = 0; id < instances_.size(); ++id) {
                const Instance& inst = instances_[id];
                if (inst.labelCell < 0) continue;
                Term v = resolve(inst.labelCell);
                if (!v.is_variable() || render(v) != var) continue;
                asp::Atom a = atom_of(static_cast<int>(id));
                for (Term& t : a.args) fix(t);
                asp::BodyElement e = asp::BodyElement::literal(a);
                if (std::find(s.body.begin(), s.body.end(), e) == s.body.end()) {
                    s.body.push_back(e);
                    progress = true;
                }
                break;
            }
        }
        if (!progress) break;
    }
    if (std::vector<std::string> unbound = unsafe(); !unbound.empty()) {
        std::string vars;
        for (const auto& v : unbound) vars += (vars.empty() ? "" : ", ") + v;
        throw CompileError(ErrorKind::UnsafeRule, "unbound variables " + vars + " in: " + render(renumber(s)));
    }

    if (s.weak) {
        if (d.mode == Discriminants::Globals) {
            std::set<std::string> excluded = d.excluded;
            std::vector<std::string> w;
            collect_variables(s.weight, w);
            excluded.insert(w.begin(), w.end());
            for (int c : d.excludedCells) {
                Term v = resolve(c);
                if (v.is_variable()) excluded.insert(render(v));
            }
            std::vector<std::string> vars;
            for (const asp::BodyElement& e : s.body)
                if (e.kind != asp::BodyElement::Kind::Aggregate) collect_variables(e, vars);
            s.terms.clear();
            for (const auto& v : vars) {
                if (excluded.count(v)) continue;
                asp::Term t = v.compare(0, 2, "_X") == 0 ? Term::gen(std::stol(v.substr(2))) : Term::var(v);
                s.terms.push_back(t);
            }
        } else {
            std::vector<Term> kept;
            for (const Term& t : s.terms)
                if (t.is_variable() && std::find(kept.begin(), kept.end(), t) == kept.end()) kept.push_back(t);
            s.terms = kept;
        }
    }
    return renumber(s);
}

}  // namespace cnl2asp::detail
