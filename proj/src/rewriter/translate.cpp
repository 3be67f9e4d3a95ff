#include "translate.h"

#include <algorithm>
#include <tuple>

namespace cnl2asp::detail {

namespace {

using asp::BodyElement;
using asp::CmpOp;

bool is_copula(const std::string& w) {
    static const std::set<std::string> copulas = {"is", "are", "be", "am", "was", "were", "been"};
    return copulas.count(cnl::to_lower(w)) != 0;
}

bool is_arith(const Term& t) {
    switch (t.kind) {
    case Term::Kind::Arith:
    case Term::Kind::Abs:
    case Term::Kind::Paren:
    case Term::Kind::Mod: return true;
    default: return false;
    }
}

Term plus(const Term& base, long offset) {
    if (offset == 0) return base;
    if (offset > 0) return Term::arith("+", base, Term::num(offset));
    return Term::arith("-", base, Term::num(-offset));
}

bool scoped_kind(ConceptKind k) { return k == ConceptKind::Temporal || k == ConceptKind::Range; }

asp::AggFn agg_fn(cnl::AggFn fn) {
    switch (fn) {
    case cnl::AggFn::Count: return asp::AggFn::Count;
    case cnl::AggFn::Sum: return asp::AggFn::Sum;
    case cnl::AggFn::Min: return asp::AggFn::Min;
    case cnl::AggFn::Max: return asp::AggFn::Max;
    }
    return asp::AggFn::Count;
}

std::string item_text(const Term& t) {
    if (t.kind == Term::Kind::String || t.kind == Term::Kind::Symbol) return t.name;
    return render(t);
}

}  // namespace

asp::CmpOp to_cmp(cnl::CmpWord w) {
    switch (w) {
    case cnl::CmpWord::Eq: return CmpOp::Eq;
    case cnl::CmpWord::Ne: return CmpOp::Ne;
    case cnl::CmpWord::Lt:
    case cnl::CmpWord::Before: return CmpOp::Lt;
    case cnl::CmpWord::Le:
    case cnl::CmpWord::NotAfter: return CmpOp::Le;
    case cnl::CmpWord::Gt:
    case cnl::CmpWord::After: return CmpOp::Gt;
    case cnl::CmpWord::Ge:
    case cnl::CmpWord::NotBefore: return CmpOp::Ge;
    }
    return CmpOp::Eq;
}

Translator::Translator(Registry& reg, const std::vector<cnl::WhereCondition>& where, bool allowImplicit)
    : reg(reg), b(reg), where_(where), allowImplicit_(allowImplicit) {
    for (const auto& w : where_)
        if (w.kind == cnl::WhereCondition::Kind::OneOf) whereVars_.insert(w.variable.text);
}

// ---- lookup -------------------------------------------------------------------------------

const ConceptSignature* Translator::find_concept(const cnl::Words& words) const {
    std::string key = cnl::key_of(words);
    if (key.empty()) return nullptr;
    if (const ConceptSignature* s = reg.find(key)) return s;
    auto strip = [&](const std::string& suffix, const std::string& repl) -> const ConceptSignature* {
        if (key.size() <= suffix.size() || key.compare(key.size() - suffix.size(), suffix.size(), suffix) != 0)
            return nullptr;
        return reg.find(key.substr(0, key.size() - suffix.size()) + repl);
    };
    if (const ConceptSignature* s = strip("ies", "y")) return s;
    if (const ConceptSignature* s = strip("es", "")) return s;
    return strip("s", "");
}

const ConceptSignature& Translator::concept_of(const cnl::Words& words) {
    if (const ConceptSignature* s = find_concept(words)) return *s;
    if (allowImplicit_) return reg.ensure_implicit(cnl::key_of(words), 1);
    throw CompileError(ErrorKind::UnknownConcept, "'" + cnl::join(words) + "' is not a defined concept");
}

std::string Translator::concept_for_unit(const std::string& unit) const {
    std::string u = cnl::to_lower(unit);
    if (const ConceptSignature* s = find_concept({u})) return s->name;
    if (const TemporalConcept* t = reg.temporal_for_unit(u)) return t->name;
    std::string single = u.size() > 1 && u.back() == 's' ? u.substr(0, u.size() - 1) : u;
    const TemporalConcept* t = nullptr;
    if (single == "step") t = reg.temporal_of_kind(TemporalConcept::Kind::Steps);
    else if (single == "minute" || single == "slot") t = reg.temporal_of_kind(TemporalConcept::Kind::Minutes);
    else if (single == "day") t = reg.temporal_of_kind(TemporalConcept::Kind::Days);
    if (t) return t->name;
    throw CompileError(ErrorKind::UnknownConcept, "no concept is measured in " + unit);
}

Term Translator::value_of(const cnl::Term& t) const {
    switch (t.kind) {
    case cnl::Term::Kind::Variable: return Term::var(t.text);
    case cnl::Term::Kind::NumberValue: return Term::num(std::stol(t.text));
    case cnl::Term::Kind::ConstantRef:
        if (auto v = reg.resolve_constant(t.text)) return *v;
        return Term::symbol(t.text);
    case cnl::Term::Kind::StringValue: {
        std::string s = t.text;
        if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
        if (!s.empty()) s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
        return Term::str(s);
    }
    }
    return Term::anon();
}

// ---- nodes --------------------------------------------------------------------------------

Node& Translator::node_at(int id, const std::vector<cnl::Words>& path) {
    Instance& inst = b.instance(id);
    std::string name = cnl::key_of(path.at(0));
    auto pos = inst.sig->position_of(name);
    if (!pos)
        throw CompileError(ErrorKind::UnknownAttribute,
                           "concept '" + inst.sig->name + "' has no attribute '" + name + "'");
    Node* n = &inst.slots[*pos];
    for (std::size_t i = 1; i < path.size(); ++i) {
        std::string sub = cnl::key_of(path[i]);
        const ConceptSignature* ref = n->ref.empty() ? nullptr : reg.find(n->ref);
        if (!ref) throw CompileError(ErrorKind::UnknownAttribute, "'" + name + "' has no attribute '" + sub + "'");
        auto p = ref->position_of(sub);
        if (!p || *p >= n->keys.size())
            throw CompileError(ErrorKind::UnknownAttribute,
                               "concept '" + ref->name + "' has no key attribute '" + sub + "'");
        n = &n->keys[*p];
        name = sub;
    }
    return *n;
}

Node* Translator::temporal_node(int id, const std::string& concept_name) {
    Instance& inst = b.instance(id);
    for (std::size_t i = 0; i < inst.sig->arity(); ++i)
        if (inst.sig->attribute(i).reference == concept_name) return &inst.slots[i];
    if (inst.sig->name == concept_name && inst.sig->label_slot) return &inst.slots[*inst.sig->label_slot];
    return nullptr;
}

void Translator::assign(Node& n, const Term& value, const Sink& sink) {
    if (n.cell >= 0) {
        if (!b.cell_set(n.cell)) {
            b.set_cell(n.cell, value);
        } else if (!(*b.cell_value(n.cell) == value)) {
            emit_cmp(sink, BodyElement::comparison(b.cell_term(n.cell), CmpOp::Eq, value));
        }
        return;
    }
    if (n.keys.size() == 1) {
        assign(n.keys[0], value, sink);
        return;
    }
    if (value.kind == Term::Kind::Function && value.name == Registry::predicate_name(n.ref) &&
        value.args.size() == n.keys.size()) {
        for (std::size_t i = 0; i < n.keys.size(); ++i) assign(n.keys[i], value.args[i], sink);
        return;
    }
    throw CompileError(ErrorKind::ArityConflict,
                       "'" + n.ref + "' needs " + std::to_string(n.keys.size()) + " values, got " + render(value));
}

void Translator::assign_expr(int, Node& n, const cnl::Expr& e, const Sink& sink) {
    if (e.kind == cnl::Expr::Kind::Term && e.term.kind == cnl::Term::Kind::Variable) {
        auto it = b.labels.find(e.term.text);
        if (it != b.labels.end() && n.cell < 0 && b.instance(it->second).sig->name == n.ref) {
            b.link(n, it->second);
            return;
        }
    }
    assign(n, expr(e), sink);
}

Term Translator::node_value(Node& n) {
    if (n.cell >= 0) {
        b.force(n.cell);
        return b.cell_term(n.cell);
    }
    if (n.keys.size() == 1) return node_value(n.keys[0]);
    for (Node& k : n.keys) node_value(k);
    return b.node_term(n);
}

bool Translator::node_unset(const Node& n) const {
    if (n.cell >= 0) return !b.cell_set(n.cell);
    return std::all_of(n.keys.begin(), n.keys.end(), [&](const Node& k) { return node_unset(k); });
}

Term Translator::forced_value(int id) {
    Instance& inst = b.instance(id);
    if (inst.labelCell >= 0) {
        b.force(inst.labelCell);
        return b.cell_term(inst.labelCell);
    }
    for (std::size_t i = 0; i < inst.sig->keys.size(); ++i) node_value(inst.slots[i]);
    return b.ref_term(id);
}

std::vector<Term> Translator::key_terms(int id) {
    Instance& inst = b.instance(id);
    if (inst.labelCell >= 0) return {forced_value(id)};
    std::vector<Term> out;
    for (std::size_t i = 0; i < inst.sig->keys.size(); ++i) out.push_back(node_value(inst.slots[i]));
    return out;
}

void Translator::emit_atom(const Sink& s, BodyElement e) {
    if (s.atomList) s.atomList->push_back(std::move(e));
    else b.add(s.atoms, std::move(e));
}

void Translator::emit_cmp(const Sink& s, BodyElement e) {
    if (s.cmpList) s.cmpList->push_back(std::move(e));
    else b.add(s.cmps, std::move(e));
}

// ---- temporal cursors -----------------------------------------------------------------------

void Translator::update_cursors(int id, const std::string& skip) {
    Instance& inst = b.instance(id);
    for (std::size_t i = 0; i < inst.sig->arity(); ++i) {
        const Attribute& a = inst.sig->attribute(i);
        if (!a.is_reference() || a.reference == skip) continue;
        const ConceptSignature* ref = reg.find(a.reference);
        if (!ref || !scoped_kind(ref->kind)) continue;
        b.cursors[a.reference] = Cursor{b.cell_term(b.leaf_cell(inst.slots[i])), 0};
    }
    if (scoped_kind(inst.sig->kind) && inst.sig->name != skip && inst.labelCell >= 0)
        b.cursors[inst.sig->name] = Cursor{b.cell_term(inst.labelCell), 0};
}

Term Translator::shifted(const std::string& concept_name, long offset, const std::optional<Term>& anchor) {
    if (anchor) return plus(*anchor, offset);
    auto it = b.cursors.find(concept_name);
    if (it == b.cursors.end()) return plus(b.fresh(), offset);
    int cell;
    if (is_placeholder(it->second.base, &cell)) b.force(cell);
    return plus(it->second.base, it->second.offset + offset);
}

// ---- mentions -------------------------------------------------------------------------------

void Translator::add_prefix(int id) {
    if (prefixed_.insert(id).second) b.add_atom(Group::Prefix, id);
}

void Translator::ordinal_condition(int id, const cnl::Condition& c, int other) {
    Instance& self = b.instance(id);
    Instance& ref = b.instance(other);
    int selfOrd = b.leaf_cell(self.slots[0]);
    int refOrd = b.leaf_cell(ref.slots[0]);
    b.force(selfOrd);
    b.force(refOrd);
    if (self.labelCell >= 0) b.force(self.labelCell);
    add_prefix(id);
    add_prefix(other);
    b.add_cmp(Group::MainCmps, b.cell_term(selfOrd), to_cmp(c.op), b.cell_term(refOrd));
    b.add_cmp(Group::Tail, b.cell_term(selfOrd), CmpOp::Ge, Term::num(1));
    b.add_cmp(Group::Tail, b.cell_term(selfOrd), CmpOp::Le, Term::num(static_cast<long>(self.sig->items.size())));
}

int Translator::mention(const cnl::Mention& m, const Sink& sink, bool addAtom) {
    const ConceptSignature& sig = concept_of(m.concept_name);
    int id = b.instantiate(sig);
    if (m.label) {
        int lc = b.instance(id).labelCell;
        if (lc >= 0) {
            b.set_cell(lc, value_of(*m.label));
        } else if (m.label->kind == cnl::Term::Kind::Variable) {
            auto it = b.labels.find(m.label->text);
            if (it != b.labels.end() && b.instance(it->second).sig == &sig) {
                for (std::size_t k = 0; k < sig.keys.size(); ++k)
                    b.instance(id).slots[k] = b.instance(it->second).slots[k];
            }
        }
        if (m.label->kind == cnl::Term::Kind::Variable) b.labels[m.label->text] = id;
    }
    std::string shiftConcept;
    auto apply_shift = [&](const cnl::TemporalShift& s, Node* target) {
        shiftConcept = concept_for_unit(s.unit);
        std::optional<Term> anchor;
        if (s.anchor) anchor = value_of(*s.anchor);
        Term v = shifted(shiftConcept, s.offset, anchor);
        if (!target) target = temporal_node(id, shiftConcept);
        if (!target)
            throw CompileError(ErrorKind::UnknownAttribute,
                               "concept '" + sig.name + "' has no " + shiftConcept + " attribute");
        assign(*target, v, sink);
    };
    if (m.shift) apply_shift(*m.shift, nullptr);
    std::vector<std::pair<std::size_t, const cnl::AttributeSpec*>> conditioned;
    for (const cnl::AttributeSpec& spec : m.attributes) {
        if (spec.path.empty()) {
            if (spec.shift) apply_shift(*spec.shift, nullptr);
            continue;
        }
        Node& n = node_at(id, spec.path);
        if (spec.shift) apply_shift(*spec.shift, &n);
        if (spec.value) assign_expr(id, n, *spec.value, sink);
        if (!spec.conditions.empty())
            conditioned.emplace_back(*sig.position_of(cnl::key_of(spec.path[0])), &spec);
    }
    // Emitted in a fixed order (attribute order, comparisons against a sibling attribute last) so
    // that the order of the "with" clauses does not show in the output.
    struct Pending {
        bool dependent;
        std::size_t pos;
        BodyElement cmp;
    };
    std::vector<Pending> pending;
    auto named_var = [](const cnl::AttributeSpec& spec) -> std::string {
        if (spec.value && spec.value->kind == cnl::Expr::Kind::Term &&
            spec.value->term.kind == cnl::Term::Kind::Variable)
            return spec.value->term.text;
        return "";
    };
    for (const auto& [pos, spec] : conditioned) {
        Node& n = node_at(id, spec->path);
        bool named = spec->value && spec->value->kind == cnl::Expr::Kind::Term &&
                     spec->value->term.kind == cnl::Term::Kind::Variable && n.cell >= 0;
        for (const cnl::Condition& c : spec->conditions) {
            if (named && c.op == cnl::CmpWord::Eq && c.rhs.kind != cnl::Expr::Kind::Aggregate) {
                b.set_cell(n.cell, expr(c.rhs));
                continue;
            }
            Term lhs = node_value(n);
            CmpOp op = cmp_of(c.op, c.rhs);
            Term rhs = expr(c.rhs);
            std::vector<std::string> vars;
            collect_variables(rhs, vars);
            bool dependent = false;
            for (const auto& other : conditioned) {
                std::string v = named_var(*other.second);
                if (other.second != spec && !v.empty() && std::find(vars.begin(), vars.end(), v) != vars.end())
                    dependent = true;
            }
            pending.push_back({dependent, pos, BodyElement::comparison(lhs, op, rhs)});
        }
    }
    std::stable_sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) {
        return std::tie(a.dependent, a.pos) < std::tie(b.dependent, b.pos);
    });
    for (Pending& p : pending) emit_cmp(sink, std::move(p.cmp));
    for (const cnl::Condition& c : m.conditions) {
        if (sig.kind == ConceptKind::List && c.rhs.kind == cnl::Expr::Kind::Term &&
            c.rhs.term.kind == cnl::Term::Kind::Variable) {
            auto it = b.labels.find(c.rhs.term.text);
            if (it != b.labels.end() && it->second != id && b.instance(it->second).sig == &sig) {
                ordinal_condition(id, c, it->second);
                continue;
            }
        }
        Term lhs = forced_value(id);
        CmpOp op = cmp_of(c.op, c.rhs);
        emit_cmp(sink, BodyElement::comparison(lhs, op, expr(c.rhs)));
    }
    update_cursors(id, shiftConcept);
    if (addAtom) emit_atom(sink, BodyElement::literal(b.atom_of(id), m.negated));
    return id;
}

// ---- expressions ------------------------------------------------------------------------------

asp::CmpOp Translator::cmp_of(cnl::CmpWord w, const cnl::Expr& rhs) const {
    bool literal = rhs.kind == cnl::Expr::Kind::Time || rhs.kind == cnl::Expr::Kind::Date;
    if (w == cnl::CmpWord::After && literal) return CmpOp::Ge;
    return to_cmp(w);
}

Term Translator::time_index(const cnl::Expr& e) const {
    bool clock = e.kind == cnl::Expr::Kind::Time;
    const TemporalConcept* t =
        reg.temporal_of_kind(clock ? TemporalConcept::Kind::Minutes : TemporalConcept::Kind::Days);
    if (!t)
        throw CompileError(ErrorKind::UnknownConcept,
                           std::string("no temporal concept expressed in ") + (clock ? "minutes" : "days"));
    std::string label = clock ? format_clock(parse_clock(e.text)) : format_date(parse_date(e.text));
    auto idx = t->index_of(label);
    if (!idx) throw CompileError(ErrorKind::LabelOutOfRange, "'" + e.text + "' is outside the range of " + t->name);
    return Term::num(*idx);
}

Term Translator::expr(const cnl::Expr& e) {
    using K = cnl::Expr::Kind;
    switch (e.kind) {
    case K::Term:
        if (e.term.kind == cnl::Term::Kind::Variable) {
            auto it = b.labels.find(e.term.text);
            if (it != b.labels.end() && b.instance(it->second).labelCell < 0) return forced_value(it->second);
        }
        return value_of(e.term);
    case K::Time:
    case K::Date: return time_index(e);
    case K::Binary: return Term::arith(e.text, expr(e.operands.at(0)), expr(e.operands.at(1)));
    case K::Abs: return Term::abs(expr(e.operands.at(0)));
    case K::Paren: return Term::paren(expr(e.operands.at(0)));
    case K::Negate: return Term::neg(expr(e.operands.at(0)));
    case K::AttributeOf: {
        int id;
        auto it = e.label && e.label->kind == cnl::Term::Kind::Variable ? b.labels.find(e.label->text) : b.labels.end();
        if (it != b.labels.end()) {
            id = it->second;
        } else {
            cnl::Mention m;
            m.concept_name = e.concept_name;
            m.label = e.label;
            id = mention(m, Sink{}, true);
        }
        Node& n = node_at(id, {e.attribute});
        if (e.attributeVar) assign(n, value_of(*e.attributeVar), Sink{});
        return node_value(n);
    }
    case K::EntityRef: {
        auto it = e.label ? b.labels.find(e.label->text) : b.labels.end();
        if (it == b.labels.end())
            throw CompileError(ErrorKind::UnknownConcept, "'" + cnl::join(e.concept_name) + "' is not introduced");
        return forced_value(it->second);
    }
    case K::Sum: {
        Term acc = expr(e.operands.at(0));
        for (std::size_t i = 1; i < e.operands.size(); ++i) acc = Term::arith("+", acc, expr(e.operands[i]));
        return acc;
    }
    case K::Difference:
    case K::AbsDifference: {
        Term rhs = expr(e.operands.at(1));
        if (rhs.kind == Term::Kind::Arith) rhs = Term::paren(rhs);
        Term d = Term::arith("-", expr(e.operands.at(0)), rhs);
        return e.kind == K::Difference ? d : Term::abs(d);
    }
    case K::Aggregate: break;
    }
    throw CompileError(ErrorKind::SyntaxError, "an aggregate can only be compared or optimized");
}

void Translator::condition(const cnl::Condition& c, bool negate, const Sink& sink) {
    if (!c.lhs) throw CompileError(ErrorKind::SyntaxError, "comparison without a left-hand side");
    const cnl::Expr* lhs = &*c.lhs;
    const cnl::Expr* rhs = &c.rhs;
    CmpOp op = cmp_of(c.op, *rhs);
    if (negate) op = asp::negate(op);
    if (lhs->kind == cnl::Expr::Kind::Aggregate || rhs->kind == cnl::Expr::Kind::Aggregate) {
        if (lhs->kind != cnl::Expr::Kind::Aggregate) {
            std::swap(lhs, rhs);
            op = asp::mirror(op);
        }
        AggregateResult r = aggregate(lhs->aggregate.at(0), sink.atoms);
        r.agg.op = op;
        r.agg.guard = expr(*rhs);
        emit_atom(sink, BodyElement::aggregate(std::move(r.agg)));
        return;
    }
    auto side = [&](const cnl::Expr& e, const cnl::Expr& other) {
        bool literal = other.kind == cnl::Expr::Kind::Time || other.kind == cnl::Expr::Kind::Date;
        if (e.kind == cnl::Expr::Kind::EntityRef && literal) {
            auto it = e.label ? b.labels.find(e.label->text) : b.labels.end();
            if (it == b.labels.end())
                throw CompileError(ErrorKind::UnknownConcept, "'" + cnl::join(e.concept_name) + "' is not introduced");
            const TemporalConcept* t = reg.temporal_of_kind(other.kind == cnl::Expr::Kind::Time
                                                                ? TemporalConcept::Kind::Minutes
                                                                : TemporalConcept::Kind::Days);
            Node* n = t ? temporal_node(it->second, t->name) : nullptr;
            if (!n)
                throw CompileError(ErrorKind::UnknownAttribute,
                                   "'" + cnl::join(e.concept_name) + "' has no attribute of that kind");
            return node_value(*n);
        }
        return expr(e);
    };
    Term l = side(*lhs, *rhs);
    Term r = side(*rhs, *lhs);
    if (is_arith(l) && !is_arith(r)) {
        std::swap(l, r);
        op = asp::mirror(op);
    }
    emit_cmp(sink, BodyElement::comparison(l, op, r));
}

// ---- clauses ----------------------------------------------------------------------------------

std::optional<asp::Atom> Translator::light_verb(const std::string& pred, int subject,
                                                const std::vector<int>& objects) {
    if (pred != "have" || objects.empty()) return std::nullopt;
    int host = -1;
    for (int o : objects) {
        const ConceptSignature* s = b.instance(o).sig;
        if (s->kind != ConceptKind::Domain) continue;
        if (subject < 0) {
            host = o;
            break;
        }
        const std::string& subj = b.instance(subject).sig->name;
        for (std::size_t i = 0; i < s->arity(); ++i)
            if (s->attribute(i).reference == subj) host = o;
        if (host >= 0) break;
    }
    if (host < 0) return std::nullopt;
    auto fill = [&](int who) {
        Instance& h = b.instance(host);
        const std::string& c = b.instance(who).sig->name;
        for (std::size_t i = 0; i < h.sig->arity(); ++i) {
            if (h.sig->attribute(i).reference == c && node_unset(h.slots[i])) {
                b.link(h.slots[i], who);
                return;
            }
        }
        for (std::size_t i = 0; i < h.sig->keys.size(); ++i) {
            if (!h.sig->attribute(i).is_reference() && node_unset(h.slots[i])) {
                b.link(h.slots[i], who);
                return;
            }
        }
        throw CompileError(ErrorKind::UnknownAttribute,
                           "concept '" + h.sig->name + "' has no free attribute for '" + c + "'");
    };
    if (subject >= 0) fill(subject);
    for (int o : objects)
        if (o != host) fill(o);
    return b.atom_of(host);
}

asp::Atom Translator::place(const std::string& pred, const std::vector<Slotted>& items) {
    const VerbSignature* v = reg.verb(pred);
    if (!v) {
        std::string name = pred;
        std::replace(name.begin(), name.end(), '_', ' ');
        if (const ConceptSignature* cs = reg.find(name)) return place_concept(*cs, items);
    }
    if (!v) {
        std::string subject = items.empty() ? "" : items[0].concept_name;
        std::vector<std::string> objects;
        for (std::size_t i = 1; i < items.size(); ++i) objects.push_back(items[i].concept_name);
        v = &reg.ensure_verb(pred, subject, objects);
    }
    if (items.size() > v->arity())
        throw CompileError(ErrorKind::ArityConflict, "'" + pred + "' takes " + std::to_string(v->arity()) +
                                                         " arguments, got " + std::to_string(items.size()));
    std::vector<std::optional<Term>> args(v->arity());
    std::vector<bool> done(items.size(), false);
    for (std::size_t i = 0; i < items.size(); ++i) {
        for (std::size_t s = 0; s < args.size(); ++s) {
            if (!args[s] && v->concept_at(s) == items[i].concept_name) {
                args[s] = items[i].value;
                done[i] = true;
                break;
            }
        }
    }
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (done[i]) continue;
        for (std::size_t s = 0; s < args.size(); ++s) {
            if (!args[s]) {
                args[s] = items[i].value;
                break;
            }
        }
    }
    asp::Atom a{pred, {}};
    for (auto& t : args) a.args.push_back(t ? *t : b.cell_term(b.new_cell()));
    return a;
}

asp::Atom Translator::place_concept(const ConceptSignature& sig, const std::vector<Slotted>& items) {
    int id = b.instantiate(sig);
    Instance& inst = b.instance(id);
    std::vector<bool> done(items.size(), false);
    for (std::size_t i = 0; i < items.size(); ++i) {
        for (std::size_t s = 0; s < sig.arity(); ++s) {
            const Attribute& a = sig.attribute(s);
            if ((a.reference == items[i].concept_name || a.name == items[i].concept_name) && node_unset(inst.slots[s])) {
                assign(inst.slots[s], items[i].value, Sink{});
                done[i] = true;
                break;
            }
        }
    }
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (done[i]) continue;
        std::size_t s = 0;
        while (s < sig.arity() && !node_unset(inst.slots[s])) ++s;
        if (s == sig.arity())
            throw CompileError(ErrorKind::ArityConflict, "too many arguments for '" + sig.name + "'");
        assign(inst.slots[s], items[i].value, Sink{});
    }
    return b.atom_of(id);
}

asp::Atom Translator::clause_atom(const cnl::SimpleClause& c, const Sink& sink, const std::vector<Slotted>& extra) {
    int subj = -1;
    if (c.subject) {
        subj = mention(*c.subject, sink, !c.subject->attributes.empty() || !c.subject->conditions.empty());
        if (c.quantifier == "every") forced_value(subj);
        lastSubject = subj;
    } else if (lastSubject) {
        subj = *lastSubject;
    }
    std::vector<int> objs;
    for (const cnl::Mention& o : c.objects) objs.push_back(mention(o, sink, false));
    std::string pred = Registry::normalize_verb(c.verb);
    std::optional<asp::Atom> light = light_verb(pred, subj, objs);
    for (std::size_t i = 0; i < objs.size(); ++i) {
        if (c.objects[i].attributes.empty()) continue;
        if (light && b.instance(objs[i]).sig->predicate == light->predicate) continue;
        emit_atom(sink, BodyElement::literal(b.atom_of(objs[i])));
    }
    if (light) return *light;
    std::vector<Slotted> items;
    if (subj >= 0) items.push_back({b.instance(subj).sig->name, b.value_term(subj)});
    for (int o : objs) items.push_back({b.instance(o).sig->name, b.value_term(o)});
    if (c.shift) {
        std::string concept_name = concept_for_unit(c.shift->unit);
        std::optional<Term> anchor;
        if (c.shift->anchor) anchor = value_of(*c.shift->anchor);
        items.push_back({concept_name, shifted(concept_name, c.shift->offset, anchor)});
    }
    items.insert(items.end(), extra.begin(), extra.end());
    return place(pred, items);
}

void Translator::clause(const cnl::SimpleClause& c, const Sink& sink, bool flip) {
    bool negated = c.negated != flip;
    if (!c.window) {
        emit_atom(sink, BodyElement::literal(clause_atom(c, sink), negated));
        return;
    }
    std::string concept_name = concept_for_unit(c.window->unit);
    Term local = b.fresh();
    asp::Atom atom = clause_atom(c, sink, {{concept_name, local}});
    window_count(*c.window, atom, 0, local, negated, sink);
}

void Translator::window_count(const cnl::Window& w, const asp::Atom& atom, std::size_t, const Term& local,
                              bool negated, const Sink& sink) {
    std::string concept_name = concept_for_unit(w.unit);
    const ConceptSignature& sig = *reg.find(concept_name);
    long size = -1;
    if (const TemporalConcept* t = reg.temporal(concept_name)) size = t->size();
    else if (sig.range_low && sig.range_high && sig.range_low->kind == Term::Kind::Number &&
             sig.range_high->kind == Term::Kind::Number)
        size = sig.range_high->number - sig.range_low->number + 1;
    if (w.length < 1 || (size >= 0 && w.length > size))
        throw CompileError(ErrorKind::WindowExceedsRange,
                           "a window of " + std::to_string(w.length) + " does not fit in " + concept_name);
    Term base, lo, hi;
    if (w.kind == cnl::Window::Kind::Previous) {
        base = shifted(concept_name, 0);
        lo = plus(base, -w.length);
        hi = plus(base, -1);
    } else {
        base = b.fresh();
        lo = base;
        hi = plus(base, w.length - 1);
        b.cursors[concept_name] = Cursor{base, w.length - 1};
    }
    int baseInst = b.instantiate(sig);
    if (b.instance(baseInst).labelCell >= 0) b.set_cell(b.instance(baseInst).labelCell, base);
    emit_atom(sink, BodyElement::literal(b.atom_of(baseInst)));
    asp::Aggregate agg;
    agg.fn = asp::AggFn::Count;
    agg.terms = {local};
    agg.condition = {BodyElement::literal(atom), BodyElement::comparison(local, CmpOp::Ge, lo),
                     BodyElement::comparison(local, CmpOp::Le, hi)};
    agg.op = negated ? CmpOp::Ne : CmpOp::Eq;
    agg.guard = Term::num(w.length);
    emit_atom(sink, BodyElement::aggregate(std::move(agg)));
}

// ---- aggregates ---------------------------------------------------------------------------------

void Translator::add_grouping(int id, std::vector<Item>& out, std::vector<Term>& vars) {
    Instance& inst = b.instance(id);
    if (inst.labelCell < 0) return;
    const auto& v = b.cell_value(inst.labelCell);
    if (v && (!v->is_variable() || whereVars_.count(v->name))) return;
    b.force(inst.labelCell);
    out.push_back(Item{BodyElement::literal(b.atom_of(id)), id});
    vars.push_back(b.cell_term(inst.labelCell));
}

AggregateResult Translator::aggregate(const cnl::Aggregate& a, Group g) {
    AggregateResult out;
    out.agg.fn = agg_fn(a.fn);
    std::vector<BodyElement> atoms, cmps, extra;
    Sink local = Sink::local(atoms, cmps);
    std::vector<Item> grouping, windowItems;
    std::vector<int> groupInst;

    std::optional<int> counted;
    if (const ConceptSignature* cs = find_concept(a.counted)) counted = b.instantiate(*cs);
    std::optional<int> of;
    if (a.of) of = mention(*a.of, local, true);

    std::string attr = cnl::key_of(a.attribute);
    std::optional<Term> attrTerm;
    auto attribute_of = [&](int id) -> bool {
        Instance& inst = b.instance(id);
        auto pos = inst.sig->position_of(attr);
        if (!pos) return false;
        if (a.fn == cnl::AggFn::Sum && inst.sig->attribute(*pos).is_reference())
            throw CompileError(ErrorKind::NonNumericSum, "'" + attr + "' of '" + inst.sig->name + "' is not a number");
        attrTerm = node_value(inst.slots[*pos]);
        return true;
    };
    if (of && !attr.empty() && !attribute_of(*of))
        throw CompileError(ErrorKind::UnknownAttribute,
                           "concept '" + b.instance(*of).sig->name + "' has no attribute '" + attr + "'");

    std::optional<int> in;
    Term windowLocal;
    bool windowed = false;
    if (!a.clause.empty()) {
        const cnl::SimpleClause& c = a.clause.front();
        std::string pred = Registry::normalize_verb(c.verb);
        bool passive = !c.verb.empty() && is_copula(c.verb.front());
        int subj = -1;
        if (c.subject) {
            subj = mention(*c.subject, local, !c.subject->attributes.empty());
            groupInst.push_back(subj);
        }
        std::vector<int> objs;
        for (const cnl::Mention& o : c.objects) {
            objs.push_back(mention(o, local, false));
            groupInst.push_back(objs.back());
        }
        std::vector<Slotted> items;
        auto slot = [&](int id) { return Slotted{b.instance(id).sig->name, b.value_term(id)}; };
        bool countedFirst = a.link == cnl::Aggregate::Link::That && counted && !passive;
        std::optional<asp::Atom> atom;
        if (countedFirst) atom = light_verb(pred, *counted, objs);
        else if (subj >= 0) atom = light_verb(pred, subj, objs);
        if (countedFirst) forced_value(*counted);
        if (!atom) {
            if (countedFirst) items.push_back({b.instance(*counted).sig->name, forced_value(*counted)});
            if (subj >= 0) items.push_back(slot(subj));
            for (int o : objs) items.push_back(slot(o));
            for (const cnl::Mention& w : a.with) {
                int id = mention(w, local, !w.attributes.empty());
                groupInst.push_back(id);
                items.push_back(slot(id));
            }
            for (const cnl::Mention& f : a.forEach) {
                int id = mention(f, local, false);
                groupInst.push_back(id);
                items.push_back({b.instance(id).sig->name, forced_value(id)});
            }
            if (a.in) {
                in = mention(*a.in, local, !a.in->attributes.empty());
                items.push_back({b.instance(*in).sig->name, forced_value(*in)});
            }
            if (a.window) {
                std::string unit = concept_for_unit(a.window->unit);
                windowLocal = b.fresh();
                windowed = true;
                items.push_back({unit, windowLocal});
            }
            if (counted && !countedFirst) items.push_back({b.instance(*counted).sig->name, forced_value(*counted)});
            if (!attr.empty() && !attrTerm) {
                for (int id : groupInst)
                    if (attribute_of(id)) break;
            }
            if (!attr.empty() && !attrTerm) {
                const VerbSignature* v = reg.verb(pred);
                for (std::size_t s = 0; v && s < v->arity() && !attrTerm; ++s) {
                    const ConceptSignature* holder = reg.find(v->concept_at(s));
                    if (!holder || !holder->position_of(attr)) continue;
                    int h = b.instantiate(*holder);
                    attribute_of(h);
                    items.push_back({holder->name, forced_value(h)});
                    extra.push_back(BodyElement::literal(b.atom_of(h)));
                }
            }
            atom = place(pred, items);
        }
        atoms.insert(atoms.begin(), BodyElement::literal(*atom, c.negated));
        atoms.insert(atoms.end(), extra.begin(), extra.end());
    }
    if (!attr.empty() && !attrTerm)
        throw CompileError(ErrorKind::UnknownAttribute, "nothing in the aggregate has attribute '" + attr + "'");
    for (const cnl::Mention& m : a.suchThat) mention(m, local, true);

    if (attrTerm) {
        out.agg.terms.push_back(*attrTerm);
        if (in) out.agg.terms.push_back(forced_value(*in));
    } else if (counted) {
        out.agg.terms = key_terms(*counted);
    } else if (windowed) {
        out.agg.terms.push_back(windowLocal);
    } else {
        throw CompileError(ErrorKind::UnknownConcept, "'" + cnl::join(a.counted) + "' is not a defined concept");
    }

    if (a.window) {
        if (a.window->kind != cnl::Window::Kind::Each || !windowed)
            throw CompileError(ErrorKind::SyntaxError, "only 'between each' windows apply to aggregates");
        std::string unit = concept_for_unit(a.window->unit);
        const ConceptSignature& sig = *reg.find(unit);
        std::optional<Term> end;
        long size = -1;
        if (const TemporalConcept* t = reg.temporal(unit)) {
            end = Term::num(t->size());
            size = t->size();
        } else if (sig.range_high) {
            end = sig.range_high;
            if (sig.range_low && sig.range_low->kind == Term::Kind::Number && end->kind == Term::Kind::Number)
                size = end->number - sig.range_low->number + 1;
        }
        if (!end) throw CompileError(ErrorKind::WindowExceedsRange, "'" + unit + "' has no upper bound");
        long n = a.window->length;
        if (n < 1 || (size >= 0 && n > size))
            throw CompileError(ErrorKind::WindowExceedsRange,
                               "a window of " + std::to_string(n) + " does not fit in " + unit);
        Term start = b.fresh();
        int baseInst = b.instantiate(sig);
        if (b.instance(baseInst).labelCell >= 0) b.set_cell(b.instance(baseInst).labelCell, start);
        windowItems.push_back(Item{BodyElement::literal(b.atom_of(baseInst)), -1});
        Term last = end->kind == Term::Kind::Number ? Term::num(end->number - n + 1) : plus(*end, 1 - n);
        windowItems.push_back(Item{BodyElement::comparison(start, CmpOp::Le, last), -1});
        cmps.push_back(BodyElement::comparison(windowLocal, CmpOp::Ge, start));
        cmps.push_back(BodyElement::comparison(windowLocal, CmpOp::Le, plus(start, n - 1)));
    }

    for (int id : groupInst) add_grouping(id, grouping, out.grouping);
    for (Item& it : grouping) b.group(g).push_back(std::move(it));
    for (Item& it : windowItems) b.group(g).push_back(std::move(it));

    out.agg.condition = std::move(atoms);
    out.agg.condition.insert(out.agg.condition.end(), cmps.begin(), cmps.end());
    return out;
}

RuleBuilder::Draft Translator::draft() const {
    RuleBuilder::Draft d;
    d.body = b.body();
    d.bound = whereVars_;
    return d;
}

// ---- where --------------------------------------------------------------------------------------

void Translator::where_conditions() {
    for (const cnl::WhereCondition& w : where_) {
        Term v = Term::var(w.variable.text);
        switch (w.kind) {
        case cnl::WhereCondition::Kind::Compare:
            b.add_cmp(Group::Where, v, to_cmp(w.op), expr(w.rhs));
            break;
        case cnl::WhereCondition::Kind::Between: {
            if (w.values.size() != 2) throw CompileError(ErrorKind::SyntaxError, "'between' needs two bounds");
            auto it = b.labels.find(w.variable.text);
            if (it != b.labels.end() && b.instance(it->second).sig->kind == ConceptKind::List) {
                int id = it->second;
                const auto& items = b.instance(id).sig->items;
                auto index = [&](const cnl::Term& t) {
                    std::string text = item_text(value_of(t));
                    auto p = std::find(items.begin(), items.end(), text);
                    if (p == items.end())
                        throw CompileError(ErrorKind::LabelOutOfRange,
                                           "'" + t.text + "' is not one of the values of " + b.instance(id).sig->name);
                    return Term::num(static_cast<long>(p - items.begin()) + 1);
                };
                int ord = b.leaf_cell(b.instance(id).slots[0]);
                b.force(ord);
                add_prefix(id);
                b.add_cmp(Group::Where, b.cell_term(ord), CmpOp::Ge, index(w.values[0]));
                b.add_cmp(Group::Where, b.cell_term(ord), CmpOp::Le, index(w.values[1]));
            } else {
                b.add_cmp(Group::Where, v, CmpOp::Ge, value_of(w.values[0]));
                b.add_cmp(Group::Where, v, CmpOp::Le, value_of(w.values[1]));
            }
            break;
        }
        case cnl::WhereCondition::Kind::OneOf: break;
        }
    }
}

std::vector<asp::Statement> Translator::expand(const asp::Statement& s) const {
    struct Column {
        std::vector<std::string> vars;
        std::vector<std::vector<Term>> rows;
    };
    std::vector<Column> columns;
    for (const cnl::WhereCondition& w : where_) {
        if (w.kind != cnl::WhereCondition::Kind::OneOf) continue;
        std::vector<Term> values;
        for (const cnl::Term& t : w.values) values.push_back(value_of(t));
        if (w.respectively && !columns.empty()) {
            Column& c = columns.back();
            if (c.rows.size() != values.size())
                throw CompileError(ErrorKind::LengthMismatch, "'" + w.variable.text + "' lists " +
                                                                  std::to_string(values.size()) + " values, expected " +
                                                                  std::to_string(c.rows.size()));
            c.vars.push_back(w.variable.text);
            for (std::size_t i = 0; i < values.size(); ++i) c.rows[i].push_back(values[i]);
            continue;
        }
        Column c;
        c.vars.push_back(w.variable.text);
        for (const Term& v : values) c.rows.push_back({v});
        columns.push_back(std::move(c));
    }
    if (columns.empty()) return {s};
    std::vector<std::string> present;
    collect_variables(s, present);
    for (const Column& c : columns)
        for (const std::string& v : c.vars)
            if (std::find(present.begin(), present.end(), v) == present.end())
                throw CompileError(ErrorKind::UnboundWhereVariable, "'" + v + "' does not occur in the sentence");

    std::vector<asp::Statement> out;
    std::set<std::string> seen;
    std::vector<std::size_t> idx(columns.size(), 0);
    for (;;) {
        std::map<std::string, Term> subst;
        for (std::size_t c = 0; c < columns.size(); ++c)
            for (std::size_t k = 0; k < columns[c].vars.size(); ++k) subst[columns[c].vars[k]] = columns[c].rows[idx[c]][k];
        asp::Statement st = substitute(s, subst);
        if (seen.insert(render(st)).second) out.push_back(std::move(st));
        std::size_t c = columns.size();
        while (c > 0) {
            --c;
            if (++idx[c] < columns[c].rows.size()) break;
            idx[c] = 0;
            if (c == 0) return out;
        }
        if (columns.empty()) break;
    }
    return out;
}

}  // namespace cnl2asp::detail
