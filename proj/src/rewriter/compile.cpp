#include <algorithm>
#include <functional>

#include "cnl2asp/cnl/parser.h"
#include "cnl2asp/rewriter.h"
#include "translate.h"

namespace cnl2asp {

using asp::Atom;
using asp::BodyElement;
using asp::Statement;
using detail::Group;
using detail::Item;
using detail::RuleBuilder;
using detail::Sink;
using detail::Term;
using detail::Translator;

namespace {

Statement fact(Atom a) {
    Statement s;
    s.head.kind = asp::Head::Kind::Normal;
    s.head.atoms.push_back(std::move(a));
    return s;
}

asp::Head normal_head(std::vector<Atom> atoms) {
    asp::Head h;
    h.kind = atoms.size() == 1 ? asp::Head::Kind::Normal : asp::Head::Kind::Disjunction;
    h.atoms = std::move(atoms);
    return h;
}

void set_bounds(asp::Head& h, const cnl::Quantity& q, const Translator& t) {
    auto value = [&](const std::optional<cnl::Term>& v) -> std::optional<Term> {
        if (!v) return std::nullopt;
        return t.value_of(*v);
    };
    switch (q.kind) {
    case cnl::Quantity::Kind::None: break;
    case cnl::Quantity::Kind::Exactly:
        h.lower = value(q.low);
        h.upper = value(q.low);
        break;
    case cnl::Quantity::Kind::AtMost:
        h.lower = Term::num(0);
        h.upper = value(q.high ? q.high : q.low);
        break;
    case cnl::Quantity::Kind::AtLeast: h.lower = value(q.low); break;
    case cnl::Quantity::Kind::Between:
        h.lower = value(q.low);
        h.upper = value(q.high);
        break;
    }
}

std::vector<Item> items_of(const std::vector<BodyElement>& elements) {
    std::vector<Item> out;
    for (const auto& e : elements) out.push_back(Item{e, -1});
    return out;
}

bool ground(const Term& t) {
    if (t.kind == Term::Kind::Anonymous || t.is_variable()) return false;
    return std::all_of(t.args.begin(), t.args.end(), ground);
}

// ---- definitions -----------------------------------------------------------------------------

std::vector<Statement> compile_compound(const cnl::CompoundDefinition& def, Registry& reg) {
    std::string name = cnl::key_of(def.name);
    Translator t(reg, {});
    if (def.range) {
        Term lo = t.expr(def.from);
        Term hi = t.expr(def.to);
        const ConceptSignature& sig = reg.register_range(name, lo, hi);
        return {fact(Atom{sig.predicate, {Term::range(lo, hi)}})};
    }
    std::vector<std::string> attributes;
    for (const auto& a : def.attributes) {
        if (a.values.size() != def.items.size())
            throw CompileError(ErrorKind::LengthMismatch, "'" + cnl::join(a.name) + "' lists " +
                                                              std::to_string(a.values.size()) + " values for " +
                                                              std::to_string(def.items.size()) + " items");
        attributes.push_back(cnl::key_of(a.name));
    }
    std::vector<std::string> items;
    for (const auto& item : def.items) {
        Term v = t.value_of(item);
        items.push_back(v.kind == Term::Kind::Number ? std::to_string(v.number) : v.name);
    }
    const ConceptSignature& sig = reg.register_list(name, items, attributes);
    std::vector<Statement> out;
    for (std::size_t i = 0; i < def.items.size(); ++i) {
        Atom a{sig.predicate, {Term::num(static_cast<long>(i) + 1), Term::str(items[i])}};
        for (const auto& attr : def.attributes) a.args.push_back(t.value_of(attr.values[i]));
        out.push_back(fact(std::move(a)));
    }
    return out;
}

std::vector<Statement> compile_enumerative(const cnl::EnumerativeDefinition& def, Registry& reg) {
    Translator t(reg, def.where, true);
    if (def.isA) {
        const ConceptSignature& sig = t.concept_of(def.concept_name);
        if (sig.arity() != 1)
            throw CompileError(ErrorKind::MissingAttribute, "'" + sig.name + "' needs " +
                                                                std::to_string(sig.arity()) + " attribute values");
        return {fact(Atom{sig.predicate, {t.value_of(def.value)}})};
    }
    Atom head = t.clause_atom(def.statement, Sink{});
    for (const auto& c : def.when) t.clause(c, Sink{}, false);
    t.where_conditions();
    RuleBuilder::Draft d = t.draft();
    d.head = normal_head({head});
    std::vector<Statement> out = t.expand(t.b.finalize(d));
    if (def.when.empty()) {
        for (const Statement& s : out) {
            bool ok = s.body.empty();
            for (const Atom& a : s.head.atoms)
                for (const Term& arg : a.args) ok = ok && ground(arg);
            if (!ok) throw CompileError(ErrorKind::NonGroundFact, "'" + render(s) + "' is not a ground fact");
        }
    }
    return out;
}

std::vector<Statement> compile_fact(const cnl::FactProposition& f, Registry& reg) {
    Translator t(reg, {});
    std::vector<BodyElement> atoms, cmps;
    int id = t.mention(f.mention, Sink::local(atoms, cmps), false);
    const auto& inst = t.b.instance(id);
    for (std::size_t i = 0; i < inst.sig->arity(); ++i) {
        RuleBuilder::Draft probe;
        probe.head = normal_head({Atom{"x", {t.b.node_term(inst.slots[i])}}});
        if (!ground(t.b.finalize(probe).head.atoms[0].args[0]))
            throw CompileError(ErrorKind::MissingAttribute,
                               "no value for '" + inst.sig->attribute(i).name + "' of '" + inst.sig->name + "'");
    }
    RuleBuilder::Draft d;
    d.head = normal_head({t.b.atom_of(id)});
    return {t.b.finalize(d)};
}

// ---- choices ------------------------------------------------------------------------------------

int link_by_concept(Translator& t, int host, int who) {
    auto& h = t.b.instance(host);
    const std::string& c = t.b.instance(who).sig->name;
    for (std::size_t i = 0; i < h.sig->arity(); ++i) {
        if (h.sig->attribute(i).reference != c) continue;
        auto& leaf = h.slots[i];
        bool unset = true;
        std::function<void(const detail::Node&)> check = [&](const detail::Node& n) {
            if (n.cell >= 0) unset = unset && !t.b.cell_set(n.cell);
            for (const auto& k : n.keys) check(k);
        };
        check(leaf);
        if (!unset) continue;
        t.b.link(leaf, who);
        return static_cast<int>(i);
    }
    return -1;
}

std::vector<Statement> compile_whenever(const cnl::WheneverThen& w, Registry& reg) {
    for (const auto& m : w.restated)
        if (m && *m != w.modality) throw CompileError(ErrorKind::MixedModality, "a sentence mixes 'must' and 'can'");
    Translator t(reg, {});
    Sink when{Group::WhenAtoms, Group::WhenCmps};
    for (const auto& m : w.whenever) t.mention(m, when, true);

    bool can = w.modality == cnl::WheneverThen::Modality::Can;
    std::vector<BodyElement> condAtoms, condCmps;
    Sink elem = can ? Sink::local(condAtoms, condCmps) : Sink{};
    std::vector<int> heads;
    for (const auto& h : w.heads) heads.push_back(t.mention(h, elem, false));
    if (w.subject && w.subject->kind == cnl::Term::Kind::Variable) {
        auto it = t.b.labels.find(w.subject->text);
        if (it != t.b.labels.end())
            for (int h : heads) link_by_concept(t, h, it->second);
    }
    for (const auto& m : w.suchThat) t.mention(m, elem, true);
    for (const auto& m : w.targets) {
        int id = t.mention(m, elem, false);
        t.forced_value(id);
        for (int h : heads) link_by_concept(t, h, id);
        BodyElement a = BodyElement::literal(t.b.atom_of(id));
        if (can) condAtoms.push_back(a);
        else t.b.add(Group::Main, a);
    }

    std::vector<Atom> atoms;
    for (int h : heads) atoms.push_back(t.b.atom_of(h));
    asp::Head head;
    if (!can || heads.size() > 1) {
        head = normal_head(atoms);
    } else {
        head.kind = asp::Head::Kind::Choice;
        std::vector<BodyElement> cond = condAtoms;
        cond.insert(cond.end(), condCmps.begin(), condCmps.end());
        head.elements.push_back({atoms.at(0), cond});
        set_bounds(head, w.quantity.kind != cnl::Quantity::Kind::None ? w.quantity : w.targetQuantity, t);
    }

    if (!w.duration) {
        RuleBuilder::Draft d = t.draft();
        d.head = head;
        return {t.b.finalize(d)};
    }
    if (head.kind != asp::Head::Kind::Choice)
        throw CompileError(ErrorKind::SyntaxError, "a duration needs a single optional head");
    std::string unit = t.concept_for_unit(w.durationUnit);
    Term length = t.expr(*w.duration);
    int h = heads.at(0);
    auto& inst = t.b.instance(h);
    Atom proj{inst.sig->predicate, {}};
    Atom support{"_generated_support", {}};
    bool spread = false;
    for (std::size_t i = 0; i < inst.sig->arity(); ++i) {
        const Attribute& a = inst.sig->attribute(i);
        const ConceptSignature* ref = a.is_reference() ? reg.find(a.reference) : nullptr;
        Term full = t.b.node_term(inst.slots[i]);
        if (!ref || ref->kind != ConceptKind::Temporal) proj.args.push_back(full);
        if (ref && ref->name == unit && !spread) {
            int leaf = t.b.leaf_cell(inst.slots[i]);
            t.b.force(leaf);
            Term start = t.b.cell_term(leaf);
            Term end = Term::arith("-", Term::arith("+", start, length), Term::num(1));
            support.args.push_back(Term::func(inst.slots[i].keys.empty() ? "" : ref->predicate,
                                              {Term::range(start, end)}));
            if (inst.slots[i].keys.empty()) support.args.back() = Term::range(start, end);
            spread = true;
        } else {
            support.args.push_back(full);
        }
    }
    if (!spread)
        throw CompileError(ErrorKind::UnknownAttribute,
                           "concept '" + inst.sig->name + "' has no " + unit + " attribute");
    std::vector<Statement> out;
    RuleBuilder::Draft choice = t.draft();
    head.elements[0].atom = proj;
    choice.head = head;
    out.push_back(t.b.finalize(choice));

    RuleBuilder::Draft full;
    full.head = normal_head({atoms[0]});
    Atom supportFull{"_generated_support", atoms[0].args};
    full.body = items_of({BodyElement::literal(supportFull), BodyElement::literal(proj)});
    out.push_back(t.b.finalize(full));

    RuleBuilder::Draft spreadDraft;
    spreadDraft.head = normal_head({support});
    spreadDraft.body = items_of({BodyElement::literal(proj)});
    for (const Item& it : t.b.group(Group::WhenAtoms)) spreadDraft.body.push_back(it);
    out.push_back(t.b.finalize(spreadDraft));
    return out;
}

std::vector<Statement> compile_choice(const cnl::QuantifiedChoice& q, Registry& reg) {
    Translator t(reg, {});
    int subj = t.mention(q.subject, Sink{}, true);
    t.forced_value(subj);
    std::vector<detail::Slotted> items{{t.b.instance(subj).sig->name, t.b.value_term(subj)}};
    for (const auto& f : q.forEach) {
        int id = t.mention(f, Sink{}, true);
        items.push_back({t.b.instance(id).sig->name, t.forced_value(id)});
    }
    std::string pred = Registry::normalize_verb(q.verb);
    asp::Head head;

    if (q.disjunctive) {
        std::vector<Atom> atoms;
        for (const auto& o : q.objects) {
            int id = t.mention(o, Sink{}, false);
            if (pred == "have") link_by_concept(t, id, subj);
            atoms.push_back(t.b.atom_of(id));
        }
        head = normal_head(atoms);
        head.kind = asp::Head::Kind::Disjunction;
    } else {
        std::vector<BodyElement> condAtoms, condCmps;
        Sink local = Sink::local(condAtoms, condCmps);
        std::vector<int> objs;
        std::vector<BodyElement> cond;
        for (const auto& o : q.objects) {
            int id = t.mention(o, local, false);
            objs.push_back(id);
            Term v = t.forced_value(id);
            items.push_back({t.b.instance(id).sig->name, v});
            if (!o.relativeVerb.empty()) {
                std::vector<detail::Slotted> rel{{t.b.instance(id).sig->name, v}};
                for (const auto& r : o.relativeObjects) {
                    int rid = t.mention(r, local, false);
                    rel.push_back({t.b.instance(rid).sig->name, t.b.value_term(rid)});
                }
                cond.push_back(BodyElement::literal(t.place(Registry::normalize_verb(o.relativeVerb), rel)));
            } else {
                cond.push_back(BodyElement::literal(t.b.atom_of(id)));
            }
        }
        cond.insert(cond.end(), condAtoms.begin(), condAtoms.end());
        cond.insert(cond.end(), condCmps.begin(), condCmps.end());
        std::optional<Atom> atom;
        if (pred == "have") atom = t.light_verb(pred, subj, objs);
        if (!atom) atom = t.place(pred, items);
        head.kind = asp::Head::Kind::Choice;
        head.elements.push_back({*atom, cond});
        set_bounds(head, q.quantity, t);
    }
    RuleBuilder::Draft d = t.draft();
    d.head = head;
    return {t.b.finalize(d)};
}

// ---- constraints --------------------------------------------------------------------------------

/// Returns the instance of the first clause subject, if any.
std::optional<int> constraint_body(Translator& t, const cnl::ConstraintBody& body, bool required) {
    Sink when{Group::WhenAtoms, Group::WhenCmps};
    for (const auto& m : body.leadingWhenever) t.mention(m, when, true);
    for (const auto& m : body.whenever) t.mention(m, when, true);
    std::optional<int> first;
    auto note = [&] {
        if (!first) first = t.lastSubject;
    };
    using K = cnl::ConstraintBody::Kind;
    switch (body.kind) {
    case K::Clauses:
        for (std::size_t i = 0; i < body.clauses.size(); ++i) {
            t.clause(body.clauses[i], Sink{}, required && i + 1 == body.clauses.size());
            note();
        }
        break;
    case K::Quantified:
        for (const auto& c : body.clauses) {
            t.clause(c, Sink{}, required);
            note();
        }
        break;
    case K::WhenThen:
        for (const auto& c : body.clauses) {
            t.clause(c, Sink{}, false);
            note();
        }
        for (const auto& c : body.thenClauses) t.clause(c, Sink{}, required);
        break;
    case K::Condition: t.condition(*body.condition, required, Sink{}); break;
    case K::Objective: break;
    }
    return first;
}

std::vector<Statement> compile_strong(const cnl::StrongConstraint& sc, Registry& reg) {
    if (sc.body.kind == cnl::ConstraintBody::Kind::Objective)
        throw CompileError(ErrorKind::SyntaxError, "an optimization target needs 'preferred'");
    Translator t(reg, sc.body.where);
    constraint_body(t, sc.body, sc.required);
    t.where_conditions();
    return t.expand(t.b.finalize(t.draft()));
}

std::vector<Statement> compile_weak(const cnl::WeakConstraint& wc, Registry& reg) {
    using D = cnl::WeakConstraint::Direction;
    if (wc.prefix != D::None && wc.suffix != D::None && wc.prefix != wc.suffix)
        throw CompileError(ErrorKind::ConflictingDirections, "the sentence both maximizes and minimizes");
    bool maximize = (wc.prefix == D::None ? wc.suffix : wc.prefix) == D::Maximize;
    long level = 1;
    if (wc.priority == "medium") level = 2;
    else if (wc.priority == "high") level = 3;
    auto dir = [&](const Term& v) {
        if (!maximize) return v;
        if (v.kind == Term::Kind::Number) return Term::num(-v.number);
        return Term::neg(v);
    };

    Translator t(reg, wc.body.where);
    std::optional<int> first = constraint_body(t, wc.body, false);
    RuleBuilder::Draft pending;
    pending.mode = detail::Discriminants::Globals;
    using K = cnl::ConstraintBody::Kind;
    if (wc.body.kind == K::Clauses || wc.body.kind == K::Quantified || wc.body.kind == K::WhenThen) {
        pending.weight = dir(Term::num(1));
        if (first) {
            pending.mode = detail::Discriminants::Explicit;
            pending.discriminants = t.key_terms(*first);
        }
    } else if (wc.body.kind == K::Condition) {
        pending.weight = dir(Term::num(1));
    } else {
        const cnl::Expr& obj = *wc.body.objective;
        const cnl::Expr* agg = nullptr;
        const cnl::Expr* other = nullptr;
        if (obj.kind == cnl::Expr::Kind::Aggregate) {
            agg = &obj;
        } else if (obj.kind == cnl::Expr::Kind::AbsDifference && obj.operands.size() == 2) {
            for (std::size_t i = 0; i < 2; ++i)
                if (obj.operands[i].kind == cnl::Expr::Kind::Aggregate) {
                    agg = &obj.operands[i];
                    other = &obj.operands[1 - i];
                }
        }
        if (agg) {
            const cnl::Aggregate& a = agg->aggregate.at(0);
            detail::AggregateResult r = t.aggregate(a, Group::Main);
            Term total = t.b.fresh();
            r.agg.op = asp::CmpOp::Eq;
            r.agg.guard = total;
            t.b.add(Group::Main, BodyElement::aggregate(std::move(r.agg)));
            Term cost = total;
            if (other) {
                Term base = t.expr(*other);
                if (a.ranging.size() == 2) {
                    t.b.add_cmp(Group::MainCmps, total, asp::CmpOp::Ge, t.expr(a.ranging[0]));
                    t.b.add_cmp(Group::MainCmps, total, asp::CmpOp::Le, t.expr(a.ranging[1]));
                }
                cost = t.b.fresh();
                t.b.add_cmp(Group::MainCmps, cost, asp::CmpOp::Eq, Term::abs(Term::arith("-", base, total)));
            }
            pending.weight = dir(cost);
            pending.mode = detail::Discriminants::Explicit;
            pending.discriminants = r.grouping;
        } else {
            pending.weight = dir(t.expr(obj));
        }
    }
    t.where_conditions();
    RuleBuilder::Draft d = t.draft();
    d.weak = true;
    d.level = level;
    d.weight = pending.weight;
    d.mode = pending.mode;
    d.discriminants = pending.discriminants;
    return t.expand(t.b.finalize(d));
}

int phase_of(cnl::Proposition::Kind k) {
    using K = cnl::Proposition::Kind;
    switch (k) {
    case K::ConstantDefinition: return 0;
    case K::DomainDefinition:
    case K::TemporalDefinition:
    case K::CompoundDefinition: return 1;
    case K::EnumerativeDefinition:
    case K::WheneverThen:
    case K::FactProposition:
    case K::QuantifiedChoice: return 2;
    case K::NegativeStrongConstraint:
    case K::PositiveStrongConstraint: return 3;
    case K::WeakConstraint: return 4;
    }
    return 4;
}

std::vector<Statement> compile_one(const cnl::Proposition& p, Registry& reg) {
    return std::visit(
        [&](const auto& payload) -> std::vector<Statement> {
            using T = std::decay_t<decltype(payload)>;
            if constexpr (std::is_same_v<T, cnl::ConstantDefinition>) {
                reg.register_constant(payload);
                return {};
            } else if constexpr (std::is_same_v<T, cnl::DomainDefinition>) {
                reg.register_domain(payload);
                return {};
            } else if constexpr (std::is_same_v<T, cnl::TemporalDefinition>) {
                return reg.register_temporal(payload).second;
            } else if constexpr (std::is_same_v<T, cnl::CompoundDefinition>) {
                return compile_compound(payload, reg);
            } else if constexpr (std::is_same_v<T, cnl::EnumerativeDefinition>) {
                return compile_enumerative(payload, reg);
            } else if constexpr (std::is_same_v<T, cnl::WheneverThen>) {
                return compile_whenever(payload, reg);
            } else if constexpr (std::is_same_v<T, cnl::FactProposition>) {
                return compile_fact(payload, reg);
            } else if constexpr (std::is_same_v<T, cnl::QuantifiedChoice>) {
                return compile_choice(payload, reg);
            } else if constexpr (std::is_same_v<T, cnl::StrongConstraint>) {
                return compile_strong(payload, reg);
            } else {
                return compile_weak(payload, reg);
            }
        },
        p.payload);
}

}  // namespace

bool CompileResult::has_parse_errors() const {
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](const Diagnostic& d) { return is_parse_error(d.kind); });
}

std::vector<Statement> CompileResult::statements() const {
    std::vector<Statement> out;
    for (const auto& p : propositions) out.insert(out.end(), p.statements.begin(), p.statements.end());
    return out;
}

std::string CompileResult::program() const { return asp::render_program(statements()); }

asp::CmpOp negate_condition(asp::CmpOp op) { return asp::negate(op); }

CompileResult compile_document(const std::vector<cnl::Proposition>& propositions) {
    CompileResult result;
    std::vector<std::optional<CompiledProposition>> compiled(propositions.size());
    std::vector<std::pair<std::size_t, Diagnostic>> errors;
    for (int phase = 0; phase <= 4; ++phase) {
        for (std::size_t i = 0; i < propositions.size(); ++i) {
            const cnl::Proposition& p = propositions[i];
            if (phase_of(p.kind) != phase) continue;
            try {
                CompiledProposition cp;
                cp.index = i;
                cp.kind = p.kind;
                cp.span = p.span;
                cp.statements = compile_one(p, result.registry);
                compiled[i] = std::move(cp);
            } catch (const CompileError& e) {
                Diagnostic d = e.diagnostic();
                d.span = p.span;
                errors.emplace_back(i, d);
            }
        }
    }
    for (auto& c : compiled)
        if (c) result.propositions.push_back(std::move(*c));
    std::stable_sort(errors.begin(), errors.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& e : errors) result.diagnostics.push_back(std::move(e.second));
    return result;
}

CompileResult compile_source(std::string_view source) {
    cnl::ParseResult parsed = cnl::parse_text(source);
    CompileResult result = compile_document(parsed.propositions);
    result.diagnostics.insert(result.diagnostics.begin(), parsed.diagnostics.begin(), parsed.diagnostics.end());
    return result;
}

}  // namespace cnl2asp
