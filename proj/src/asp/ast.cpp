#include "cnl2asp/asp/ast.h"

#include <algorithm>
#include <sstream>

namespace cnl2asp::asp {

Term Term::var(std::string name) {
    Term t;
    t.kind = Kind::Variable;
    t.name = std::move(name);
    return t;
}

Term Term::gen(long ordinal) {
    Term t;
    t.kind = Kind::Generated;
    t.number = ordinal;
    return t;
}

Term Term::anon() { return Term{}; }

Term Term::symbol(std::string name) {
    Term t;
    t.kind = Kind::Symbol;
    t.name = std::move(name);
    return t;
}

Term Term::num(long value) {
    Term t;
    t.kind = Kind::Number;
    t.number = value;
    return t;
}

Term Term::str(std::string value) {
    Term t;
    t.kind = Kind::String;
    t.name = std::move(value);
    return t;
}

Term Term::func(std::string functor, std::vector<Term> args) {
    Term t;
    t.kind = Kind::Function;
    t.name = std::move(functor);
    t.args = std::move(args);
    return t;
}

Term Term::range(Term lo, Term hi) {
    Term t;
    t.kind = Kind::Range;
    t.args = {std::move(lo), std::move(hi)};
    return t;
}

Term Term::arith(std::string op, Term lhs, Term rhs) {
    Term t;
    t.kind = Kind::Arith;
    t.name = std::move(op);
    t.args = {std::move(lhs), std::move(rhs)};
    return t;
}

Term Term::neg(Term inner) {
    Term t;
    t.kind = Kind::Arith;
    t.name = "-";
    t.args = {std::move(inner)};
    return t;
}

Term Term::paren(Term inner) {
    Term t;
    t.kind = Kind::Paren;
    t.args = {std::move(inner)};
    return t;
}

Term Term::abs(Term inner) {
    Term t;
    t.kind = Kind::Abs;
    t.args = {std::move(inner)};
    return t;
}

Term Term::mod(Term inner, long modulus) {
    Term t;
    t.kind = Kind::Mod;
    t.number = modulus;
    t.args = {std::move(inner)};
    return t;
}

bool Aggregate::operator==(const Aggregate& o) const {
    return fn == o.fn && terms == o.terms && condition == o.condition && op == o.op && guard == o.guard;
}

BodyElement BodyElement::literal(Atom a, bool negated) {
    BodyElement e;
    e.kind = Kind::Literal;
    e.atom = std::move(a);
    e.negated = negated;
    return e;
}

BodyElement BodyElement::comparison(Term lhs, CmpOp op, Term rhs) {
    BodyElement e;
    e.kind = Kind::Comparison;
    e.cmp = Comparison{std::move(lhs), op, std::move(rhs)};
    return e;
}

BodyElement BodyElement::aggregate(asp::Aggregate a) {
    BodyElement e;
    e.kind = Kind::Aggregate;
    e.agg.push_back(std::move(a));
    return e;
}

const char* cmp_text(CmpOp op) {
    switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
    }
    return "=";
}

CmpOp negate(CmpOp op) {
    switch (op) {
    case CmpOp::Eq: return CmpOp::Ne;
    case CmpOp::Ne: return CmpOp::Eq;
    case CmpOp::Lt: return CmpOp::Ge;
    case CmpOp::Ge: return CmpOp::Lt;
    case CmpOp::Le: return CmpOp::Gt;
    case CmpOp::Gt: return CmpOp::Le;
    }
    return op;
}

CmpOp mirror(CmpOp op) {
    switch (op) {
    case CmpOp::Lt: return CmpOp::Gt;
    case CmpOp::Gt: return CmpOp::Lt;
    case CmpOp::Le: return CmpOp::Ge;
    case CmpOp::Ge: return CmpOp::Le;
    default: return op;
    }
}

static const char* fn_text(AggFn fn) {
    switch (fn) {
    case AggFn::Count: return "#count";
    case AggFn::Sum: return "#sum";
    case AggFn::Min: return "#min";
    case AggFn::Max: return "#max";
    }
    return "#count";
}

static std::string join_terms(const std::vector<Term>& ts) {
    std::string out;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (i) out += ",";
        out += render(ts[i]);
    }
    return out;
}

static std::string join_body(const std::vector<BodyElement>& body) {
    std::string out;
    for (std::size_t i = 0; i < body.size(); ++i) {
        if (i) out += ", ";
        out += render(body[i]);
    }
    return out;
}

std::string render(const Term& t) {
    switch (t.kind) {
    case Term::Kind::Variable:
    case Term::Kind::Symbol: return t.name;
    case Term::Kind::Generated: return "_X" + std::to_string(t.number);
    case Term::Kind::Anonymous: return "_";
    case Term::Kind::Number: return std::to_string(t.number);
    case Term::Kind::String: return "\"" + t.name + "\"";
    case Term::Kind::Function: return t.name + "(" + join_terms(t.args) + ")";
    case Term::Kind::Range: return render(t.args[0]) + ".." + render(t.args[1]);
    case Term::Kind::Arith:
        if (t.args.size() == 1) return t.name + render(t.args[0]);
        return render(t.args[0]) + t.name + render(t.args[1]);
    case Term::Kind::Paren: return "(" + render(t.args[0]) + ")";
    case Term::Kind::Abs: return "|" + render(t.args[0]) + "|";
    case Term::Kind::Mod: return "(" + render(t.args[0]) + ")\\" + std::to_string(t.number);
    }
    return "_";
}

std::string render(const Atom& a) {
    if (a.args.empty()) return a.predicate;
    return a.predicate + "(" + join_terms(a.args) + ")";
}

std::string render(const BodyElement& e) {
    switch (e.kind) {
    case BodyElement::Kind::Literal: return (e.negated ? "not " : "") + render(e.atom);
    case BodyElement::Kind::Comparison:
        return render(e.cmp.lhs) + " " + cmp_text(e.cmp.op) + " " + render(e.cmp.rhs);
    case BodyElement::Kind::Aggregate: {
        const Aggregate& a = e.agg.front();
        std::string out = fn_text(a.fn);
        out += "{" + join_terms(a.terms);
        if (!a.condition.empty()) out += ": " + join_body(a.condition);
        out += "} ";
        out += cmp_text(a.op);
        out += " " + render(a.guard);
        return out;
    }
    }
    return "";
}

static std::string render_head(const Head& h) {
    switch (h.kind) {
    case Head::Kind::Empty: return "";
    case Head::Kind::Normal: return render(h.atoms.front());
    case Head::Kind::Disjunction: {
        std::string out;
        for (std::size_t i = 0; i < h.atoms.size(); ++i) {
            if (i) out += " | ";
            out += render(h.atoms[i]);
        }
        return out;
    }
    case Head::Kind::Choice: {
        std::string out;
        if (h.lower) out += render(*h.lower) + " <= ";
        out += "{";
        for (std::size_t i = 0; i < h.elements.size(); ++i) {
            if (i) out += "; ";
            out += render(h.elements[i].atom);
            if (!h.elements[i].condition.empty()) out += ": " + join_body(h.elements[i].condition);
        }
        out += "}";
        if (h.upper) out += " <= " + render(*h.upper);
        return out;
    }
    }
    return "";
}

std::string render(const Statement& s) {
    if (s.weak) {
        std::string out = ":~ " + join_body(s.body) + ". [" + render(s.weight) + "@" + std::to_string(s.level);
        for (const Term& t : s.terms) out += ", " + render(t);
        return out + "]";
    }
    std::string head = render_head(s.head);
    if (s.body.empty()) return head + ".";
    if (head.empty()) return ":- " + join_body(s.body) + ".";
    return head + " :- " + join_body(s.body) + ".";
}

std::string render_program(const std::vector<Statement>& program) {
    std::string out;
    for (const Statement& s : program) out += render(s) + "\n";
    return out;
}

static void add_unique(std::vector<std::string>& out, const std::string& name) {
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
}

void collect_variables(const Term& t, std::vector<std::string>& out) {
    if (t.kind == Term::Kind::Variable || t.kind == Term::Kind::Generated) {
        add_unique(out, render(t));
        return;
    }
    for (const Term& a : t.args) collect_variables(a, out);
}

static void collect_atom(const Atom& a, std::vector<std::string>& out) {
    for (const Term& t : a.args) collect_variables(t, out);
}

void collect_variables(const BodyElement& e, std::vector<std::string>& out) {
    switch (e.kind) {
    case BodyElement::Kind::Literal: collect_atom(e.atom, out); break;
    case BodyElement::Kind::Comparison:
        collect_variables(e.cmp.lhs, out);
        collect_variables(e.cmp.rhs, out);
        break;
    case BodyElement::Kind::Aggregate:
        for (const Term& t : e.agg.front().terms) collect_variables(t, out);
        for (const BodyElement& c : e.agg.front().condition) collect_variables(c, out);
        collect_variables(e.agg.front().guard, out);
        break;
    }
}

void collect_variables(const Statement& s, std::vector<std::string>& out) {
    for (const Atom& a : s.head.atoms) collect_atom(a, out);
    for (const ChoiceElement& c : s.head.elements) {
        collect_atom(c.atom, out);
        for (const BodyElement& e : c.condition) collect_variables(e, out);
    }
    if (s.head.lower) collect_variables(*s.head.lower, out);
    if (s.head.upper) collect_variables(*s.head.upper, out);
    for (const BodyElement& e : s.body) collect_variables(e, out);
    if (s.weak) {
        collect_variables(s.weight, out);
        for (const Term& t : s.terms) collect_variables(t, out);
    }
}

}  // namespace cnl2asp::asp
