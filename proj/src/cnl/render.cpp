#include <sstream>

#include "cnl2asp/cnl/parser.h"

namespace cnl2asp::cnl {

namespace {

std::string article_for(const Words& w) {
    if (w.empty() || w.front().empty()) return "a";
    char c = static_cast<char>(std::tolower(static_cast<unsigned char>(w.front()[0])));
    return (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u') ? "an" : "a";
}

std::string plural(const std::string& unit) { return unit + "s"; }

struct CnlWriter {
    std::string term(const Term& t) { return t.text; }

    std::string expr(const Expr& e) {
        switch (e.kind) {
            case Expr::Kind::Term: return term(e.term);
            case Expr::Kind::Time:
            case Expr::Kind::Date: return e.text;
            case Expr::Kind::Binary: return expr(e.operands[0]) + e.text + expr(e.operands[1]);
            case Expr::Kind::Abs: return "|" + expr(e.operands[0]) + "|";
            case Expr::Kind::Paren: return "(" + expr(e.operands[0]) + ")";
            case Expr::Kind::Negate: return "-" + expr(e.operands[0]);
            case Expr::Kind::AttributeOf: {
                std::string s = "the " + join(e.attribute);
                if (e.attributeVar) s += " " + term(*e.attributeVar);
                s += " of the " + join(e.concept_name);
                if (e.label) s += " " + term(*e.label);
                return s;
            }
            case Expr::Kind::EntityRef: {
                std::string s = "the " + join(e.concept_name);
                if (e.label) s += " " + term(*e.label);
                return s;
            }
            case Expr::Kind::Sum: {
                std::string s = "the sum between ";
                for (std::size_t i = 0; i < e.operands.size(); ++i) {
                    if (i) s += (i + 1 == e.operands.size()) ? (e.operands.size() > 2 ? ", and " : " and ") : ", ";
                    s += expr(e.operands[i]);
                }
                return s;
            }
            case Expr::Kind::Difference:
                return "the difference between " + expr(e.operands[0]) + " and " + expr(e.operands[1]);
            case Expr::Kind::AbsDifference:
                return "the difference in absolute value between " + expr(e.operands[0]) + ", and " +
                       expr(e.operands[1]);
            case Expr::Kind::Aggregate: return aggregate(e.aggregate.front());
        }
        return "";
    }

    std::string shift(const TemporalShift& s) {
        std::string r = std::string("the ") + (s.offset > 0 ? "next " : "previous ") + s.unit;
        if (s.anchor) r += " respect to " + term(*s.anchor);
        return r;
    }

    std::string condition_tail(const Condition& c) { return std::string(cmp_word_text(c.op)) + " " + expr(c.rhs); }

    std::string attribute(const AttributeSpec& a) {
        if (a.shift) return shift(*a.shift);
        std::string s;
        for (std::size_t i = 0; i < a.path.size(); ++i) s += (i ? " " : "") + join(a.path[i]);
        if (a.value) {
            if (a.value->kind == Expr::Kind::Term && a.value->term.kind == Term::Kind::Variable)
                s += " " + expr(*a.value);
            else
                s += " equal to " + expr(*a.value);
        }
        for (const auto& c : a.conditions) s += " " + condition_tail(c);
        return s;
    }

    std::string mention(const Mention& m) {
        std::string s;
        if (!m.preposition.empty()) s += m.preposition + " ";
        if (m.article) s += article_for(m.concept_name) + " ";
        s += join(m.concept_name);
        if (m.label) s += " " + term(*m.label);
        if (m.shift) s += " " + shift(*m.shift);
        bool first = true;
        for (const auto& a : m.attributes) {
            if (a.with)
                s += std::string(first ? " " : ", ") + "with " + attribute(a);
            else
                s += std::string(first ? " " : ", ") + attribute(a);
            first = false;
        }
        for (const auto& c : m.conditions) s += " that is " + condition_tail(c);
        if (!m.relativeVerb.empty()) {
            s += " " + join(m.relativeVerb);
            for (const auto& r : m.relativeObjects) s += " " + mention(r);
        }
        return s;
    }

    std::string window_prefix(const Window& w) {
        return "the previous " + std::to_string(w.length) + " consecutive " + plural(w.unit);
    }

    std::string clause(const SimpleClause& c) {
        std::string s;
        if (!c.quantifier.empty()) s += c.quantifier + " ";
        if (c.window && c.window->kind == Window::Kind::Previous) s += window_prefix(*c.window) + " ";
        if (c.shift) s += shift(*c.shift) + " ";
        if (c.subject) s += mention(*c.subject) + " ";
        Words verb = c.verb;
        if (c.negated) {
            if (!verb.empty() && (verb[0] == "is" || verb[0] == "are" || verb[0] == "be"))
                verb.insert(verb.begin() + 1, "not");
            else
                s += "does not ";
        }
        s += join(verb);
        for (std::size_t i = 0; i < c.objects.size(); ++i) {
            const Mention& o = c.objects[i];
            if (i && o.preposition.empty()) s += " and";
            s += " " + mention(o);
        }
        if (c.window && c.window->kind == Window::Kind::Consecutive)
            s += " for " + std::to_string(c.window->length) + " consecutive " + plural(c.window->unit);
        return s;
    }

    std::string clauses(const std::vector<SimpleClause>& cs) {
        std::string s;
        for (std::size_t i = 0; i < cs.size(); ++i) s += (i ? " and also " : "") + clause(cs[i]);
        return s;
    }

    std::string aggregate(const Aggregate& a) {
        static const char* names[] = {"number", "total", "lowest", "highest"};
        std::string s = std::string("the ") + names[static_cast<int>(a.fn)];
        if (a.fn == AggFn::Count) {
            s += " of " + join(a.counted);
            if (a.window) s += " between each " + std::to_string(a.window->length) + " " + plural(a.window->unit);
            for (const auto& w : a.with) s += " with " + mention(w);
        } else if (a.in) {
            s += " of " + join(a.attribute) + " in " + mention(*a.in);
        } else if (a.of) {
            s += " " + join(a.attribute) + " of " + mention(*a.of);
        }
        if (a.link == Aggregate::Link::Where) s += " where " + clause(a.clause.front());
        if (a.link == Aggregate::Link::That) s += " that " + clause(a.clause.front());
        for (const auto& f : a.forEach) s += " for each " + mention(f);
        if (a.ranging.size() == 2) s += " ranging between " + expr(a.ranging[0]) + " and " + expr(a.ranging[1]);
        return s;
    }

    std::string whenever(const std::vector<Mention>& ms, bool leading) {
        std::string s;
        for (std::size_t i = 0; i < ms.size(); ++i) {
            s += (i || !leading) ? ", whenever there is " : "whenever there is ";
            if (ms[i].negated) s += "not ";
            s += mention(ms[i]);
        }
        return s;
    }

    std::string where(const std::vector<WhereCondition>& ws) {
        std::string s;
        for (std::size_t i = 0; i < ws.size(); ++i) {
            const auto& w = ws[i];
            s += i ? " and " : ", where ";
            s += term(w.variable) + " is ";
            if (w.kind == WhereCondition::Kind::OneOf) {
                s += "one of ";
                if (w.respectively) s += "respectively ";
                for (std::size_t k = 0; k < w.values.size(); ++k) s += (k ? ", " : "") + term(w.values[k]);
            } else if (w.kind == WhereCondition::Kind::Between) {
                s += "between " + term(w.values[0]) + " and " + term(w.values[1]);
            } else {
                s += std::string(cmp_word_text(w.op)) + " " + expr(w.rhs);
            }
        }
        return s;
    }

    std::string such_that(const ConstraintBody& b) {
        if (!b.condition || !b.condition->lhs || b.condition->lhs->kind != Expr::Kind::Aggregate) return "";
        const auto& st = b.condition->lhs->aggregate.front().suchThat;
        std::string s;
        for (std::size_t i = 0; i < st.size(); ++i) s += (i ? ", " : ", such that there is ") + mention(st[i]);
        return s;
    }

    std::string body(const ConstraintBody& b, const WeakConstraint* weak) {
        std::string s;
        if (!b.leadingWhenever.empty()) s += whenever(b.leadingWhenever, true) + ", ";
        switch (b.kind) {
            case ConstraintBody::Kind::WhenThen:
                s += "when " + clauses(b.clauses) + " then " + clauses(b.thenClauses);
                break;
            case ConstraintBody::Kind::Quantified:
            case ConstraintBody::Kind::Clauses: s += clauses(b.clauses); break;
            case ConstraintBody::Kind::Condition: {
                Aggregate* none = nullptr;
                (void)none;
                Condition c = *b.condition;
                if (c.lhs && c.lhs->kind == Expr::Kind::Aggregate) c.lhs->aggregate.front().suchThat.clear();
                s += expr(*c.lhs) + " is " + condition_tail(c) + such_that(b);
                break;
            }
            case ConstraintBody::Kind::Objective:
                s += expr(*b.objective) + " is " +
                     (weak && weak->suffix == WeakConstraint::Direction::Minimize ? "minimized" : "maximized");
                break;
        }
        if (weak && b.kind != ConstraintBody::Kind::Objective && weak->suffix != WeakConstraint::Direction::None)
            s += weak->suffix == WeakConstraint::Direction::Maximize ? " is maximized" : " is minimized";
        s += whenever(b.whenever, false);
        s += where(b.where);
        return s;
    }

    std::string quantity(const Quantity& q) {
        switch (q.kind) {
            case Quantity::Kind::None: return "";
            case Quantity::Kind::Exactly: return "exactly " + term(*q.low) + " ";
            case Quantity::Kind::AtMost: return "at most " + term(*q.high) + " ";
            case Quantity::Kind::AtLeast: return "at least " + term(*q.low) + " ";
            case Quantity::Kind::Between: return "between " + term(*q.low) + " and " + term(*q.high) + " ";
        }
        return "";
    }

    std::string decl_list(const std::vector<Words>& ws) {
        std::string s;
        for (std::size_t i = 0; i < ws.size(); ++i) {
            if (i) s += (i + 1 == ws.size()) ? ", and " : ", ";
            s += article_for(ws[i]) + " " + join(ws[i]);
        }
        return s;
    }

    std::string values(const std::vector<Term>& ts) {
        std::string s;
        for (std::size_t i = 0; i < ts.size(); ++i) s += (i ? ", " : "") + term(ts[i]);
        return s;
    }

    std::string proposition(const Proposition& p) {
        return std::visit([this](const auto& x) { return render(x); }, p.payload) + ".";
    }

    std::string cap(std::string s) {
        if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
        return s;
    }

    std::string render(const DomainDefinition& d) {
        std::string s = cap(article_for(d.name)) + " " + join(d.name);
        if (!d.keys.empty()) s += " is identified by " + decl_list(d.keys);
        if (!d.params.empty()) s += (d.keys.empty() ? " has " : ", and has ") + decl_list(d.params);
        return s;
    }

    std::string render(const TemporalDefinition& t) {
        std::string s = cap(article_for(t.name)) + " " + join(t.name) + " is a temporal concept expressed in " +
                        t.unit + " ranging from " + t.start + " to " + t.end;
        if (t.length) s += " with a length of " + std::to_string(*t.length) + " " + t.lengthUnit;
        return s;
    }

    std::string render(const ConstantDefinition& c) {
        std::string s = c.name + " is a constant";
        if (c.value) s += " equal to " + term(*c.value);
        return s;
    }

    std::string render(const CompoundDefinition& c) {
        std::string s = cap(article_for(c.name)) + " " + join(c.name);
        if (c.range) {
            s += " goes from " + expr(c.from) + " to " + expr(c.to);
            for (std::size_t i = 0; i < c.madeOf.size(); ++i)
                s += (i ? " that are made of " : " and is made of ") + join(c.madeOf[i]);
            return s;
        }
        s += " is one of " + values(c.items);
        for (const auto& a : c.attributes)
            s += " and has " + join(a.name) + " that is equal to respectively " + values(a.values);
        return s;
    }

    std::string render(const EnumerativeDefinition& e) {
        if (e.isA) return term(e.value) + " is " + article_for(e.concept_name) + " " + join(e.concept_name);
        std::string s = cap(clause(e.statement));
        if (!e.when.empty()) s += " when " + clauses(e.when);
        s += where(e.where);
        return s;
    }

    std::string render(const WheneverThen& w) {
        std::string s = cap(whenever(w.whenever, true)) + ", then ";
        s += w.subject ? term(*w.subject) : std::string("we");
        s += w.modality == WheneverThen::Modality::Must ? " must have " : " can have ";
        s += quantity(w.quantity);
        for (std::size_t i = 0; i < w.heads.size(); ++i) {
            if (i) s += ", or ";
            if (i < w.restated.size() && w.restated[i])
                s += *w.restated[i] == WheneverThen::Modality::Must ? "must have " : "can have ";
            s += mention(w.heads[i]);
        }
        for (std::size_t i = 0; i < w.suchThat.size(); ++i)
            s += (i ? ", " : " such that there is ") + mention(w.suchThat[i]);
        if (!w.targets.empty()) {
            s += " ";
            if (!w.targetPreposition.empty()) s += w.targetPreposition + " ";
            s += quantity(w.targetQuantity);
            for (std::size_t i = 0; i < w.targets.size(); ++i) s += (i ? ", and " : "") + mention(w.targets[i]);
        }
        if (w.duration) s += " for " + expr(*w.duration) + " " + plural(w.durationUnit);
        return s;
    }

    std::string render(const FactProposition& f) { return "There is " + mention(f.mention); }

    std::string render(const QuantifiedChoice& q) {
        std::string s = "Every " + mention(q.subject) + " can " + join(q.verb);
        std::string qt = quantity(q.quantity);
        if (!qt.empty()) s += " " + qt.substr(0, qt.size() - 1);
        for (std::size_t i = 0; i < q.objects.size(); ++i) s += (i ? " or " : " ") + mention(q.objects[i]);
        for (const auto& f : q.forEach) s += " for each " + mention(f);
        return s;
    }

    std::string render(const StrongConstraint& c) {
        return std::string(c.required ? "It is required that " : "It is prohibited that ") + body(c.body, nullptr);
    }

    std::string render(const WeakConstraint& w) {
        std::string s = "It is preferred";
        if (w.prefix == WeakConstraint::Direction::Maximize) s += " as much as possible";
        if (w.prefix == WeakConstraint::Direction::Minimize) s += " as little as possible";
        s += ", with " + w.priority + " priority, that " + body(w.body, &w);
        return s;
    }
};

// ---- structural dump ----

struct Dumper {
    std::ostringstream out;

    void term(const Term& t) { out << "T" << static_cast<int>(t.kind) << ":" << t.text; }
    void opt_term(const std::optional<Term>& t) {
        if (t)
            term(*t);
        else
            out << "-";
    }
    void words(const Words& w) { out << "[" << join(w, "_") << "]"; }

    void expr(const Expr& e) {
        out << "(E" << static_cast<int>(e.kind) << " ";
        if (e.kind == Expr::Kind::Term) term(e.term);
        out << e.text << " ";
        words(e.attribute);
        opt_term(e.attributeVar);
        words(e.concept_name);
        opt_term(e.label);
        for (const auto& o : e.operands) expr(o);
        for (const auto& a : e.aggregate) aggregate(a);
        out << ")";
    }

    void shift(const std::optional<TemporalShift>& s) {
        if (!s) return;
        out << "(shift " << s->offset << " " << s->unit << " ";
        opt_term(s->anchor);
        out << ")";
    }

    void window(const std::optional<Window>& w) {
        if (!w) return;
        out << "(window " << static_cast<int>(w->kind) << " " << w->length << " " << w->unit << ")";
    }

    void condition(const Condition& c) {
        out << "(cond ";
        if (c.lhs) expr(*c.lhs);
        out << static_cast<int>(c.op) << " ";
        expr(c.rhs);
        out << ")";
    }

    void mention(const Mention& m) {
        out << "(M ";
        words(m.concept_name);
        opt_term(m.label);
        shift(m.shift);
        for (const auto& a : m.attributes) {
            out << "(A ";
            for (const auto& p : a.path) words(p);
            if (a.value) expr(*a.value);
            for (const auto& c : a.conditions) condition(c);
            shift(a.shift);
            out << ")";
        }
        for (const auto& c : m.conditions) condition(c);
        out << m.preposition << " ";
        words(m.relativeVerb);
        for (const auto& r : m.relativeObjects) mention(r);
        out << (m.negated ? "!" : "") << (m.article ? "a" : "") << ")";
    }

    void clause(const SimpleClause& c) {
        out << "(C " << c.quantifier << " ";
        if (c.subject) mention(*c.subject);
        shift(c.shift);
        window(c.window);
        out << (c.negated ? "not " : "");
        words(c.verb);
        for (const auto& o : c.objects) mention(o);
        out << ")";
    }

    void aggregate(const Aggregate& a) {
        out << "(G " << static_cast<int>(a.fn) << " ";
        words(a.attribute);
        words(a.counted);
        if (a.of) mention(*a.of);
        if (a.in) mention(*a.in);
        for (const auto& m : a.with) mention(m);
        window(a.window);
        out << static_cast<int>(a.link);
        for (const auto& c : a.clause) clause(c);
        for (const auto& m : a.forEach) mention(m);
        for (const auto& m : a.suchThat) mention(m);
        for (const auto& e : a.ranging) expr(e);
        out << ")";
    }

    void where(const std::vector<WhereCondition>& ws) {
        for (const auto& w : ws) {
            out << "(W " << static_cast<int>(w.kind) << " ";
            term(w.variable);
            out << " " << static_cast<int>(w.op) << " ";
            if (w.kind == WhereCondition::Kind::Compare) expr(w.rhs);
            out << (w.respectively ? "resp " : "");
            for (const auto& v : w.values) term(v);
            out << ")";
        }
    }

    void quantity(const Quantity& q) {
        out << "(Q " << static_cast<int>(q.kind) << " ";
        opt_term(q.low);
        opt_term(q.high);
        out << ")";
    }

    void body(const ConstraintBody& b) {
        out << "(B " << static_cast<int>(b.kind);
        for (const auto& c : b.clauses) clause(c);
        out << "|";
        for (const auto& c : b.thenClauses) clause(c);
        if (b.condition) condition(*b.condition);
        if (b.objective) expr(*b.objective);
        for (const auto& m : b.leadingWhenever) mention(m);
        out << "|";
        for (const auto& m : b.whenever) mention(m);
        where(b.where);
        out << ")";
    }

    void visit(const DomainDefinition& d) {
        words(d.name);
        for (const auto& k : d.keys) words(k);
        out << "|";
        for (const auto& k : d.params) words(k);
    }
    void visit(const TemporalDefinition& t) {
        words(t.name);
        out << t.unit << " " << t.start << " " << t.end << " " << (t.length ? *t.length : -1) << t.lengthUnit;
    }
    void visit(const ConstantDefinition& c) {
        out << c.name << " ";
        opt_term(c.value);
    }
    void visit(const CompoundDefinition& c) {
        words(c.name);
        out << c.range;
        if (c.range) {
            expr(c.from);
            expr(c.to);
        }
        for (const auto& t : c.items) term(t);
        for (const auto& a : c.attributes) {
            words(a.name);
            for (const auto& t : a.values) term(t);
        }
        for (const auto& m : c.madeOf) words(m);
    }
    void visit(const EnumerativeDefinition& e) {
        out << e.isA;
        if (e.isA) {
            term(e.value);
            words(e.concept_name);
            return;
        }
        clause(e.statement);
        for (const auto& c : e.when) clause(c);
        where(e.where);
    }
    void visit(const WheneverThen& w) {
        for (const auto& m : w.whenever) mention(m);
        out << static_cast<int>(w.modality);
        opt_term(w.subject);
        quantity(w.quantity);
        for (const auto& m : w.heads) mention(m);
        for (const auto& m : w.restated) out << (m ? static_cast<int>(*m) : -1);
        out << "|";
        for (const auto& m : w.suchThat) mention(m);
        quantity(w.targetQuantity);
        out << w.targetPreposition;
        for (const auto& m : w.targets) mention(m);
        if (w.duration) expr(*w.duration);
        out << w.durationUnit;
    }
    void visit(const FactProposition& f) { mention(f.mention); }
    void visit(const QuantifiedChoice& q) {
        mention(q.subject);
        words(q.verb);
        quantity(q.quantity);
        out << q.disjunctive;
        for (const auto& m : q.objects) mention(m);
        out << "|";
        for (const auto& m : q.forEach) mention(m);
    }
    void visit(const StrongConstraint& c) {
        out << c.required;
        body(c.body);
    }
    void visit(const WeakConstraint& w) {
        out << static_cast<int>(w.prefix) << static_cast<int>(w.suffix) << w.priority;
        body(w.body);
    }
};

}  // namespace

std::string render_cnl(const Proposition& prop) { return CnlWriter{}.proposition(prop); }

std::string dump(const Proposition& prop) {
    Dumper d;
    d.out << proposition_kind_name(prop.kind) << " ";
    std::visit([&d](const auto& x) { d.visit(x); }, prop.payload);
    return d.out.str();
}

}  // namespace cnl2asp::cnl
