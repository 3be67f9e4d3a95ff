#include "cnl2asp/registry.h"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace cnl2asp {

using asp::Term;

const Attribute& ConceptSignature::attribute(std::size_t position) const {
    return position < keys.size() ? keys[position] : params.at(position - keys.size());
}

std::optional<std::size_t> ConceptSignature::position_of(const std::string& attribute) const {
    for (std::size_t i = 0; i < arity(); ++i)
        if (this->attribute(i).name == attribute) return i;
    return std::nullopt;
}

std::optional<long> TemporalConcept::index_of(const std::string& label) const {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) return std::nullopt;
    return static_cast<long>(it - labels.begin()) + 1;
}

const std::string& TemporalConcept::label_of(long index) const {
    if (index < 1 || index > size()) throw std::out_of_range("temporal index " + std::to_string(index));
    return labels[static_cast<std::size_t>(index - 1)];
}

long parse_clock(const std::string& text) {
    int h = 0, m = 0;
    char ampm[3] = {0, 0, 0};
    if (std::sscanf(text.c_str(), "%d:%d %2s", &h, &m, ampm) < 2 || h < 0 || h > 23 || m < 0 || m > 59)
        throw CompileError(ErrorKind::SyntaxError, "malformed time '" + text + "'");
    std::string suffix = ampm;
    if (suffix == "AM" || suffix == "PM") {
        if (h > 12) throw CompileError(ErrorKind::SyntaxError, "malformed time '" + text + "'");
        if (h == 12) h = 0;
        if (suffix == "PM") h += 12;
    }
    return h * 60L + m;
}

std::string format_clock(long minutes) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02ld:%02ld", (minutes / 60) % 24, minutes % 60);
    return buf;
}

long parse_date(const std::string& text) {
    using namespace std::chrono;
    unsigned d = 0, m = 0;
    int y = 0;
    if (std::sscanf(text.c_str(), "%u/%u/%d", &d, &m, &y) != 3)
        throw CompileError(ErrorKind::SyntaxError, "malformed date '" + text + "'");
    year_month_day ymd{year{y}, month{m}, day{d}};
    if (!ymd.ok()) throw CompileError(ErrorKind::SyntaxError, "invalid date '" + text + "'");
    return sys_days{ymd}.time_since_epoch().count();
}

std::string format_date(long days) {
    using namespace std::chrono;
    year_month_day ymd{sys_days{std::chrono::days{days}}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02u/%02u/%04d", static_cast<unsigned>(ymd.day()),
                  static_cast<unsigned>(ymd.month()), static_cast<int>(ymd.year()));
    return buf;
}

std::string Registry::predicate_name(const std::string& name) {
    std::string out;
    for (char c : name) out += c == ' ' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

ConceptSignature& Registry::store(ConceptSignature sig) {
    auto it = concepts_.find(sig.name);
    if (it != concepts_.end()) {
        const ConceptSignature& old = it->second;
        auto names = [](const ConceptSignature& s) {
            std::vector<std::string> out;
            for (std::size_t i = 0; i < s.arity(); ++i) out.push_back(s.attribute(i).name);
            return out;
        };
        if (names(old) != names(sig) || old.kind != sig.kind)
            throw CompileError(ErrorKind::ConflictingSignature,
                               "concept '" + sig.name + "' is already declared with different attributes");
        it->second = std::move(sig);
        return it->second;
    }
    order_.push_back(sig.name);
    return concepts_.emplace(sig.name, std::move(sig)).first->second;
}

const ConceptSignature& Registry::register_domain(const cnl::DomainDefinition& def) {
    ConceptSignature sig;
    sig.name = cnl::key_of(def.name);
    sig.predicate = predicate_name(sig.name);
    sig.kind = ConceptKind::Domain;
    auto attribute = [&](const cnl::Words& w) {
        Attribute a{cnl::key_of(w), ""};
        if (a.name != sig.name && concepts_.count(a.name)) a.reference = a.name;
        return a;
    };
    for (const auto& k : def.keys) sig.keys.push_back(attribute(k));
    for (const auto& p : def.params) sig.params.push_back(attribute(p));
    if (sig.keys.empty()) std::swap(sig.keys, sig.params);
    std::set<std::string> seen;
    for (std::size_t i = 0; i < sig.arity(); ++i)
        if (!seen.insert(sig.attribute(i).name).second)
            throw CompileError(ErrorKind::ConflictingSignature,
                               "attribute '" + sig.attribute(i).name + "' declared twice for '" + sig.name + "'");
    if (sig.keys.size() == 1 && !sig.keys[0].is_reference()) sig.label_slot = 0;
    return store(std::move(sig));
}

std::pair<TemporalConcept, std::vector<asp::Statement>> Registry::register_temporal(const cnl::TemporalDefinition& def) {
    TemporalConcept t;
    t.name = cnl::key_of(def.name);
    if (def.unit == "minutes") {
        t.kind = TemporalConcept::Kind::Minutes;
        t.start = parse_clock(def.start);
        t.end = parse_clock(def.end);
        t.step = def.length.value_or(1);
        if (def.lengthUnit == "days") t.step *= 24 * 60;
    } else if (def.unit == "days") {
        t.kind = TemporalConcept::Kind::Days;
        t.start = parse_date(def.start);
        t.end = parse_date(def.end);
        t.step = def.length.value_or(1);
    } else {
        t.kind = TemporalConcept::Kind::Steps;
        try {
            t.start = std::stol(def.start);
            t.end = std::stol(def.end);
        } catch (const std::exception&) {
            throw CompileError(ErrorKind::SyntaxError, "step range needs integer endpoints");
        }
    }
    if (t.step <= 0) throw CompileError(ErrorKind::MisalignedStep, "step length must be positive");
    if (t.start >= t.end)
        throw CompileError(ErrorKind::EmptyRange, "temporal concept '" + t.name + "' has an empty range");
    if (t.kind == TemporalConcept::Kind::Minutes && (t.end - t.start) % t.step != 0)
        throw CompileError(ErrorKind::MisalignedStep,
                           "the span of '" + t.name + "' is not a multiple of " + std::to_string(t.step) + " minutes");

    std::vector<asp::Statement> facts;
    switch (t.kind) {
    case TemporalConcept::Kind::Minutes:
        for (long m = t.start; m < t.end; m += t.step) t.labels.push_back(format_clock(m));
        break;
    case TemporalConcept::Kind::Days:
        for (long d = t.start; d <= t.end; d += t.step) t.labels.push_back(format_date(d));
        break;
    case TemporalConcept::Kind::Steps:
        for (long s = t.start; s <= t.end; ++s) t.labels.push_back(std::to_string(s));
        break;
    }

    ConceptSignature sig;
    sig.name = t.name;
    sig.predicate = predicate_name(t.name);
    sig.kind = ConceptKind::Temporal;
    sig.keys.push_back({t.name, ""});
    if (t.kind != TemporalConcept::Kind::Steps) sig.params.push_back({"label", ""});
    sig.label_slot = 0;
    store(std::move(sig));

    for (long i = 1; i <= t.size(); ++i) {
        asp::Statement s;
        s.head.kind = asp::Head::Kind::Normal;
        asp::Atom a{predicate_name(t.name), {Term::num(i)}};
        if (t.kind != TemporalConcept::Kind::Steps) a.args.push_back(Term::str(t.label_of(i)));
        s.head.atoms.push_back(std::move(a));
        facts.push_back(std::move(s));
    }
    temporals_[t.name] = t;
    return {t, facts};
}

void Registry::register_constant(const cnl::ConstantDefinition& def) {
    ConstantBinding b;
    b.name = def.name;
    if (def.value) {
        const cnl::Term& v = *def.value;
        if (v.kind == cnl::Term::Kind::NumberValue) {
            b.value = Term::num(std::stol(v.text));
        } else if (v.kind == cnl::Term::Kind::ConstantRef) {
            b.value = resolve_constant(v.text);
        } else {
            std::string s = v.text;
            if (!s.empty() && s.front() == '"') s = s.substr(1, s.size() - 2);
            if (!s.empty()) s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
            b.value = Term::str(s);
        }
        if (def.negativeNumber && b.value && b.value->kind == Term::Kind::Number) b.value->number = -b.value->number;
    }
    auto it = constants_.find(def.name);
    if (it != constants_.end()) {
        if (!(it->second.value == b.value))
            throw CompileError(ErrorKind::ConflictingSignature, "constant '" + def.name + "' is bound twice");
        return;
    }
    constantOrder_.push_back(def.name);
    constants_[def.name] = std::move(b);
}

std::optional<Term> Registry::resolve_constant(const std::string& name) const {
    auto it = constants_.find(name);
    if (it == constants_.end()) return std::nullopt;
    if (it->second.value) return it->second.value;
    return Term::symbol(name);
}

std::vector<std::string> Registry::unbound_constants() const {
    std::vector<std::string> out;
    for (const auto& n : constantOrder_)
        if (!constants_.at(n).value) out.push_back(n);
    return out;
}

const ConceptSignature& Registry::register_range(const std::string& name, Term low, Term high) {
    if (low.kind == Term::Kind::Number && high.kind == Term::Kind::Number && low.number > high.number)
        throw CompileError(ErrorKind::EmptyRange, "'" + name + "' goes from a larger to a smaller value");
    ConceptSignature sig;
    sig.name = name;
    sig.predicate = predicate_name(name);
    sig.kind = ConceptKind::Range;
    sig.keys.push_back({name, ""});
    sig.label_slot = 0;
    sig.range_low = std::move(low);
    sig.range_high = std::move(high);
    return store(std::move(sig));
}

const ConceptSignature& Registry::register_list(const std::string& name, const std::vector<std::string>& items,
                                                const std::vector<std::string>& attributes) {
    ConceptSignature sig;
    sig.name = name;
    sig.predicate = predicate_name(name);
    sig.kind = ConceptKind::List;
    sig.keys.push_back({"id", ""});
    sig.params.push_back({name, ""});
    for (const auto& a : attributes) sig.params.push_back({a, ""});
    sig.label_slot = 1;
    sig.items = items;
    return store(std::move(sig));
}

const ConceptSignature& Registry::ensure_implicit(const std::string& name, std::size_t arity) {
    auto it = concepts_.find(name);
    if (it != concepts_.end()) {
        if (it->second.kind == ConceptKind::Implicit && it->second.arity() != arity)
            throw CompileError(ErrorKind::ArityConflict, "'" + name + "' is used with " + std::to_string(arity) +
                                                             " and " + std::to_string(it->second.arity()) +
                                                             " arguments");
        return it->second;
    }
    ConceptSignature sig;
    sig.name = name;
    sig.predicate = predicate_name(name);
    sig.kind = ConceptKind::Implicit;
    for (std::size_t i = 0; i < arity; ++i) sig.keys.push_back({i == 0 ? "id" : "id" + std::to_string(i + 1), ""});
    if (arity == 1) sig.label_slot = 0;
    return store(std::move(sig));
}

const VerbSignature& Registry::ensure_verb(const std::string& predicate, const std::string& subject,
                                           const std::vector<std::string>& objects) {
    auto it = verbs_.find(predicate);
    if (it != verbs_.end()) {
        if (it->second.objects.size() != objects.size())
            throw CompileError(ErrorKind::ArityConflict, "'" + predicate + "' is used with " +
                                                             std::to_string(objects.size() + 1) + " and " +
                                                             std::to_string(it->second.arity()) + " arguments");
        return it->second;
    }
    if (auto c = concepts_.find(predicate); c != concepts_.end() && c->second.arity() != objects.size() + 1)
        throw CompileError(ErrorKind::ArityConflict, "'" + predicate + "' is already a concept of arity " +
                                                         std::to_string(c->second.arity()));
    return verbs_.emplace(predicate, VerbSignature{predicate, subject, objects}).first->second;
}

const ConceptSignature* Registry::find(const std::string& name) const {
    auto it = concepts_.find(name);
    return it == concepts_.end() ? nullptr : &it->second;
}

const TemporalConcept* Registry::temporal(const std::string& name) const {
    auto it = temporals_.find(name);
    return it == temporals_.end() ? nullptr : &it->second;
}

const VerbSignature* Registry::verb(const std::string& predicate) const {
    auto it = verbs_.find(predicate);
    return it == verbs_.end() ? nullptr : &it->second;
}

const TemporalConcept* Registry::temporal_of_kind(TemporalConcept::Kind kind) const {
    for (const auto& name : order_) {
        const TemporalConcept* t = temporal(name);
        if (t && t->kind == kind) return t;
    }
    return nullptr;
}

const TemporalConcept* Registry::temporal_for_unit(const std::string& unit) const {
    std::string u = cnl::to_lower(unit);
    for (const auto& name : order_) {
        const TemporalConcept* t = temporal(name);
        if (!t) continue;
        if (u == name || u == name + "s" || u == name + "es") return t;
    }
    return nullptr;
}

asp::Atom Registry::signature_of(const std::string& concept_name,
                                 const std::map<std::string, Term>& fields) const {
    const ConceptSignature* sig = find(concept_name);
    if (!sig) throw CompileError(ErrorKind::UndefinedSignature, "concept '" + concept_name + "' is not defined");
    for (const auto& [attr, _] : fields)
        if (!sig->position_of(attr))
            throw CompileError(ErrorKind::UnknownAttribute,
                               "concept '" + concept_name + "' has no attribute '" + attr + "'");
    asp::Atom atom{sig->predicate, {}};
    for (std::size_t i = 0; i < sig->arity(); ++i) {
        const Attribute& a = sig->attribute(i);
        auto it = fields.find(a.name);
        if (!a.is_reference()) {
            atom.args.push_back(it == fields.end() ? Term::anon() : it->second);
            continue;
        }
        const ConceptSignature* ref = find(a.reference);
        std::size_t n = ref ? ref->keys.size() : 1;
        if (it == fields.end()) {
            atom.args.push_back(Term::func(predicate_name(a.reference), std::vector<Term>(n, Term::anon())));
        } else if (it->second.kind == Term::Kind::Function && it->second.name == predicate_name(a.reference)) {
            atom.args.push_back(it->second);
        } else {
            atom.args.push_back(Term::func(predicate_name(a.reference), {it->second}));
        }
    }
    return atom;
}

std::string Registry::normalize_verb(const cnl::Words& phrase, bool) {
    static const std::set<std::string> copulas = {"is", "are", "be", "am", "was", "were", "been"};
    static const std::set<std::string> articles = {"a", "an", "the"};
    static const std::set<std::string> auxiliaries = {"does", "do", "not", "can"};
    std::vector<std::string> words;
    bool copula = false;
    for (const auto& raw : phrase) {
        std::string w = cnl::to_lower(raw);
        if (copulas.count(w)) {
            copula = true;
            continue;
        }
        if (articles.count(w) || auxiliaries.count(w)) continue;
        words.push_back(w);
    }
    if (words.size() > 1 && (words[0] == "has" || words[0] == "have")) words.erase(words.begin());
    if (!copula && !words.empty()) {
        std::string& head = words[0];
        auto ends = [&](const std::string& s) {
            return head.size() > s.size() && head.compare(head.size() - s.size(), s.size(), s) == 0;
        };
        if (head == "has") head = "have";
        else if (ends("ies")) head = head.substr(0, head.size() - 3) + "y";
        else if (ends("ches") || ends("shes") || ends("sses") || ends("xes") || ends("zes") || ends("oes"))
            head.resize(head.size() - 2);
        else if (ends("s") && !ends("ss") && !ends("us") && !ends("is")) head.pop_back();
    }
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) out += '_';
        out += w;
    }
    return out;
}

}  // namespace cnl2asp
