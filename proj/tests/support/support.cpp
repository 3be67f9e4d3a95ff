#include "support.h"

#include <fstream>
#include <sstream>

#include "cnl2asp/cnl/parser.h"

#ifndef CNL2ASP_CORPUS_DIR
#define CNL2ASP_CORPUS_DIR "tests/corpus"
#endif

namespace cnl2asp::testing {

std::filesystem::path corpus_root() { return CNL2ASP_CORPUS_DIR; }

std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

template <class T>
const T& pick(std::mt19937& rng, const std::vector<T>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

int number(std::mt19937& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::string quantity(std::mt19937& rng) {
    switch (number(rng, 0, 4)) {
    case 0: return "";
    case 1: return "exactly " + std::to_string(number(rng, 1, 2)) + " ";
    case 2: return "at most " + std::to_string(number(rng, 1, 3)) + " ";
    case 3: return "at least 1 ";
    default: return "between 1 and " + std::to_string(number(rng, 2, 3)) + " ";
    }
}

std::string comparison(std::mt19937& rng) {
    static const std::vector<std::string> words = {"equal to",     "different from",
                                                   "less than",    "greater than",
                                                   "at most",      "at least",
                                                   "less than or equal to", "greater than or equal to"};
    return pick(rng, words);
}

std::string priority(std::mt19937& rng) {
    static const std::vector<std::string> p = {"low", "medium", "high"};
    return pick(rng, p);
}

std::string sentence(std::mt19937& rng) {
    static const std::vector<std::string> names = {"alice", "bob", "carol", "dave"};
    static const std::vector<std::string> colors = {"red", "green", "blue"};
    std::string n = std::to_string(number(rng, 1, 60));
    switch (number(rng, 0, 16)) {
    case 0: {
        std::vector<std::string> with = {"with name equal to " + pick(rng, names), "with age equal to " + n,
                                         "with salary equal to " + std::to_string(number(rng, 10, 90))};
        std::shuffle(with.begin(), with.end(), rng);
        return "There is a person " + with[0] + ", " + with[1] + ", " + with[2] + ".";
    }
    case 1: return "Every node can be assigned to " + quantity(rng) + "color.";
    case 2: return "Every person can work in " + quantity(rng) + "project for each time.";
    case 3:
        return "Whenever there is a person with age " + comparison(rng) + " " + n +
               ", with name X then we must have a senior with name X.";
    case 4:
        return "Whenever there is a person P with age A " + comparison(rng) + " " + n +
               " then we can have " + quantity(rng) + "senior with name X such that there is a person with name X.";
    case 5: {
        std::string neg = number(rng, 0, 1) ? "is not" : "is";
        return "It is prohibited that node X " + neg + " assigned to color C and also node Y is assigned to color C, where X is different from Y.";
    }
    case 6:
        return std::string("It is ") + (number(rng, 0, 1) ? "required" : "prohibited") +
               " that the number of nodes that are assigned to color " + pick(rng, colors) + " is " +
               comparison(rng) + " " + std::to_string(number(rng, 1, 4)) + ".";
    case 7:
        return std::string("It is ") + (number(rng, 0, 1) ? "required" : "prohibited") + " that A is " +
               comparison(rng) + " " + n + ", whenever there is a person with name X, and with age A.";
    case 8:
        return "It is preferred with " + priority(rng) + " priority that the number of nodes that are assigned to color " +
               pick(rng, colors) + " is " + (number(rng, 0, 1) ? "maximized" : "minimized") + ".";
    case 9:
        return "It is preferred, with " + priority(rng) +
               " priority, that whenever there is a person with name X, and with salary S, S is " +
               (number(rng, 0, 1) ? "maximized" : "minimized") + ".";
    case 10: return "It is required that every person is happy.";
    case 11: return "Node Y is reachable when node X is reachable and also node X is connected to node Y.";
    case 12:
        return "Node " + std::to_string(number(rng, 1, 4)) + " is connected to node X, where X is one of " +
               std::to_string(number(rng, 1, 4)) + ", " + std::to_string(number(rng, 1, 4)) + ".";
    case 13:
        return "It is required that the sum between the age A of the person P and " + n + " is " + comparison(rng) +
               " the salary S of the person P, whenever there is a person P with age A, and with salary S.";
    case 14:
        return "It is preferred as " + std::string(number(rng, 0, 1) ? "much" : "little") + " as possible, with " +
               priority(rng) + " priority, that A is " + comparison(rng) + " " + n +
               ", whenever there is a person with name X, and with age A.";
    case 15:
        return "It is required that the total salary of a person with name X is " + comparison(rng) + " " + n +
               ", such that there is a senior with name X.";
    default:
        return std::string("It is ") + (number(rng, 0, 1) ? "required" : "prohibited") +
               " that when node X is connected to node Y then node X is not assigned to color C and also node Y is not assigned to color C.";
    }
}

void visit(cnl::Expr& e, const std::function<void(cnl::Mention&)>& fn);
void visit(cnl::Mention& m, const std::function<void(cnl::Mention&)>& fn);

void visit(cnl::Condition& c, const std::function<void(cnl::Mention&)>& fn) {
    if (c.lhs) visit(*c.lhs, fn);
    visit(c.rhs, fn);
}

void visit(cnl::SimpleClause& c, const std::function<void(cnl::Mention&)>& fn) {
    if (c.subject) visit(*c.subject, fn);
    for (auto& o : c.objects) visit(o, fn);
}

void visit(cnl::Mention& m, const std::function<void(cnl::Mention&)>& fn) {
    fn(m);
    for (auto& a : m.attributes) {
        if (a.value) visit(*a.value, fn);
        for (auto& c : a.conditions) visit(c, fn);
    }
    for (auto& c : m.conditions) visit(c, fn);
    for (auto& r : m.relativeObjects) visit(r, fn);
}

void visit(cnl::Expr& e, const std::function<void(cnl::Mention&)>& fn) {
    for (auto& o : e.operands) visit(o, fn);
    for (auto& a : e.aggregate) {
        if (a.of) visit(*a.of, fn);
        if (a.in) visit(*a.in, fn);
        for (auto& m : a.with) visit(m, fn);
        for (auto& c : a.clause) visit(c, fn);
        for (auto& m : a.forEach) visit(m, fn);
        for (auto& m : a.suchThat) visit(m, fn);
        for (auto& r : a.ranging) visit(r, fn);
    }
}

void visit(cnl::ConstraintBody& b, const std::function<void(cnl::Mention&)>& fn) {
    for (auto& m : b.leadingWhenever) visit(m, fn);
    for (auto& c : b.clauses) visit(c, fn);
    for (auto& c : b.thenClauses) visit(c, fn);
    if (b.condition) visit(*b.condition, fn);
    if (b.objective) visit(*b.objective, fn);
    for (auto& m : b.whenever) visit(m, fn);
}

}  // namespace

SampledDocument sample_document(std::mt19937& rng) {
    SampledDocument doc;
    std::ostringstream out;
    out << "A time is a temporal concept expressed in steps ranging from 1 to " << number(rng, 2, 6) << ".\n"
        << "A node goes from 1 to " << number(rng, 2, 5) << ".\n"
        << "A color is one of red, green, blue.\n"
        << "A person is identified by a name, and has an age, and a salary.\n"
        << "A project is identified by an id.\n"
        << "A senior is identified by a name.\n";
    doc.sentences = static_cast<std::size_t>(number(rng, 3, 8));
    for (std::size_t i = 0; i < doc.sentences; ++i) out << sentence(rng) << "\n";
    doc.text = out.str();
    return doc;
}

void for_each_mention(cnl::Proposition& p, const std::function<void(cnl::Mention&)>& fn) {
    std::visit(
        [&](auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, cnl::EnumerativeDefinition>) {
                visit(x.statement, fn);
                for (auto& c : x.when) visit(c, fn);
            } else if constexpr (std::is_same_v<T, cnl::WheneverThen>) {
                for (auto& m : x.whenever) visit(m, fn);
                for (auto& m : x.heads) visit(m, fn);
                for (auto& m : x.suchThat) visit(m, fn);
                for (auto& m : x.targets) visit(m, fn);
            } else if constexpr (std::is_same_v<T, cnl::FactProposition>) {
                visit(x.mention, fn);
            } else if constexpr (std::is_same_v<T, cnl::QuantifiedChoice>) {
                visit(x.subject, fn);
                for (auto& m : x.objects) visit(m, fn);
                for (auto& m : x.forEach) visit(m, fn);
            } else if constexpr (std::is_same_v<T, cnl::StrongConstraint> || std::is_same_v<T, cnl::WeakConstraint>) {
                visit(x.body, fn);
            }
        },
        p.payload);
}

std::size_t permutable_mentions(cnl::Proposition p) {
    std::size_t n = 0;
    for_each_mention(p, [&](cnl::Mention& m) {
        std::size_t with = 0;
        for (const auto& a : m.attributes) with += a.with ? 1 : 0;
        if (with >= 2) ++n;
    });
    return n;
}

void shuffle_with_clauses(cnl::Proposition& p, std::mt19937& rng) {
    for_each_mention(p, [&](cnl::Mention& m) {
        std::vector<std::size_t> slots;
        std::vector<cnl::AttributeSpec> specs;
        for (std::size_t i = 0; i < m.attributes.size(); ++i) {
            if (!m.attributes[i].with) continue;
            slots.push_back(i);
            specs.push_back(m.attributes[i]);
        }
        std::shuffle(specs.begin(), specs.end(), rng);
        for (std::size_t k = 0; k < slots.size(); ++k) m.attributes[slots[k]] = specs[k];
    });
}

std::string render_document(const std::vector<cnl::Proposition>& props) {
    std::string out;
    for (const auto& p : props) out += cnl::render_cnl(p) + "\n";
    return out;
}

}  // namespace cnl2asp::testing
