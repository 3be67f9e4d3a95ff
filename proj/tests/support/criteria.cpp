#include "criteria.h"

#include <ctime>
#include <iomanip>
#include <random>
#include <sstream>

#include "cnl2asp/cnl/parser.h"
#include "cnl2asp/rewriter.h"
#include "support.h"

namespace cnl2asp::testing {

namespace {

int number(std::mt19937& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::string clock12(int minutes) {
    int h = minutes / 60, m = minutes % 60;
    std::ostringstream out;
    out << std::setw(2) << std::setfill('0') << (h % 12 == 0 ? 12 : h % 12) << ":" << std::setw(2) << m
        << (h < 12 ? " AM" : " PM");
    return out.str();
}

std::string clock24(int minutes) {
    std::ostringstream out;
    out << std::setfill('0') << std::setw(2) << minutes / 60 << ":" << std::setw(2) << minutes % 60;
    return out.str();
}

std::string date_text(std::time_t t) {
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream out;
    out << std::setfill('0') << std::setw(2) << tm.tm_mday << "/" << std::setw(2) << tm.tm_mon + 1 << "/"
        << std::setw(4) << tm.tm_year + 1900;
    return out.str();
}

std::string fact(const std::string& pred, long index, const std::string& label) {
    return pred + "(" + std::to_string(index) + ",\"" + label + "\").";
}

void fail(Outcome& o, const std::string& what) {
    if (o.passed) o.detail = what;
    o.passed = false;
}

}  // namespace

Outcome temporal_minutes(std::uint32_t seed, int ranges) {
    std::mt19937 rng(seed);
    Outcome o;
    for (int i = 0; i < ranges; ++i) {
        int step = number(rng, 1, 120);
        int count = number(rng, 1, 1439 / step);
        int start = number(rng, 0, 1439 - count * step);
        int end = start + count * step;
        std::string text = "A slot is a temporal concept expressed in minutes ranging from " + clock12(start) + " to " +
                           clock12(end) + " with a length of " + std::to_string(step) + " minutes.";
        CompileResult r = compile_source(text);
        auto statements = r.statements();
        ++o.checked;
        if (!r.ok()) {
            fail(o, text + " -> " + r.diagnostics.front().format());
            continue;
        }
        if (static_cast<int>(statements.size()) != (end - start) / step) {
            fail(o, text + " -> " + std::to_string(statements.size()) + " facts");
            continue;
        }
        for (int k = 0; k < count; ++k) {
            std::string want = fact("slot", k + 1, clock24(start + k * step));
            if (asp::render(statements[static_cast<std::size_t>(k)]) != want) {
                fail(o, text + " -> " + asp::render(statements[static_cast<std::size_t>(k)]) + " vs " + want);
                break;
            }
        }
    }
    if (o.passed) o.detail = std::to_string(o.checked) + " minute ranges";
    return o;
}

Outcome temporal_dates(std::uint32_t seed, int ranges) {
    std::mt19937 rng(seed);
    Outcome o;
    std::tm base{};
    base.tm_year = 90;
    base.tm_mday = 1;
    const std::time_t epoch = timegm(&base);
    for (int i = 0; i < ranges; ++i) {
        std::time_t start = epoch + static_cast<std::time_t>(number(rng, 0, 20000)) * 86400;
        int span = number(rng, 1, 3 * 365);
        std::time_t end = start + static_cast<std::time_t>(span) * 86400;
        std::string text = "A day is a temporal concept expressed in days ranging from " + date_text(start) + " to " +
                           date_text(end) + ".";
        CompileResult r = compile_source(text);
        auto statements = r.statements();
        ++o.checked;
        if (!r.ok() || static_cast<int>(statements.size()) != span + 1) {
            fail(o, text + " -> " + std::to_string(statements.size()) + " facts, want " + std::to_string(span + 1));
            continue;
        }
        int probe = number(rng, 0, span);
        std::string want = fact("day", probe + 1, date_text(start + static_cast<std::time_t>(probe) * 86400));
        std::string got = asp::render(statements[static_cast<std::size_t>(probe)]);
        if (got != want) fail(o, text + " -> " + got + " vs " + want);
    }
    if (o.passed) o.detail = std::to_string(o.checked) + " date ranges";
    return o;
}

Outcome with_permutations(std::uint32_t seed, int permutations) {
    std::mt19937 rng(seed);
    Outcome o;
    std::size_t propositions = 0, reordered = 0;
    for (const auto& entry : std::filesystem::directory_iterator(corpus_root())) {
        auto input = entry.path() / "input.cnl";
        if (!std::filesystem::exists(input)) continue;
        auto parsed = cnl::parse_text(read_text(input));
        if (!parsed.ok()) {
            fail(o, input.string() + " does not parse");
            continue;
        }
        std::string original = render_document(parsed.propositions);
        std::string baseline = compile_source(original).program();
        for (std::size_t i = 0; i < parsed.propositions.size(); ++i) {
            if (permutable_mentions(parsed.propositions[i]) == 0) continue;
            ++propositions;
            for (int k = 0; k < permutations; ++k) {
                auto props = parsed.propositions;
                shuffle_with_clauses(props[i], rng);
                std::string text = render_document(props);
                ++o.checked;
                if (text != original) ++reordered;
                if (compile_source(text).program() != baseline) {
                    fail(o, entry.path().filename().string() + ": " + cnl::render_cnl(props[i]));
                    break;
                }
            }
        }
    }
    if (propositions == 0 || reordered == 0) fail(o, "no proposition with permutable clauses");
    if (o.passed)
        o.detail = std::to_string(propositions) + " propositions, " + std::to_string(o.checked) + " permutations (" +
                   std::to_string(reordered) + " reordered)";
    return o;
}

Outcome rule_safety(std::uint32_t seed, int documents) {
    Outcome o;
    auto check = [&](const std::string& label, const std::string& text) {
        CompileResult r = compile_source(text);
        if (!r.ok()) fail(o, label + ": " + r.diagnostics.front().format());
        for (const auto& s : r.statements()) {
            ++o.checked;
            if (!asp::is_safe(s).safe) fail(o, label + ": unsafe " + asp::render(s));
        }
    };
    for (const auto& entry : std::filesystem::directory_iterator(corpus_root()))
        if (std::filesystem::exists(entry.path() / "input.cnl"))
            check(entry.path().filename().string(), read_text(entry.path() / "input.cnl"));
    std::mt19937 rng(seed);
    for (int i = 0; i < documents; ++i) {
        SampledDocument doc = sample_document(rng);
        check("sampled document " + std::to_string(i) + ":\n" + doc.text, doc.text);
    }
    if (o.passed) o.detail = std::to_string(o.checked) + " rules";
    return o;
}

Outcome negate_involution() {
    Outcome o;
    for (asp::CmpOp op : {asp::CmpOp::Eq, asp::CmpOp::Ne, asp::CmpOp::Lt, asp::CmpOp::Le, asp::CmpOp::Gt,
                          asp::CmpOp::Ge}) {
        ++o.checked;
        if (negate_condition(negate_condition(op)) != op || negate_condition(op) == op)
            fail(o, std::string("operator ") + asp::cmp_text(op));
    }
    if (o.passed) o.detail = "6 operators";
    return o;
}

}  // namespace cnl2asp::testing
