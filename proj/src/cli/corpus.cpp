#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cnl2asp/cli.h"
#include "cnl2asp/rewriter.h"

namespace cnl2asp::cli {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_statements(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '"') quoted = !quoted;
        if (!quoted && c == '%') {
            while (i < text.size() && text[i] != '\n') ++i;
            continue;
        }
        if (quoted || !std::isspace(static_cast<unsigned char>(c))) cur += c;
        if (quoted || c != '.') continue;
        bool range = (i + 1 < text.size() && text[i + 1] == '.') || (i > 0 && text[i - 1] == '.');
        if (range) continue;
        std::size_t j = i + 1;
        while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        if (j < text.size() && text[j] == '[') {
            std::size_t close = text.find(']', j);
            if (close == std::string::npos) close = text.size() - 1;
            for (std::size_t k = j; k <= close; ++k)
                if (!std::isspace(static_cast<unsigned char>(text[k]))) cur += text[k];
            i = close;
        }
        out.push_back(cur);
        cur.clear();
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::string rename(const std::string& s, bool alpha) {
    std::string out;
    std::map<std::string, std::string> names;
    bool quoted = false;
    for (std::size_t i = 0; i < s.size();) {
        char c = s[i];
        if (c == '"') quoted = !quoted;
        bool start = !quoted && (std::isalpha(static_cast<unsigned char>(c)) || c == '_') &&
                     (i == 0 || !(std::isalnum(static_cast<unsigned char>(s[i - 1])) || s[i - 1] == '_'));
        if (!start) {
            out += c;
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
        std::string word = s.substr(i, j - i);
        bool generated = word.size() > 2 && word.compare(0, 2, "_X") == 0 &&
                         std::all_of(word.begin() + 2, word.end(), [](char d) { return std::isdigit(static_cast<unsigned char>(d)); });
        bool variable = std::isupper(static_cast<unsigned char>(word[0])) || generated;
        if (generated || (alpha && variable)) {
            auto it = names.find(word);
            if (it == names.end())
                it = names.emplace(word, (alpha ? "V" : "_G") + std::to_string(names.size() + 1)).first;
            out += it->second;
        } else {
            out += word;
        }
        i = j;
    }
    return out;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

}  // namespace

std::size_t CorpusReport::passed() const {
    return static_cast<std::size_t>(std::count_if(cases.begin(), cases.end(), [](const CaseResult& c) { return c.passed; }));
}

std::vector<std::string> normalize_program(const std::string& text, bool alpha) {
    std::vector<std::string> out;
    for (const std::string& s : split_statements(text)) out.push_back(rename(s, alpha));
    return out;
}

std::string apply_ledger(const std::string& expected, const std::vector<LedgerEntry>& entries) {
    std::vector<std::string> lines = lines_of(expected);
    for (const LedgerEntry& e : entries) {
        if (e.line < 1 || static_cast<std::size_t>(e.line) > lines.size())
            throw std::runtime_error("ledger line " + std::to_string(e.line) + " is outside the listing");
        std::string& l = lines[static_cast<std::size_t>(e.line) - 1];
        if (e.moveBefore > 0) continue;
        auto pos = l.find(e.expected);
        if (pos == std::string::npos)
            throw std::runtime_error("ledger text '" + e.expected + "' not found on line " + std::to_string(e.line));
        l.replace(pos, e.expected.size(), e.actual);
    }
    std::vector<std::size_t> order(lines.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (const LedgerEntry& e : entries) {
        if (e.moveBefore < 1) continue;
        if (static_cast<std::size_t>(e.moveBefore) > lines.size())
            throw std::runtime_error("ledger line " + std::to_string(e.moveBefore) + " is outside the listing");
        auto from = std::find(order.begin(), order.end(), static_cast<std::size_t>(e.line) - 1);
        std::size_t moved = *from;
        order.erase(from);
        order.insert(std::find(order.begin(), order.end(), static_cast<std::size_t>(e.moveBefore) - 1), moved);
    }
    std::string out;
    for (std::size_t i : order) out += lines[i] + "\n";
    return out;
}

std::string unified_diff(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::size_t n = a.size(), m = b.size();
    std::vector<std::vector<std::size_t>> lcs(n + 1, std::vector<std::size_t>(m + 1, 0));
    for (std::size_t i = n; i-- > 0;)
        for (std::size_t j = m; j-- > 0;)
            lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);
    std::ostringstream out;
    out << "--- expected\n+++ actual\n";
    std::size_t i = 0, j = 0;
    while (i < n || j < m) {
        if (i < n && j < m && a[i] == b[j]) {
            out << "  " << a[i] << "\n";
            ++i;
            ++j;
        } else if (j < m && (i == n || lcs[i][j + 1] >= lcs[i + 1][j])) {
            out << "+ " << b[j++] << "\n";
        } else {
            out << "- " << a[i++] << "\n";
        }
    }
    return out.str();
}

std::vector<CorpusCase> load_corpus(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw std::runtime_error("corpus directory " + dir.string() + " does not exist");
    std::vector<CorpusCase> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_directory() || !fs::exists(entry.path() / "input.cnl")) continue;
        CorpusCase c;
        c.name = entry.path().filename().string();
        c.input = entry.path() / "input.cnl";
        c.expected = entry.path() / "expected.lp";
        if (!fs::exists(c.expected)) throw std::runtime_error("MissingExpectedFile: " + c.expected.string());
        fs::path ledger = entry.path() / "ledger.json";
        if (fs::exists(ledger)) {
            auto j = nlohmann::json::parse(read_file(ledger));
            c.alpha = j.value("alpha", false);
            for (const auto& e : j.value("exceptions", nlohmann::json::array()))
                c.exceptions.push_back(LedgerEntry{e.at("line").get<int>(), e.value("expected", ""),
                                                   e.value("actual", ""), e.value("reason", ""),
                                                   e.value("source", ""), e.value("move_before", 0),
                                                   e.value("kind", "replace")});
        }
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(), [](const CorpusCase& a, const CorpusCase& b) { return a.name < b.name; });
    return out;
}

CaseResult run_case(const CorpusCase& c) {
    CaseResult r;
    r.name = c.name;
    auto start = std::chrono::steady_clock::now();
    CompileResult compiled = compile_source(read_file(c.input));
    for (const auto& d : compiled.diagnostics) r.notes.push_back(d.format());
    std::vector<std::string> actual = normalize_program(compiled.program(), c.alpha);
    std::vector<std::string> expected = normalize_program(apply_ledger(read_file(c.expected), c.exceptions), c.alpha);
    for (const auto& e : c.exceptions)
        r.notes.push_back(e.moveBefore > 0 ? "moved line " + std::to_string(e.line) + " before line " +
                                                 std::to_string(e.moveBefore)
                                           : "masked line " + std::to_string(e.line) + ": '" + e.expected +
                                                 "' -> '" + e.actual + "'");
    r.passed = compiled.ok() && actual == expected;
    if (actual != expected) r.diff = unified_diff(expected, actual);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

CorpusReport run_corpus(const fs::path& dir) {
    CorpusReport report;
    for (const auto& c : load_corpus(dir)) report.cases.push_back(run_case(c));
    return report;
}

}  // namespace cnl2asp::cli
