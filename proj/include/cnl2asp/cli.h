#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace cnl2asp::cli {

/// One tolerated difference between the compiled output and a reference listing.
struct LedgerEntry {
    int line = 0;          // 1-based line of expected.lp
    std::string expected;  // text in the listing
    std::string actual;    // text the compiler emits instead
    std::string reason;
    std::string source;    // where the listing comes from
    int moveBefore = 0;    // when set, the line is moved in front of this line instead
    std::string kind = "replace";  // "mask": deviation acknowledged up front; "replace": recorded finding
};

struct CorpusCase {
    std::string name;
    std::filesystem::path input;
    std::filesystem::path expected;
    std::vector<LedgerEntry> exceptions;
    bool alpha = false;  // compare up to variable renaming
};

struct CaseResult {
    std::string name;
    bool passed = false;
    std::string diff;                // unified diff when failed
    std::vector<std::string> notes;  // masked lines, diagnostics
    double seconds = 0;
};

struct CorpusReport {
    std::vector<CaseResult> cases;
    std::size_t passed() const;
    std::size_t failed() const { return cases.size() - passed(); }
};

/// Reads <dir>/<case>/{input.cnl, expected.lp, ledger.json}. Throws std::runtime_error
/// ("MissingExpectedFile: ...") when a case has no expected.lp.
std::vector<CorpusCase> load_corpus(const std::filesystem::path& dir);
CaseResult run_case(const CorpusCase& c);
CorpusReport run_corpus(const std::filesystem::path& dir);

/// One statement per line, whitespace outside strings removed, generated variables renumbered
/// per statement; with `alpha` every variable is renamed by first occurrence.
std::vector<std::string> normalize_program(const std::string& text, bool alpha = false);
/// Applies ledger substitutions to the raw expected text, line by line.
std::string apply_ledger(const std::string& expected, const std::vector<LedgerEntry>& entries);
std::string unified_diff(const std::vector<std::string>& expected, const std::vector<std::string>& actual);

enum class SmokeStatus { Passed, Skipped, Rejected };
struct SmokeResult {
    SmokeStatus status = SmokeStatus::Skipped;
    std::string output;
};

/// Command that runs the grounder: an explicit path, $CNL2ASP_SOLVER, "clingo" on PATH, or the
/// python clingo module. Empty when none is usable.
std::optional<std::string> find_solver(const std::optional<std::string>& explicitPath = std::nullopt);
/// Grounds `program` (text mode), defining each unbound constant as 1.
SmokeResult solver_smoke_check(const std::string& program, const std::vector<std::string>& constants,
                               const std::optional<std::string>& solver);

/// Entry point of the command-line tool. Exit codes: 0 ok, 1 parse errors, 2 semantic errors,
/// 3 I/O failure (and corpus or solver failures).
int run_cli(int argc, char** argv);

}  // namespace cnl2asp::cli
