#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cnl2asp/cli.h"
#include "cnl2asp/rewriter.h"

namespace cnl2asp::cli {

namespace {

int corpus_command(const std::string& dir) {
    CorpusReport report;
    try {
        report = run_corpus(dir);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 3;
    }
    for (const auto& c : report.cases) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << "\n";
        for (const auto& n : c.notes) std::cout << "  " << n << "\n";
        if (!c.passed) std::cout << c.diff;
    }
    std::cout << report.passed() << " passed, " << report.failed() << " failed\n";
    return report.failed() == 0 ? 0 : 2;
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"Compiles controlled natural language specifications to ASP"};
    std::string input, output;
    std::string corpus, solver;
    bool checkOnly = false;
    app.add_option("input", input, "CNL file");
    app.add_option("output_file", output, "ASP output file (default: standard output)");
    app.add_option("-o,--output", output, "ASP output file");
    app.add_flag("--check-only", checkOnly, "parse and check safety without emitting");
    app.add_option("--corpus", corpus, "run the golden corpus in this directory");
    app.add_option("--solver", solver, "grounder used for a smoke check of the output");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    if (!corpus.empty()) return corpus_command(corpus);
    if (input.empty()) {
        std::cerr << "no input file\n";
        return 3;
    }
    std::ifstream in(input, std::ios::binary);
    if (!in) {
        std::cerr << input << ": cannot read\n";
        return 3;
    }
    std::ostringstream text;
    text << in.rdbuf();

    CompileResult result = compile_source(text.str());
    for (const auto& d : result.diagnostics) std::cerr << input << ":" << d.format() << "\n";
    int code = result.has_parse_errors() ? 1 : result.ok() ? 0 : 2;

    if (checkOnly) {
        for (const auto& s : result.statements()) {
            auto safety = asp::is_safe(s);
            if (safety.safe) continue;
            std::string vars;
            for (const auto& v : safety.unbound) vars += (vars.empty() ? "" : ", ") + v;
            std::cerr << input << ": UnsafeRule: " << render(s) << " (" << vars << ")\n";
            if (code == 0) code = 2;
        }
        return code;
    }

    std::string program = result.program();
    if (output.empty()) {
        std::cout << program;
    } else {
        std::ofstream out(output, std::ios::binary);
        if (!out || !(out << program)) {
            std::cerr << output << ": cannot write\n";
            return 3;
        }
    }

    if (!solver.empty() || app.count("--solver")) {
        auto found = find_solver(solver.empty() ? std::nullopt : std::optional<std::string>(solver));
        SmokeResult smoke = solver_smoke_check(program, result.registry.unbound_constants(), found);
        if (smoke.status == SmokeStatus::Skipped) {
            std::cerr << "solver check skipped: " << smoke.output << "\n";
        } else if (smoke.status == SmokeStatus::Rejected) {
            std::cerr << "SolverRejected:\n" << smoke.output;
            if (code == 0) code = 2;
        }
    }
    return code;
}

}  // namespace cnl2asp::cli
