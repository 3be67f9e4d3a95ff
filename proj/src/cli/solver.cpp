#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "cnl2asp/cli.h"

namespace cnl2asp::cli {

namespace {

struct Run {
    int status = -1;
    std::string output;
};

Run run(const std::string& command) {
    Run r;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
    r.status = pclose(pipe);
    return r;
}

std::string quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "'\\''";
        else out += c;
    }
    return out + "'";
}

}  // namespace

std::optional<std::string> find_solver(const std::optional<std::string>& explicitPath) {
    if (explicitPath) {
        if (std::filesystem::exists(*explicitPath)) return quote(*explicitPath);
        return std::nullopt;
    }
    if (const char* env = std::getenv("CNL2ASP_SOLVER"); env && *env) return std::string(env);
    if (run("command -v clingo >/dev/null 2>&1").status == 0) return std::string("clingo");
    if (run("python3 -c 'import clingo' >/dev/null 2>&1").status == 0) return std::string("python3 -m clingo");
    return std::nullopt;
}

SmokeResult solver_smoke_check(const std::string& program, const std::vector<std::string>& constants,
                               const std::optional<std::string>& solver) {
    SmokeResult r;
    if (!solver) {
        r.output = "SolverNotFound";
        return r;
    }
    std::mt19937_64 rng(std::random_device{}());
    auto file = std::filesystem::temp_directory_path() / ("cnl2asp_smoke_" + std::to_string(rng()) + ".lp");
    {
        std::ofstream out(file);
        out << program;
    }
    std::string cmd = *solver + " --text";
    for (const auto& c : constants) cmd += " -c " + c + "=1";
    cmd += " " + quote(file.string()) + " 2>&1 >/dev/null";
    Run res = run(cmd);
    std::filesystem::remove(file);
    r.output = res.output;
    bool error = res.output.find("error") != std::string::npos || res.output.find("ERROR") != std::string::npos;
    r.status = res.status == 0 && !error ? SmokeStatus::Passed : SmokeStatus::Rejected;
    return r;
}

}  // namespace cnl2asp::cli
