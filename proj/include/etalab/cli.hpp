#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "etalab/experiments.hpp"
#include "etalab/verify.hpp"

namespace etalab::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kLibraryVersion = "etalab 1.0.0";

enum class OutputFormat { table, csv, json };
OutputFormat parse_format(std::string_view s);
std::string_view to_string(OutputFormat f);

enum ExitCode : int { ok = 0, failure = 1, inconclusive = 2, usage = 3 };

struct RunConfig {
    std::string command;  // eval | experiment | verify | cache
    std::string target;   // experiment name, suite or cache action
    ExperimentParams params;
    int K = 10;
    Function function = Function::eta;
    std::optional<int> digits;
    std::optional<std::filesystem::path> cache_dir;
    bool use_cache = true;
    OutputFormat format = OutputFormat::table;
    std::uint64_t seed = 2024;
    unsigned jobs = 1;
    bool timing = false;
    /// Rendered report destination; stdout when empty.
    std::optional<std::filesystem::path> out;

    /// 30 for verification suites, 20 otherwise.
    int effective_digits() const;
    /// --cache-dir, else $ETALAB_CACHE_DIR, else the per-user default.
    std::filesystem::path effective_cache_dir() const;
    /// Ordered key/value echo of everything that affects the results.
    std::vector<std::pair<std::string, std::string>> echo() const;
};

struct Report {
    RunConfig config;
    std::vector<ExperimentResult> results;
    std::vector<Check> checks;
    int exit_code = ExitCode::ok;
    std::string error;
    double seconds = 0;
};

/// Executes a command; errors become exit codes and the report's error text.
Report run(const RunConfig& config);

std::string render(const Report& r, OutputFormat f);
std::string render_table(const Report& r);
std::string render_csv(const Report& r);
std::string render_json(const Report& r);

/// Decimal digits of `part` that the radius certifies, at most `cap`;
/// "0" when the radius swallows the part.
std::string certified_decimal(const Float& part, const Mag& rad, int cap);
/// "RE", "RE+IMi" or "RE-IMi" with certified digits only.
std::string certified_string(const Ball& b, int cap);

/// Parses the argument vector into a config; UsageError naming the flag.
RunConfig parse_args(int argc, const char* const* argv);

/// Whole command-line program: parse, run, render, write; returns the exit code.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace etalab::cli
