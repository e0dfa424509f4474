#pragma once

#include <filesystem>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "scenario.hpp"

namespace logman::cli {

enum ExitCode { exit_ok = 0, exit_hypothesis = 1, exit_numerical = 2, exit_config = 3 };

/// Scalars a sweep row reports; NaN (or -1 for verdict) when not produced.
struct Headline {
    double eigenvalue = std::numeric_limits<double>::quiet_NaN();
    int verdict = -1;
    double residual = std::numeric_limits<double>::quiet_NaN();
    double center = std::numeric_limits<double>::quiet_NaN();
};

struct RunResult {
    int exit_code = exit_ok;
    std::string report;
    /// File name and content, written in this order.
    std::vector<std::pair<std::string, std::string>> files;
    Headline headline;
};

/// Runs one command in memory. Library errors are mapped to exit codes and
/// the message goes into the report.
RunResult run_command(const Scenario& s, const std::string& command);

/// Runs and writes <command>_report.txt plus the CSV files into out_dir,
/// which must exist (exit 3 without writing anything otherwise).
int run_scenario(const Scenario& s, const std::string& command, const std::filesystem::path& out_dir);

/// One row per value: value,status,verdict,eigenvalue,residual,center.
/// Rows may run concurrently and are emitted in input order.
std::string sweep(const Scenario& s, const std::string& param, const std::vector<double>& values);

/// "0.1,0.2,0.5" or "lo:step:hi" (inclusive, computed as lo + i*step).
std::vector<double> parse_values(const std::string& text);

}  // namespace logman::cli
