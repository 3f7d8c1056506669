#pragma once

#include <ostream>
#include <vector>

#include <nlohmann/json.hpp>

#include "gmflou/config.hpp"
#include "gmflou/stats.hpp"

namespace gmflou {

enum ExitCode : int {
    kExitPass = 0,
    kExitVerifyFailed = 1,
    kExitUsage = 2,
    kExitNumeric = 3,
};

/// Writes <out>/<process>_paths.csv and the replay sidecar <out>/<process>_paths.json.
int cmd_simulate(const RunConfig& cfg, std::ostream& log);

/// The moment battery for the configured parameters.
std::vector<MomentReport> verify_battery(const RunConfig& cfg);
/// Writes <out>/verify_report.json.
int cmd_verify(const RunConfig& cfg, std::ostream& log);

/// Exact relative variance bias |Var_scheme Z(t) / variance_Z - 1| for each n.
ConvergenceTable discretization_table(const RunConfig& cfg);
/// Writes <out>/converge.json with the m, alpha-up, alpha-down and n tables.
int cmd_converge(const RunConfig& cfg, std::ostream& log);

struct CfRow {
    CfPoint point;
    std::complex<double> analytic;
    std::complex<double> scheme;
    CfEstimate empirical;
    bool pass = false;
};
std::vector<CfRow> cf_table(const RunConfig& cfg);
/// Writes <out>/cf.csv and <out>/cf_report.json.
int cmd_cf(const RunConfig& cfg, std::ostream& log);

/// Parses the command line, runs the subcommand and maps errors to exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gmflou
