#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stieltjes/errors.hpp"

namespace stieltjes::cli {

enum class Experiment { Dos, Idos, Lyapunov, PadeError, Measure, Invariant, Baseline };

std::string to_string(Experiment e);
/// Throws ConfigError for an unknown name.
Experiment parse_experiment(const std::string& name);

/// Malformed configuration; `line` is 0 when the problem is not tied to a line.
class ConfigError : public ParameterError {
public:
    ConfigError(const std::string& what, int line, std::string key)
        : ParameterError(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line(line),
          key(std::move(key)) {}

    int line;
    std::string key;
};

/// Unreadable or inconsistent run directory.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    Experiment experiment = Experiment::Dos;
    double a = 8.0;              ///< gamma shape
    double b = 0.125;            ///< gamma scale
    double t_re = 1.0;           ///< evaluation point t (lyapunov, pade-error, invariant)
    double t_im = 0.0;
    double lambda_min = 0.05;    ///< spectral grid (dos, idos, measure)
    double lambda_max = 20.0;
    int lambda_points = 200;
    int n = 256;                 ///< matrix size (dos, measure, baseline)
    std::int64_t steps = 1000000;  ///< chain length (lyapunov)
    int n_min = 1000;            ///< Pade fit window (pade-error)
    int n_max = 10000;
    std::int64_t samples = 100000;  ///< forward iterates kept (invariant)
    std::vector<std::uint64_t> seeds{1};
    std::optional<double> tolerance;  ///< embedded check threshold; experiment default if unset
    int threads = 1;
    std::string out = "run";

    /// The check threshold in force (explicit value or the experiment default).
    double resolved_tolerance() const;
};

double default_tolerance(Experiment e);

/// Parses `key = value` lines; '#' starts a comment.  Numbers accept p/q
/// fractions; seeds are a comma-separated list.  Unknown or repeated keys,
/// malformed values and out-of-range values raise ConfigError with the line.
ExperimentConfig parse_config(const std::string& text);

/// Canonical text for a config; parse_config(emit_config(c)) == c.
std::string emit_config(const ExperimentConfig& config);

bool operator==(const ExperimentConfig& x, const ExperimentConfig& y);

/// Range checks shared by the parser and command-line overrides.
void validate(const ExperimentConfig& config);

/// One embedded numerical check.
struct Check {
    std::string name;
    double observed;
    double threshold;
    std::string relation;  ///< "<=" or ">"
    bool pass;
};

struct RunReport {
    std::filesystem::path directory;
    std::vector<Check> checks;
    bool all_pass() const;
};

/// Runs one experiment, writing per-seed CSVs, summary.csv, checks.csv,
/// config.txt and manifest.txt into config.out.  CSV bytes depend only on
/// the config (not on threads or timing).
RunReport run(const ExperimentConfig& config);

/// Reads a run directory's manifest and checks, prints a PASS/FAIL table to
/// `os` and writes summary.json.  Returns true when every check passed.
/// Throws InputError if the manifest is missing or malformed.
bool summarize(const std::filesystem::path& directory, std::ostream& os);

/// Entry point behind the stieltjes-lab executable.  Returns the exit status:
/// 0 all checks pass, 1 usage or input error, 2 numerical check failure.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace stieltjes::cli
