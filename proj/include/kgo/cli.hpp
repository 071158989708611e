#pragma once

// Command-line front end: `kgo spectrum | joint | wavefunction | verify | scan | selftest`.

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kgo/oracle.hpp"
#include "kgo/spectrum.hpp"

namespace kgo::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_failure = 1,
    exit_config = 2,
    exit_no_root = 3,
    exit_no_convergence = 4,
    exit_verification = 5,
};

/// Raised for malformed or missing configuration; maps to exit code 2.
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Flat key=value settings; flags override entries read from a config file.
using KeyValues = std::map<std::string, std::string>;

/// Parses `key = value` lines with `#` comments. Unknown keys are rejected.
KeyValues parse_config_text(std::string_view text);

bool is_known_key(std::string_view key);

/// Locale-independent strict number parsing.
double parse_double(std::string_view key, std::string_view text);
int parse_int(std::string_view key, std::string_view text);

/// 17 significant digits, locale independent; NaN renders as "NaN".
std::string format_double(double v);

struct RunConfig
{
    Scenario scenario;
    SolveConfig solve;
    int fd_points = 20000;
    std::optional<double> x_max;
    std::string format = "csv";
    std::string out_path;

    static RunConfig from(const KeyValues& kv);
};

using Cell = std::variant<double, long long, std::string>;

struct Table
{
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

void write_csv(std::ostream& os, const Table& t);
/// Column-oriented object {"col": [..], ...}; NaN becomes null.
void write_json(std::ostream& os, const Table& t);

/// Entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace kgo::cli
