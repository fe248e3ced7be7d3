#ifndef SQLO_CLI_HPP
#define SQLO_CLI_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sqlo/analytic.hpp"
#include "sqlo/experiments.hpp"

namespace sqlo::cli
{
enum class Command
{
    Verify,
    SweepSnr,
    SweepNumvar,
    ImageBand,
    Kernel,
    Roc
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

/// Bad command line or config file. `key` names the offending setting.
class UsageError : public std::runtime_error
{
public:
    UsageError(std::string key, const std::string& what) : std::runtime_error(what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

struct RunConfig
{
    Command command = Command::Verify;
    RadarParams params;
    double omega_h = 1.0;
    std::optional<int> cutoff;
    Normalization normalization = Normalization::FixedNbarLO;
    SweepParameter sweep = SweepParameter::R;
    std::vector<double> values;
    std::optional<double> snr;
    /// Target nbar_LO for fixed-nbar sweeps; defaults to |alpha|^2 + sinh^2 r.
    std::optional<double> nbar_lo;
    /// Empty or "-" writes to standard output.
    std::string output_path;
    OracleMode oracle_mode = OracleMode::SpotCheck;
};

/// Parses `key = value` lines; '#' starts a comment that runs to end of line.
std::map<std::string, std::string> parse_config_text(std::string_view text);

/// Builds a validated RunConfig from command-line arguments (without the
/// program name) layered over optional config-file text. Flags win over the
/// file. Throws UsageError.
RunConfig parse_config(const std::vector<std::string>& args, std::string_view config_text = {});

/// Executes `config`, writing CSV to config.output_path or `out`.
/// Diagnostics go to `err`. Returns the process exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Entry point shared by the executable: handles --config, --help and the
/// exit-code contract.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

}  // namespace sqlo::cli

#endif  // SQLO_CLI_HPP
