#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hrp/hrp.hpp"
#include "hrp/simulate.hpp"

namespace hrp::cli {

enum class Strategy { Hrp, MaxSharpe, EqualWeight };

std::string_view strategy_id(Strategy s);
std::string_view strategy_display_name(Strategy s);

struct RunConfig {
    std::string input_path;
    std::optional<std::string> start;
    std::optional<std::string> end;
    std::vector<Strategy> strategies{Strategy::Hrp, Strategy::MaxSharpe, Strategy::EqualWeight};
    Linkage linkage = Linkage::Single;
    double rf = 0.0;
    bool long_only = true;
    int periods_per_year = 252;
    double max_missing_frac = 0.10;
    std::string output_dir = ".";
    std::optional<std::uint64_t> seed;
    bool svg = false;
};

/// Throws ConfigError if an invariant of the configuration is violated.
void validate(const RunConfig& config);

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitUsage = 2;

int cmd_weights(const RunConfig& config, std::ostream& out);
int cmd_report(const RunConfig& config, std::ostream& out);
int cmd_simulate(const RunConfig& config, const SimulationConfig& sim, const std::string& output_path,
                 std::ostream& out);

/// Parses argv and dispatches to a subcommand. Errors are written to `err`
/// and mapped to exit codes: 1 for computation errors, 2 for usage and I/O.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hrp::cli
