#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "contagion/experiment.hpp"

namespace contagion {

enum class OutputFormat { csv, json };

// Rows of series `targeted` get a ratio column p_targeted / p_random.
struct RatioPair {
    std::size_t targeted = 0;
    std::size_t random = 0;

    friend bool operator==(const RatioPair&, const RatioPair&) = default;
};

struct RunConfig {
    std::optional<std::string> preset;
    std::vector<ExperimentSpec> series;
    std::vector<RatioPair> ratios;
    std::string out_path;
    OutputFormat format = OutputFormat::csv;
    unsigned threads = 1;
    std::uint64_t master_seed = 0;
    std::vector<std::string> warnings;  // produced while resolving, echoed to the run record

    friend bool operator==(const RunConfig& a, const RunConfig& b) {
        return a.preset == b.preset && a.series == b.series && a.ratios == b.ratios &&
               a.out_path == b.out_path && a.format == b.format && a.threads == b.threads &&
               a.master_seed == b.master_seed;
    }
};

class ConfigError : public std::runtime_error {
public:
    enum class Kind { usage, unknown_preset, malformed_file, out_of_range };

    ConfigError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    Kind kind() const { return kind_; }
    int exit_code() const;

private:
    Kind kind_;
};

// Exit statuses of the command-line tool.
namespace exit_status {
inline constexpr int ok = 0;
inline constexpr int usage = 1;
inline constexpr int unknown_preset = 2;
inline constexpr int malformed_file = 3;
inline constexpr int out_of_range = 4;
inline constexpr int io_failure = 5;
inline constexpr int failed_points = 6;
}  // namespace exit_status

std::vector<std::string> preset_names();

// Caption-scale parameters of a figure experiment. Throws ConfigError.
RunConfig expand_preset(std::string_view name);

// Every value a run can be configured with; unset fields leave the base
// configuration alone.
struct Overrides {
    std::optional<std::size_t> nodes;
    std::optional<std::size_t> trials;
    std::optional<double> gamma;
    std::optional<double> alpha;
    std::optional<double> coupling;
    std::optional<std::uint32_t> sweeps;
    std::optional<SeedProtocol> protocol;
    std::optional<std::string> policy;  // none | targeted-degree | targeted-assets | random
    std::optional<double> policy_fraction;
    std::optional<double> policy_buffer;
    std::optional<std::vector<double>> z_grid;
    std::optional<double> threshold;
};

void apply_overrides(RunConfig& config, const Overrides& o);

SeedProtocol parse_protocol(std::string_view s);
std::vector<double> parse_grid(std::string_view spec);  // "min:max:step"

nlohmann::json to_json(const ExperimentSpec& spec);
ExperimentSpec spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& config);

// Raw command line before resolution.
struct CommandLine {
    std::optional<std::string> preset;
    std::optional<std::string> config_file;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<std::string> export_network;
    Overrides overrides;
};

// Thrown by parse_command_line for --help; carries the help text.
class HelpRequested : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// `args` excludes the program name. Throws ConfigError (usage) or HelpRequested.
CommandLine parse_command_line(const std::vector<std::string>& args);

// Precedence: flags > config file > preset > built-in defaults. A missing
// master seed is drawn from std::random_device and reported in `warnings`.
// Throws ConfigError.
RunConfig resolve_config(const CommandLine& cl);
RunConfig resolve_config(const nlohmann::json& file, const CommandLine& cl = {});

// parse_command_line followed by resolve_config.
RunConfig parse_config(const std::vector<std::string>& args);

std::string default_output_path(const RunConfig& config);

}  // namespace contagion
