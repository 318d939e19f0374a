#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "contagion/config.hpp"
#include "contagion/experiment.hpp"

namespace contagion {

inline constexpr std::string_view version = "1.0.0";

// Comma separated, header row, LF endings, reals with 6 significant digits,
// absent statistics as empty cells.
inline constexpr std::string_view csv_header =
    "z,protocol,policy,trials,contagion_prob,contagion_se,cond_extent,cond_extent_se,"
    "n_contagion_events,realized_mean_degree,assortativity,series,trigger_order_prob,"
    "trigger_order_se,trigger_order_events,degree_size_corr,ratio,ratio_se,error";

std::string format_real(double v);

void write_csv(std::ostream& os, const SweepTable& table);
std::string to_csv(const SweepTable& table);

nlohmann::json to_json(const SweepTable& table);

struct RunRecord {
    nlohmann::json spec;
    std::uint64_t master_seed = 0;
    std::string started_at;  // ISO 8601, UTC
    double duration_seconds = 0.0;
    std::vector<std::string> warnings;
};

nlohmann::json to_json(const RunRecord& record);

// Path of the run record that accompanies `out_path`: same stem, ".run.json".
std::string run_record_path(const std::string& out_path);

struct ExecuteResult {
    int status = exit_status::ok;
    SweepTable table;
    std::vector<std::string> warnings;
};

// Runs every series, fills ratio columns, writes the table and the run
// record. Progress and diagnostics go to `log`.
ExecuteResult execute(const RunConfig& config, std::ostream& log);

// Runs the series without writing anything.
SweepTable run_sweeps(const RunConfig& config, std::ostream* log = nullptr);

}  // namespace contagion
