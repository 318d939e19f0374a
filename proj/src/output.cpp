#include "contagion/output.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace contagion {

using nlohmann::json;

std::string format_real(double v) {
    if (v == 0.0) v = 0.0;  // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

namespace {

std::string cell(const std::optional<double>& v) { return v ? format_real(*v) : std::string{}; }

// quote only when needed
std::string text_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c == '\n' ? ' ' : c;
    }
    return q + "\"";
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

void write_csv(std::ostream& os, const SweepTable& table) {
    os << csv_header << '\n';
    for (const SweepRow& r : table) {
        auto value = [](const std::optional<Estimate>& e) {
            return e ? std::optional(e->value) : std::nullopt;
        };
        auto se = [](const std::optional<Estimate>& e) {
            return e ? std::optional(e->se) : std::nullopt;
        };
        const bool ran = !r.error && r.trials > 0;
        os << format_real(r.z) << ',' << r.protocol << ',' << r.policy << ',' << r.trials << ','
           << cell(value(r.contagion)) << ',' << cell(se(r.contagion)) << ','
           << cell(value(r.extent)) << ',' << cell(se(r.extent)) << ','
           << (ran ? std::to_string(r.contagion_events) : std::string{}) << ','
           << cell(r.mean_degree) << ',' << cell(r.assortativity) << ',' << text_cell(r.series)
           << ',' << cell(r.trigger ? std::optional(r.trigger->probability.value) : std::nullopt)
           << ',' << cell(r.trigger ? std::optional(r.trigger->probability.se) : std::nullopt)
           << ',' << (ran ? std::to_string(r.trigger ? r.trigger->events : 0) : std::string{})
           << ',' << cell(r.degree_size_correlation) << ',' << cell(value(r.ratio)) << ','
           << cell(se(r.ratio)) << ',' << (r.error ? text_cell(*r.error) : std::string{}) << '\n';
    }
}

std::string to_csv(const SweepTable& table) {
    std::ostringstream os;
    write_csv(os, table);
    return os.str();
}

json to_json(const SweepTable& table) {
    json rows = json::array();
    for (const SweepRow& r : table) {
        auto value = [](const std::optional<Estimate>& e) {
            return e ? json(e->value) : json(nullptr);
        };
        auto se = [](const std::optional<Estimate>& e) { return e ? json(e->se) : json(nullptr); };
        rows.push_back({
            {"z", r.z},
            {"protocol", r.protocol},
            {"policy", r.policy},
            {"trials", r.trials},
            {"contagion_prob", value(r.contagion)},
            {"contagion_se", se(r.contagion)},
            {"cond_extent", value(r.extent)},
            {"cond_extent_se", se(r.extent)},
            {"n_contagion_events", r.contagion_events},
            {"realized_mean_degree", opt(r.mean_degree)},
            {"assortativity", opt(r.assortativity)},
            {"series", r.series},
            {"trigger_order_prob", r.trigger ? json(r.trigger->probability.value) : json(nullptr)},
            {"trigger_order_se", r.trigger ? json(r.trigger->probability.se) : json(nullptr)},
            {"trigger_order_events", r.trigger ? r.trigger->events : 0},
            {"degree_size_corr", opt(r.degree_size_correlation)},
            {"ratio", value(r.ratio)},
            {"ratio_se", se(r.ratio)},
            {"error", r.error ? json(*r.error) : json(nullptr)},
        });
    }
    return rows;
}

json to_json(const RunRecord& record) {
    return json{{"spec", record.spec},
                {"master_seed", record.master_seed},
                {"version", std::string(version)},
                {"started_at", record.started_at},
                {"duration_seconds", record.duration_seconds},
                {"warnings", record.warnings}};
}

std::string run_record_path(const std::string& out_path) {
    std::filesystem::path p(out_path);
    p.replace_extension(".run.json");
    return p.string();
}

SweepTable run_sweeps(const RunConfig& config, std::ostream* log) {
    std::vector<SweepTable> per_series;
    for (const ExperimentSpec& spec : config.series) {
        auto progress = [&](std::size_t, const GridResult& g) {
            if (!log) return;
            *log << "[" << spec.label << "] z=" << format_real(g.z);
            if (g.error) {
                *log << " FAILED: " << *g.error << '\n';
                return;
            }
            const auto p = contagion_probability(g.records, spec.threshold);
            *log << " trials=" << g.records.size() << " p=" << format_real(p.value) << '\n';
        };
        per_series.push_back(summarize(spec, run_trials(spec, config.threads, progress)));
    }
    for (const RatioPair& pair : config.ratios) {
        const auto ratios = policy_ratio(per_series.at(pair.targeted), per_series.at(pair.random));
        for (std::size_t i = 0; i < ratios.size(); ++i) per_series[pair.targeted][i].ratio = ratios[i];
    }
    SweepTable all;
    for (auto& t : per_series) all.insert(all.end(), t.begin(), t.end());
    return all;
}

ExecuteResult execute(const RunConfig& config, std::ostream& log) {
    ExecuteResult result;
    result.warnings = config.warnings;
    const std::string started = utc_now();
    const auto t0 = std::chrono::steady_clock::now();

    result.table = run_sweeps(config, &log);
    for (const SweepRow& r : result.table)
        if (r.error)
            result.warnings.push_back("series '" + r.series + "' z=" + format_real(r.z) +
                                      " failed: " + *r.error);

    RunRecord record;
    record.spec = to_json(config);
    record.master_seed = config.master_seed;
    record.started_at = started;
    record.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    record.warnings = result.warnings;

    try {
        const std::filesystem::path out(config.out_path);
        if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
        {
            std::ofstream os(config.out_path, std::ios::binary);
            if (!os) throw std::runtime_error("cannot open '" + config.out_path + "' for writing");
            if (config.format == OutputFormat::csv)
                write_csv(os, result.table);
            else
                os << to_json(result.table).dump(2) << '\n';
            if (!os.good()) throw std::runtime_error("failed writing '" + config.out_path + "'");
        }
        const std::string record_path = run_record_path(config.out_path);
        std::ofstream rs(record_path, std::ios::binary);
        if (!rs) throw std::runtime_error("cannot open '" + record_path + "' for writing");
        rs << to_json(record).dump(2) << '\n';
        if (!rs.good()) throw std::runtime_error("failed writing '" + record_path + "'");
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        result.status = exit_status::io_failure;
        return result;
    }

    for (const auto& w : result.warnings) log << "warning: " << w << '\n';
    const bool any_failed = std::any_of(result.table.begin(), result.table.end(),
                                        [](const SweepRow& r) { return r.error.has_value(); });
    result.status = any_failed ? exit_status::failed_points : exit_status::ok;
    return result;
}

}  // namespace contagion
