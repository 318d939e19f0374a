#include <iostream>
#include <string>
#include <vector>

#include "contagion/config.hpp"
#include "contagion/experiment.hpp"
#include "contagion/output.hpp"

using namespace contagion;

namespace {

int export_network(const RunConfig& config, const std::string& path) {
    const TrialSetup setup = build_trial(config.series.front(), 0, 0);
    write_edge_list(path, setup.network);
    std::cerr << "wrote " << setup.network.edge_count() << " edges of series '"
              << config.series.front().label << "' at z=" << format_real(config.series.front().z_grid[0])
              << " to " << path << '\n';
    return exit_status::ok;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    try {
        const CommandLine cl = parse_command_line(args);
        const RunConfig config = resolve_config(cl);
        std::cerr << "master seed: " << config.master_seed << '\n';
        if (cl.export_network) return export_network(config, *cl.export_network);

        const ExecuteResult result = execute(config, std::cerr);
        if (result.status == exit_status::ok || result.status == exit_status::failed_points)
            std::cerr << "wrote " << config.out_path << " and " << run_record_path(config.out_path)
                      << '\n';
        return result.status;
    } catch (const HelpRequested& help) {
        std::cout << help.what();
        return exit_status::ok;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_status::io_failure;
    }
}
