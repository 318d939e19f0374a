#include "contagion/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

namespace contagion {

using nlohmann::json;

int ConfigError::exit_code() const {
    switch (kind_) {
        case Kind::usage: return exit_status::usage;
        case Kind::unknown_preset: return exit_status::unknown_preset;
        case Kind::malformed_file: return exit_status::malformed_file;
        case Kind::out_of_range: return exit_status::out_of_range;
    }
    return exit_status::usage;
}

namespace {

ConfigError range_error(const std::string& what) {
    return ConfigError(ConfigError::Kind::out_of_range, what);
}

ExperimentSpec base_spec(std::string label, std::size_t n, std::size_t trials) {
    ExperimentSpec s;
    s.label = std::move(label);
    s.n = n;
    s.trials = trials;
    s.z_grid = make_grid(0.5, 12.0, 0.5);
    return s;
}

ExperimentSpec er(std::size_t n, std::size_t trials, std::string label = "er") {
    return base_spec(std::move(label), n, trials);
}

ExperimentSpec sf(std::size_t n, std::size_t trials, std::string label = "sf") {
    auto s = base_spec(std::move(label), n, trials);
    s.network.family = NetworkFamily::scale_free;
    s.network.gamma = 3.0;
    return s;
}

ExperimentSpec rewired(std::size_t n, std::size_t trials, double coupling, std::string label) {
    auto s = base_spec(std::move(label), n, trials);
    s.network.family = NetworkFamily::rewired_er;
    s.network.coupling = coupling;
    return s;
}

ExperimentSpec with_powerlaw(ExperimentSpec s) {
    s.sheets.variant = SheetVariant::power_law;
    s.sheets.size_exponent = 2.5;
    return s;
}

ExperimentSpec with_protocol(ExperimentSpec s, SeedProtocol p) {
    s.protocol = p;
    return s;
}

ExperimentSpec with_policy(ExperimentSpec s, PolicyKind kind, TargetMode mode) {
    s.policy = Policy{kind, mode, 0.05, 0.06};
    return s;
}

template <class T>
T enum_from(std::string_view s, std::initializer_list<std::pair<std::string_view, T>> table,
            const char* what) {
    for (const auto& [name, value] : table)
        if (name == s) return value;
    throw range_error(std::string("unknown ") + what + " '" + std::string(s) + "'");
}

NetworkFamily family_from(std::string_view s) {
    return enum_from<NetworkFamily>(s,
                                    {{"er", NetworkFamily::erdos_renyi},
                                     {"sf", NetworkFamily::scale_free},
                                     {"er-rewired", NetworkFamily::rewired_er}},
                                    "network family");
}

SheetVariant variant_from(std::string_view s) {
    return enum_from<SheetVariant>(
        s, {{"uniform", SheetVariant::uniform}, {"power-law", SheetVariant::power_law}},
        "sheet scheme");
}

std::string_view to_string(SheetVariant v) {
    return v == SheetVariant::uniform ? "uniform" : "power-law";
}

PolicyKind kind_from(std::string_view s) {
    return enum_from<PolicyKind>(s,
                                 {{"none", PolicyKind::none},
                                  {"targeted", PolicyKind::targeted},
                                  {"random-set", PolicyKind::random_set}},
                                 "policy kind");
}

std::string_view to_string(PolicyKind k) {
    switch (k) {
        case PolicyKind::none: return "none";
        case PolicyKind::targeted: return "targeted";
        case PolicyKind::random_set: return "random-set";
    }
    return "?";
}

TargetMode mode_from(std::string_view s) {
    return enum_from<TargetMode>(s,
                                 {{"top-degree", TargetMode::top_degree},
                                  {"top-assets", TargetMode::top_assets},
                                  {"random", TargetMode::random}},
                                 "target mode");
}

OutputFormat format_from(std::string_view s) {
    return enum_from<OutputFormat>(s, {{"csv", OutputFormat::csv}, {"json", OutputFormat::json}},
                                   "output format");
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

Policy policy_from_name(std::string_view s) {
    if (s == "none") return Policy{};
    if (s == "targeted-degree") return Policy{PolicyKind::targeted, TargetMode::top_degree};
    if (s == "targeted-assets") return Policy{PolicyKind::targeted, TargetMode::top_assets};
    if (s == "random") return Policy{PolicyKind::random_set, TargetMode::random};
    throw range_error("unknown policy '" + std::string(s) +
                      "' (expected none, targeted-degree, targeted-assets or random)");
}

const std::vector<std::string> override_keys = {
    "nodes",         "trials",          "gamma",          "alpha",
    "coupling_J",    "rewire_sweeps",   "protocol",       "policy",
    "policy_fraction", "policy_buffer", "z_grid",         "threshold"};

const std::vector<std::string> file_keys = {"preset", "series", "ratios", "out",
                                            "format", "threads", "seed"};

Overrides overrides_from_json(const json& j) {
    Overrides o;
    if (j.contains("nodes")) o.nodes = j.at("nodes").get<std::size_t>();
    if (j.contains("trials")) o.trials = j.at("trials").get<std::size_t>();
    if (j.contains("gamma")) o.gamma = j.at("gamma").get<double>();
    if (j.contains("alpha")) o.alpha = j.at("alpha").get<double>();
    if (j.contains("coupling_J")) o.coupling = j.at("coupling_J").get<double>();
    if (j.contains("rewire_sweeps")) o.sweeps = j.at("rewire_sweeps").get<std::uint32_t>();
    if (j.contains("protocol")) o.protocol = parse_protocol(j.at("protocol").get<std::string>());
    if (j.contains("policy")) o.policy = j.at("policy").get<std::string>();
    if (j.contains("policy_fraction")) o.policy_fraction = j.at("policy_fraction").get<double>();
    if (j.contains("policy_buffer")) o.policy_buffer = j.at("policy_buffer").get<double>();
    if (j.contains("z_grid")) {
        const auto& g = j.at("z_grid");
        o.z_grid = g.is_string() ? parse_grid(g.get<std::string>()) : g.get<std::vector<double>>();
    }
    if (j.contains("threshold")) o.threshold = j.at("threshold").get<double>();
    return o;
}

json load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is)
        throw ConfigError(ConfigError::Kind::malformed_file, "cannot read config file '" + path + "'");
    try {
        return json::parse(is);
    } catch (const json::exception& e) {
        throw ConfigError(ConfigError::Kind::malformed_file,
                          "config file '" + path + "' is not valid JSON: " + e.what());
    }
}

}  // namespace

SeedProtocol parse_protocol(std::string_view s) {
    return enum_from<SeedProtocol>(s,
                                   {{"random", SeedProtocol::random},
                                    {"most-connected", SeedProtocol::most_connected},
                                    {"biggest", SeedProtocol::biggest}},
                                   "seed protocol");
}

std::vector<double> parse_grid(std::string_view spec) {
    double v[3];
    std::size_t start = 0;
    for (int i = 0; i < 3; ++i) {
        const std::size_t stop = i < 2 ? spec.find(':', start) : spec.size();
        if (stop == std::string_view::npos) throw range_error("degree grid must be min:max:step");
        const std::string part(spec.substr(start, stop - start));
        char* end = nullptr;
        v[i] = std::strtod(part.c_str(), &end);
        if (part.empty() || end != part.c_str() + part.size())
            throw range_error("degree grid must be min:max:step, got '" + std::string(spec) + "'");
        start = stop + 1;
    }
    try {
        return make_grid(v[0], v[1], v[2]);
    } catch (const std::invalid_argument& e) {
        throw range_error(e.what());
    }
}

std::vector<std::string> preset_names() {
    return {"fig1", "fig2", "fig2b", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"};
}

RunConfig expand_preset(std::string_view name) {
    using P = SeedProtocol;
    RunConfig c;
    c.preset = std::string(name);
    if (name == "fig1") {
        c.series = {er(10000, 1000)};
    } else if (name == "fig2") {
        c.series = {er(10000, 1000), sf(10000, 1000)};
    } else if (name == "fig2b") {
        c.series = {er(10000, 1000), sf(10000, 1000),
                    with_protocol(sf(10000, 1000, "sf-hub"), P::most_connected)};
    } else if (name == "fig3") {
        c.series = {with_policy(sf(10000, 1000, "sf-targeted-degree"), PolicyKind::targeted,
                                TargetMode::top_degree),
                    with_policy(sf(10000, 1000, "sf-random-set"), PolicyKind::random_set,
                                TargetMode::random)};
        c.ratios = {{0, 1}};
    } else if (name == "fig4") {
        c.series = {sf(1000, 1000)};
    } else if (name == "fig5") {
        c.series = {er(1000, 1000, "er-uniform"), with_powerlaw(er(1000, 1000, "er-powerlaw")),
                    with_protocol(with_powerlaw(er(1000, 1000, "er-powerlaw-biggest")), P::biggest)};
    } else if (name == "fig6") {
        c.series = {with_policy(with_powerlaw(er(1000, 10000, "er-powerlaw-targeted-assets")),
                                PolicyKind::targeted, TargetMode::top_assets),
                    with_policy(with_powerlaw(er(1000, 10000, "er-powerlaw-random-set")),
                                PolicyKind::random_set, TargetMode::random)};
        c.ratios = {{0, 1}};
    } else if (name == "fig7") {
        c.series = {
            with_protocol(with_powerlaw(sf(1000, 10000, "sf-powerlaw-most-connected")),
                          P::most_connected),
            with_protocol(with_powerlaw(sf(1000, 10000, "sf-powerlaw-biggest")), P::biggest)};
    } else if (name == "fig8") {
        c.series = {rewired(10000, 1000, 0.0, "er-J0"), rewired(10000, 1000, -1.0, "er-J-1")};
    } else if (name == "fig9") {
        c.series = {rewired(10000, 1000, 0.0, "er-J0"), rewired(10000, 1000, -1.0, "er-J-1"),
                    rewired(10000, 1000, 1.0, "er-J+1")};
    } else {
        std::string known;
        for (const auto& p : preset_names()) known += (known.empty() ? "" : ", ") + p;
        throw ConfigError(ConfigError::Kind::unknown_preset,
                          "unknown preset '" + std::string(name) + "' (known: " + known + ")");
    }
    return c;
}

void apply_overrides(RunConfig& config, const Overrides& o) {
    std::optional<Policy> policy;
    if (o.policy) policy = policy_from_name(*o.policy);
    for (ExperimentSpec& s : config.series) {
        if (o.nodes) s.n = *o.nodes;
        if (o.trials) s.trials = *o.trials;
        if (o.gamma) s.network.gamma = *o.gamma;
        if (o.alpha) s.sheets.size_exponent = *o.alpha;
        if (o.coupling && s.network.family == NetworkFamily::rewired_er)
            s.network.coupling = *o.coupling;
        if (o.sweeps) s.network.sweeps = *o.sweeps;
        if (o.protocol) s.protocol = *o.protocol;
        if (policy) {
            s.policy.kind = policy->kind;
            s.policy.mode = policy->mode;
        }
        if (o.policy_fraction) s.policy.fraction = *o.policy_fraction;
        if (o.policy_buffer) s.policy.buffer = *o.policy_buffer;
        if (o.z_grid) s.z_grid = *o.z_grid;
        if (o.threshold) s.threshold = *o.threshold;
    }
}

json to_json(const ExperimentSpec& s) {
    return json{
        {"label", s.label},
        {"nodes", s.n},
        {"trials", s.trials},
        {"network",
         {{"family", to_string(s.network.family)},
          {"gamma", s.network.gamma},
          {"coupling_J", s.network.coupling},
          {"rewire_sweeps", s.network.sweeps}}},
        {"sheets",
         {{"variant", to_string(s.sheets.variant)},
          {"interbank_fraction", s.sheets.interbank_fraction},
          {"buffer_fraction", s.sheets.buffer_fraction},
          {"alpha", s.sheets.size_exponent}}},
        {"protocol", to_string(s.protocol)},
        {"policy",
         {{"kind", to_string(s.policy.kind)},
          {"mode", to_string(s.policy.mode)},
          {"fraction", s.policy.fraction},
          {"buffer", s.policy.buffer}}},
        {"z_grid", s.z_grid},
        {"threshold", s.threshold},
        {"master_seed", s.master_seed},
    };
}

ExperimentSpec spec_from_json(const json& j) {
    ExperimentSpec s;
    s.label = j.value("label", std::string{});
    s.n = j.at("nodes").get<std::size_t>();
    s.trials = j.at("trials").get<std::size_t>();
    const json& net = j.at("network");
    s.network.family = family_from(net.at("family").get<std::string>());
    s.network.gamma = net.value("gamma", s.network.gamma);
    s.network.coupling = net.value("coupling_J", s.network.coupling);
    s.network.sweeps = net.value("rewire_sweeps", s.network.sweeps);
    const json& sh = j.at("sheets");
    s.sheets.variant = variant_from(sh.at("variant").get<std::string>());
    s.sheets.interbank_fraction = sh.value("interbank_fraction", s.sheets.interbank_fraction);
    s.sheets.buffer_fraction = sh.value("buffer_fraction", s.sheets.buffer_fraction);
    s.sheets.size_exponent = sh.value("alpha", s.sheets.size_exponent);
    s.protocol = parse_protocol(j.at("protocol").get<std::string>());
    if (j.contains("policy")) {
        const json& p = j.at("policy");
        s.policy.kind = kind_from(p.at("kind").get<std::string>());
        s.policy.mode = mode_from(p.value("mode", std::string("top-degree")));
        s.policy.fraction = p.value("fraction", s.policy.fraction);
        s.policy.buffer = p.value("buffer", s.policy.buffer);
    }
    const json& g = j.at("z_grid");
    s.z_grid = g.is_string() ? parse_grid(g.get<std::string>()) : g.get<std::vector<double>>();
    s.threshold = j.value("threshold", s.threshold);
    s.master_seed = j.value("master_seed", std::uint64_t{0});
    return s;
}

json to_json(const RunConfig& c) {
    json series = json::array();
    for (const auto& s : c.series) series.push_back(to_json(s));
    json ratios = json::array();
    for (const auto& r : c.ratios) ratios.push_back({{"targeted", r.targeted}, {"random", r.random}});
    json j{{"series", series}, {"ratios", ratios},          {"out", c.out_path},
           {"format", to_string(c.format)},                 {"threads", c.threads},
           {"seed", c.master_seed}};
    j["preset"] = c.preset ? json(*c.preset) : json(nullptr);
    return j;
}

std::string default_output_path(const RunConfig& config) {
    std::string dir = ".";
    if (const char* env = std::getenv("CONTAGION_OUTPUT_DIR"); env && *env) dir = env;
    const std::string name = config.preset.value_or("sweep");
    return dir + "/" + name + "." + std::string(to_string(config.format));
}

RunConfig resolve_config(const json& file, const CommandLine& cl) {
    if (!file.is_object())
        throw ConfigError(ConfigError::Kind::malformed_file, "config file must hold a JSON object");
    for (const auto& [key, value] : file.items()) {
        const bool known = std::find(file_keys.begin(), file_keys.end(), key) != file_keys.end() ||
                           std::find(override_keys.begin(), override_keys.end(), key) !=
                               override_keys.end();
        if (!known)
            throw ConfigError(ConfigError::Kind::malformed_file,
                              "unknown key '" + key + "' in config file");
    }

    RunConfig c;
    Overrides file_overrides;
    std::optional<std::uint64_t> file_seed;
    std::optional<std::string> file_out, file_format;
    std::optional<unsigned> file_threads;
    try {
        file_overrides = overrides_from_json(file);
        const std::optional<std::string> file_preset =
            file.contains("preset") && !file.at("preset").is_null()
                ? std::optional(file.at("preset").get<std::string>())
                : std::nullopt;
        if (cl.preset) {
            c = expand_preset(*cl.preset);
        } else if (file.contains("series")) {
            c.preset = file_preset;
            for (const auto& s : file.at("series")) c.series.push_back(spec_from_json(s));
            if (file.contains("ratios"))
                for (const auto& r : file.at("ratios"))
                    c.ratios.push_back({r.at("targeted").get<std::size_t>(),
                                        r.at("random").get<std::size_t>()});
        } else if (file_preset) {
            c = expand_preset(*file_preset);
        } else {
            c.series = {er(2000, 200)};
        }
        if (file.contains("seed")) file_seed = file.at("seed").get<std::uint64_t>();
        if (file.contains("out")) file_out = file.at("out").get<std::string>();
        if (file.contains("format")) file_format = file.at("format").get<std::string>();
        if (file.contains("threads")) file_threads = file.at("threads").get<unsigned>();
    } catch (const json::exception& e) {
        throw ConfigError(ConfigError::Kind::malformed_file,
                          std::string("config file has a bad value: ") + e.what());
    }

    apply_overrides(c, file_overrides);
    apply_overrides(c, cl.overrides);

    if (auto f = cl.format ? cl.format : file_format) c.format = format_from(*f);
    c.threads = cl.threads.value_or(
        file_threads.value_or(std::max(1u, std::thread::hardware_concurrency())));
    if (c.threads == 0) throw range_error("threads must be at least 1");

    if (cl.seed) {
        c.master_seed = *cl.seed;
    } else if (file_seed) {
        c.master_seed = *file_seed;
    } else {
        std::random_device rd;
        c.master_seed = (std::uint64_t(rd()) << 32) ^ rd();
        c.warnings.push_back("no master seed given; generated " + std::to_string(c.master_seed));
    }
    for (auto& s : c.series) s.master_seed = c.master_seed;

    c.out_path = cl.out ? *cl.out : file_out && !file_out->empty() ? *file_out : default_output_path(c);

    if (c.series.empty()) throw range_error("configuration has no series");
    for (const auto& s : c.series) {
        try {
            s.validate();
        } catch (const std::invalid_argument& e) {
            throw range_error("series '" + s.label + "': " + e.what());
        }
    }
    for (const auto& r : c.ratios) {
        if (r.targeted >= c.series.size() || r.random >= c.series.size())
            throw range_error("ratio pair refers to a missing series");
        try {
            require_policy_pair(c.series[r.targeted], c.series[r.random]);
        } catch (const std::invalid_argument& e) {
            throw range_error(e.what());
        }
    }
    return c;
}

RunConfig resolve_config(const CommandLine& cl) {
    const json file = cl.config_file ? load_config_file(*cl.config_file) : json::object();
    return resolve_config(file, cl);
}

CommandLine parse_command_line(const std::vector<std::string>& args) {
    CommandLine cl;
    Overrides& o = cl.overrides;
    CLI::App app{"Monte Carlo default cascades on interbank networks", "contagion"};
    std::string protocol, grid;

    app.add_option("--preset", cl.preset, "figure experiment (fig1 ... fig9, fig2b)");
    app.add_option("--config", cl.config_file, "JSON configuration file");
    app.add_option("--nodes", o.nodes, "banks per network");
    app.add_option("--trials", o.trials, "networks per grid point");
    app.add_option("--gamma", o.gamma, "degree tail exponent of scale-free networks");
    app.add_option("--alpha", o.alpha, "asset size tail exponent");
    app.add_option("--coupling-J", o.coupling, "rewiring coupling J");
    app.add_option("--rewire-sweeps", o.sweeps, "rewiring proposals per edge");
    auto* protocol_opt =
        app.add_option("--protocol", protocol, "initial failure: random|most-connected|biggest");
    app.add_option("--policy", o.policy, "none|targeted-degree|targeted-assets|random");
    app.add_option("--policy-fraction", o.policy_fraction, "share of banks with a raised buffer");
    app.add_option("--policy-buffer", o.policy_buffer, "raised capital buffer fraction");
    auto* grid_opt = app.add_option("--z-grid", grid, "average degrees as min:max:step");
    app.add_option("--threshold", o.threshold, "defaulted fraction that counts as contagion");
    app.add_option("--seed", cl.seed, "master seed");
    app.add_option("--threads", cl.threads, "worker threads");
    app.add_option("--out", cl.out, "output file (default $CONTAGION_OUTPUT_DIR/<preset>.<fmt>)");
    app.add_option("--format", cl.format, "csv|json");
    app.add_option("--export-network", cl.export_network,
                   "write the edge list of the first trial network and exit");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::ParseError& e) {
        throw ConfigError(ConfigError::Kind::usage, e.what());
    }
    if (protocol_opt->count() > 0) o.protocol = parse_protocol(protocol);
    if (grid_opt->count() > 0) o.z_grid = parse_grid(grid);
    return cl;
}

RunConfig parse_config(const std::vector<std::string>& args) {
    return resolve_config(parse_command_line(args));
}

}  // namespace contagion
