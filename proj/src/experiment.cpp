#include "contagion/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "contagion/netgen.hpp"

namespace contagion {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

}  // namespace

void ExperimentSpec::validate() const {
    require(n >= 2, "nodes must be at least 2");
    require(trials >= 1, "trials must be at least 1");
    require(threshold > 0.0 && threshold < 1.0, "threshold must lie in (0, 1)");
    require(!z_grid.empty(), "degree grid is empty");
    sheets.validate();
    for (double z : z_grid) {
        require(std::isfinite(z) && z >= 0.0, "grid degrees must be non-negative");
        if (network.family == NetworkFamily::scale_free)
            require(z > 0.0, "scale-free grid degrees must be positive");
        else
            require(z <= double(n - 1), "grid degree exceeds n - 1");
    }
    if (network.family == NetworkFamily::scale_free)
        require(network.gamma > 2.0, "gamma must exceed 2");
    if (network.family == NetworkFamily::rewired_er) {
        require(std::isfinite(network.coupling), "coupling J must be finite");
        require(network.sweeps >= 1, "rewire sweeps must be at least 1");
    }
    if (policy.kind != PolicyKind::none) {
        require(policy.fraction > 0.0 && policy.fraction <= 1.0,
                "policy fraction must lie in (0, 1]");
        require(policy.buffer > sheets.buffer_fraction,
                "policy buffer must exceed the baseline buffer fraction");
    }
    if (policy.kind == PolicyKind::targeted)
        require(policy.mode != TargetMode::random, "targeted policy needs a ranking mode");
}

std::string_view to_string(NetworkFamily family) {
    switch (family) {
        case NetworkFamily::erdos_renyi: return "er";
        case NetworkFamily::scale_free: return "sf";
        case NetworkFamily::rewired_er: return "er-rewired";
    }
    return "?";
}

std::string_view to_string(SeedProtocol protocol) {
    switch (protocol) {
        case SeedProtocol::random: return "random";
        case SeedProtocol::most_connected: return "most-connected";
        case SeedProtocol::biggest: return "biggest";
    }
    return "?";
}

std::string policy_name(const Policy& policy) {
    switch (policy.kind) {
        case PolicyKind::none: return "none";
        case PolicyKind::random_set: return "random";
        case PolicyKind::targeted:
            return policy.mode == TargetMode::top_assets ? "targeted-assets" : "targeted-degree";
    }
    return "?";
}

std::vector<double> make_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi))
        throw std::invalid_argument("degree grid needs min <= max and step > 0");
    std::vector<double> grid;
    for (std::size_t i = 0;; ++i) {
        const double z = std::round((lo + double(i) * step) * 1e9) / 1e9;
        if (z > hi + 1e-9) break;
        grid.push_back(z);
    }
    return grid;
}

bank_id most_connected_bank(const DirectedNetwork& net) {
    bank_id best = 0;
    for (bank_id i = 1; i < net.size(); ++i)
        if (net.total_degree(i) > net.total_degree(best)) best = i;
    return best;
}

bank_id biggest_bank(const BalanceSheetSet& sheets) {
    const auto& ta = sheets.total_assets;
    return static_cast<bank_id>(std::max_element(ta.begin(), ta.end()) - ta.begin());
}

bank_id pick_seed(const DirectedNetwork& net, const BalanceSheetSet& sheets,
                  SeedProtocol protocol, Rng& rng) {
    switch (protocol) {
        case SeedProtocol::random: {
            std::uniform_int_distribution<bank_id> pick(0, static_cast<bank_id>(net.size() - 1));
            return pick(rng);
        }
        case SeedProtocol::most_connected: return most_connected_bank(net);
        case SeedProtocol::biggest: return biggest_bank(sheets);
    }
    throw std::invalid_argument("unknown seed protocol");
}

TrialSetup build_trial(const ExperimentSpec& spec, std::size_t grid_index, std::size_t trial) {
    const double z = spec.z_grid.at(grid_index);
    auto stream = [&](StreamPurpose p) {
        return derive_stream(spec.master_seed, grid_index, trial, p);
    };

    Rng net_rng = stream(StreamPurpose::network);
    DirectedNetwork net;
    switch (spec.network.family) {
        case NetworkFamily::erdos_renyi: net = gen_erdos_renyi(spec.n, z, net_rng); break;
        case NetworkFamily::scale_free:
            net = gen_scale_free(spec.n, spec.network.gamma, z, net_rng);
            break;
        case NetworkFamily::rewired_er:
            net = gen_erdos_renyi(spec.n, z, net_rng);
            if (net.edge_count() >= 2)
                net = rewire_assortativity(net, spec.network.coupling, spec.network.sweeps, net_rng)
                          .network;
            break;
    }

    Rng sheet_rng = stream(StreamPurpose::sheets);
    BalanceSheetSet sheets = spec.sheets.variant == SheetVariant::uniform
                                 ? assign_uniform(net, spec.sheets)
                                 : assign_powerlaw(net, spec.sheets, sheet_rng);

    if (spec.policy.kind != PolicyKind::none) {
        Rng policy_rng = stream(StreamPurpose::policy);
        const TargetMode mode =
            spec.policy.kind == PolicyKind::random_set ? TargetMode::random : spec.policy.mode;
        const auto targets = select_targets(net, sheets, mode, spec.policy.fraction, policy_rng);
        sheets = apply_policy(sheets, targets, spec.policy.buffer);
    }
    return {std::move(net), std::move(sheets)};
}

TrialRecord run_trial(const ExperimentSpec& spec, std::size_t grid_index, std::size_t trial) {
    const TrialSetup setup = build_trial(spec, grid_index, trial);
    const DirectedNetwork& net = setup.network;

    Rng seed_rng = derive_stream(spec.master_seed, grid_index, trial, StreamPurpose::seed_bank);
    const bank_id seed = pick_seed(net, setup.sheets, spec.protocol, seed_rng);
    const CascadeOutcome outcome = run_cascade(net, setup.sheets, seed);

    TrialRecord r;
    r.realized_mean_degree = net.mean_degree();
    r.seed_bank = seed;
    r.defaulted_count = outcome.defaulted_count;
    r.fraction_defaulted = outcome.fraction_defaulted;
    r.contagion = outcome.fraction_defaulted > spec.threshold;
    r.hub = most_connected_bank(net);
    r.hub_defaulted = outcome.defaulted[r.hub] != 0;
    r.hub_order = outcome.order[r.hub];
    if (net.edge_count() >= 2) r.assortativity = degree_assortativity(net);
    if (spec.sheets.variant == SheetVariant::power_law) {
        std::vector<double> degree(net.size());
        for (bank_id i = 0; i < net.size(); ++i) degree[i] = net.total_degree(i);
        r.degree_size_correlation = pearson(degree, setup.sheets.total_assets);
    }
    return r;
}

std::vector<GridResult> run_trials(const ExperimentSpec& spec, unsigned threads,
                                   const ProgressFn& progress) {
    spec.validate();
    threads = std::max(1u, threads);

    std::vector<GridResult> results(spec.z_grid.size());
    for (std::size_t g = 0; g < spec.z_grid.size(); ++g) {
        GridResult& out = results[g];
        out.z = spec.z_grid[g];
        out.records.resize(spec.trials);
        std::vector<std::optional<std::string>> failures(spec.trials);

        std::atomic<std::size_t> next{0};
        auto work = [&] {
            for (std::size_t t = next++; t < spec.trials; t = next++) {
                try {
                    out.records[t] = run_trial(spec, g, t);
                } catch (const std::exception& e) {
                    failures[t] = e.what();
                }
            }
        };
        if (threads == 1) {
            work();
        } else {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < std::min<std::size_t>(threads, spec.trials); ++w)
                pool.emplace_back(work);
        }

        auto failed = std::find_if(failures.begin(), failures.end(),
                                   [](const auto& f) { return f.has_value(); });
        if (failed != failures.end()) {
            out.error = **failed;
            out.records.clear();
        }
        if (progress) progress(g, out);
    }
    return results;
}

Estimate contagion_probability(std::span<const TrialRecord> records, double threshold) {
    if (records.empty()) throw std::invalid_argument("no trial records");
    const auto hits = std::count_if(records.begin(), records.end(), [&](const TrialRecord& r) {
        return r.fraction_defaulted > threshold;
    });
    const double m = double(records.size());
    const double p = double(hits) / m;
    return {p, std::sqrt(p * (1.0 - p) / m)};
}

std::optional<Estimate> conditional_extent(std::span<const TrialRecord> records, double threshold) {
    if (records.empty()) throw std::invalid_argument("no trial records");
    std::vector<double> hit;
    for (const TrialRecord& r : records)
        if (r.fraction_defaulted >= threshold) hit.push_back(r.fraction_defaulted);
    if (hit.empty()) return std::nullopt;
    const double mean = mean_of(hit);
    if (hit.size() == 1) return Estimate{mean, 0.0};
    double ss = 0.0;
    for (double f : hit) ss += (f - mean) * (f - mean);
    const double m = double(hit.size());
    return Estimate{mean, std::sqrt(ss / (m - 1.0) / m)};
}

std::optional<TriggerOrder> trigger_order_probability(std::span<const TrialRecord> records,
                                                      double early) {
    std::size_t events = 0, early_hits = 0;
    for (const TrialRecord& r : records) {
        if (!r.hub_defaulted || r.hub == r.seed_bank) continue;
        ++events;
        if (double(r.hub_order) < early * double(r.defaulted_count)) ++early_hits;
    }
    if (events == 0) return std::nullopt;
    const double p = double(early_hits) / double(events);
    return TriggerOrder{{p, std::sqrt(p * (1.0 - p) / double(events))}, events};
}

std::optional<Estimate> ratio_estimate(const Estimate& p, const Estimate& q) {
    if (q.value == 0.0) return std::nullopt;
    const double r = p.value / q.value;
    if (p.value == 0.0) return Estimate{0.0, p.se / q.value};
    const double rel = std::hypot(p.se / p.value, q.se / q.value);
    return Estimate{r, r * rel};
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) return std::nullopt;
    const double n = double(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

SweepTable summarize(const ExperimentSpec& spec, std::span<const GridResult> grid) {
    SweepTable table;
    for (const GridResult& g : grid) {
        SweepRow row;
        row.series = spec.label;
        row.z = g.z;
        row.protocol = std::string(to_string(spec.protocol));
        row.policy = policy_name(spec.policy);
        row.error = g.error;
        if (g.error || g.records.empty()) {
            table.push_back(std::move(row));
            continue;
        }
        const auto& recs = g.records;
        row.trials = recs.size();
        row.contagion = contagion_probability(recs, spec.threshold);
        row.extent = conditional_extent(recs, spec.threshold);
        row.contagion_events = std::size_t(std::count_if(
            recs.begin(), recs.end(), [](const TrialRecord& r) { return r.contagion; }));

        std::vector<double> degree, assort, corr;
        for (const TrialRecord& r : recs) {
            degree.push_back(r.realized_mean_degree);
            if (r.assortativity) assort.push_back(*r.assortativity);
            if (r.degree_size_correlation) corr.push_back(*r.degree_size_correlation);
        }
        row.mean_degree = mean_of(degree);
        if (!assort.empty()) row.assortativity = mean_of(assort);
        if (!corr.empty()) row.degree_size_correlation = mean_of(corr);
        row.trigger = trigger_order_probability(recs);
        table.push_back(std::move(row));
    }
    return table;
}

void require_policy_pair(const ExperimentSpec& targeted, const ExperimentSpec& random) {
    ExperimentSpec a = targeted, b = random;
    a.policy = b.policy = Policy{};
    a.label = b.label = "";
    if (!(a == b)) throw std::invalid_argument("policy ratio needs specs that differ only in policy");
}

std::vector<std::optional<Estimate>> policy_ratio(const SweepTable& targeted,
                                                  const SweepTable& random) {
    if (targeted.size() != random.size())
        throw std::invalid_argument("policy ratio needs tables over the same grid");
    std::vector<std::optional<Estimate>> out(targeted.size());
    for (std::size_t i = 0; i < targeted.size(); ++i) {
        if (targeted[i].z != random[i].z)
            throw std::invalid_argument("policy ratio needs tables over the same grid");
        if (targeted[i].contagion && random[i].contagion)
            out[i] = ratio_estimate(*targeted[i].contagion, *random[i].contagion);
    }
    return out;
}

std::vector<std::optional<Estimate>> policy_ratio(const ExperimentSpec& targeted,
                                                  const ExperimentSpec& random, unsigned threads) {
    require_policy_pair(targeted, random);
    const auto t = summarize(targeted, run_trials(targeted, threads));
    const auto r = summarize(random, run_trials(random, threads));
    return policy_ratio(t, r);
}

}  // namespace contagion
