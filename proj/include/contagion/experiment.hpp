#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "contagion/balance.hpp"
#include "contagion/cascade.hpp"
#include "contagion/network.hpp"
#include "contagion/rng.hpp"

namespace contagion {

enum class NetworkFamily { erdos_renyi, scale_free, rewired_er };

struct NetworkSpec {
    NetworkFamily family = NetworkFamily::erdos_renyi;
    double gamma = 3.0;         // scale_free
    double coupling = 0.0;      // rewired_er, the J in H(G)
    std::uint32_t sweeps = 20;  // rewired_er, proposals per edge

    friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

enum class SeedProtocol { random, most_connected, biggest };

enum class PolicyKind { none, targeted, random_set };

struct Policy {
    PolicyKind kind = PolicyKind::none;
    TargetMode mode = TargetMode::top_degree;  // targeted only
    double fraction = 0.05;
    double buffer = 0.06;

    friend bool operator==(const Policy&, const Policy&) = default;
};

struct ExperimentSpec {
    std::string label;
    std::size_t n = 2000;
    std::size_t trials = 200;
    NetworkSpec network;
    SheetScheme sheets;
    SeedProtocol protocol = SeedProtocol::random;
    Policy policy;
    std::vector<double> z_grid;
    double threshold = 0.05;
    std::uint64_t master_seed = 0;

    // Throws std::invalid_argument describing the first bad field.
    void validate() const;

    friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

std::string_view to_string(NetworkFamily family);
std::string_view to_string(SeedProtocol protocol);
// "none", "targeted-degree", "targeted-assets" or "random"
std::string policy_name(const Policy& policy);

std::vector<double> make_grid(double lo, double hi, double step);

struct TrialRecord {
    double realized_mean_degree = 0.0;
    bank_id seed_bank = 0;
    std::size_t defaulted_count = 0;
    double fraction_defaulted = 0.0;
    bool contagion = false;  // fraction_defaulted > threshold
    // the bank of highest total degree (lowest index on ties)
    bank_id hub = 0;
    bool hub_defaulted = false;
    std::int32_t hub_order = CascadeOutcome::survived;
    std::optional<double> assortativity;
    std::optional<double> degree_size_correlation;

    friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct GridResult {
    double z = 0.0;
    std::vector<TrialRecord> records;
    std::optional<std::string> error;  // set when the grid point could not be run
};

bank_id most_connected_bank(const DirectedNetwork& net);
bank_id biggest_bank(const BalanceSheetSet& sheets);
bank_id pick_seed(const DirectedNetwork& net, const BalanceSheetSet& sheets,
                  SeedProtocol protocol, Rng& rng);

// Network and (policy-adjusted) sheets of one trial, reproducible from the
// trial coordinates alone.
struct TrialSetup {
    DirectedNetwork network;
    BalanceSheetSet sheets;
};
TrialSetup build_trial(const ExperimentSpec& spec, std::size_t grid_index, std::size_t trial);

TrialRecord run_trial(const ExperimentSpec& spec, std::size_t grid_index, std::size_t trial);

using ProgressFn = std::function<void(std::size_t grid_index, const GridResult&)>;

// Fresh network per trial. Grid points run in sequence, trials of a grid
// point are spread over `threads` workers; the result does not depend on
// the thread count.
std::vector<GridResult> run_trials(const ExperimentSpec& spec, unsigned threads = 1,
                                   const ProgressFn& progress = {});

struct Estimate {
    double value = 0.0;
    double se = 0.0;

    friend bool operator==(const Estimate&, const Estimate&) = default;
};

// Share of trials with more than `threshold` of banks down, binomial SE.
Estimate contagion_probability(std::span<const TrialRecord> records, double threshold);

// Mean defaulted fraction over trials with at least `threshold` down;
// nullopt when no trial qualifies.
std::optional<Estimate> conditional_extent(std::span<const TrialRecord> records, double threshold);

struct TriggerOrder {
    Estimate probability;
    std::size_t events = 0;
};

// Among trials where the hub failed without being the seed, the share in
// which it failed within the first `early` fraction of all defaulters.
std::optional<TriggerOrder> trigger_order_probability(std::span<const TrialRecord> records,
                                                      double early = 0.05);

// p / q with first-order propagated SE; nullopt when q is zero.
std::optional<Estimate> ratio_estimate(const Estimate& p, const Estimate& q);

struct SweepRow {
    std::string series;
    double z = 0.0;
    std::string protocol;
    std::string policy;
    std::size_t trials = 0;
    std::optional<Estimate> contagion;
    std::optional<Estimate> extent;
    std::size_t contagion_events = 0;
    std::optional<double> mean_degree;
    std::optional<double> assortativity;
    std::optional<TriggerOrder> trigger;
    std::optional<double> degree_size_correlation;
    std::optional<Estimate> ratio;  // filled on the targeted rows of a ratio pair
    std::optional<std::string> error;
};

using SweepTable = std::vector<SweepRow>;

SweepTable summarize(const ExperimentSpec& spec, std::span<const GridResult> grid);

// Throws std::invalid_argument unless the two specs differ only in policy.
void require_policy_pair(const ExperimentSpec& targeted, const ExperimentSpec& random);

// Per grid point p_targeted / p_random. Rows are matched by position.
std::vector<std::optional<Estimate>> policy_ratio(const SweepTable& targeted,
                                                  const SweepTable& random);
std::vector<std::optional<Estimate>> policy_ratio(const ExperimentSpec& targeted,
                                                  const ExperimentSpec& random,
                                                  unsigned threads = 1);

// Pearson correlation; nullopt when either side has no variance.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

}  // namespace contagion
