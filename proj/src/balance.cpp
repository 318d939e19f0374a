#include "contagion/balance.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numeric>
#include <stdexcept>

namespace contagion {

void SheetScheme::validate() const {
    if (!(buffer_fraction > 0.0))
        throw std::invalid_argument("capital buffer fraction must be positive");
    if (!(buffer_fraction < interbank_fraction))
        throw std::invalid_argument("capital buffer fraction must be below the interbank fraction");
    if (!(interbank_fraction <= 1.0))
        throw std::invalid_argument("interbank fraction cannot exceed 1");
    if (variant == SheetVariant::power_law && !(size_exponent > 2.0))
        throw std::invalid_argument("asset size exponent must exceed 2");
}

std::vector<double> interbank_liabilities(const DirectedNetwork& net,
                                          const BalanceSheetSet& sheets) {
    std::vector<double> owed(net.size(), 0.0);
    for (std::size_t id = 0; id < net.edge_count(); ++id)
        owed[net.edge(id).debtor] += sheets.exposure[id];
    return owed;
}

BalanceSheetSet assign_with_sizes(const DirectedNetwork& net, const SheetScheme& scheme,
                                  std::vector<double> total_assets) {
    scheme.validate();
    const std::size_t n = net.size();
    if (total_assets.size() != n) throw std::invalid_argument("one size per bank required");

    BalanceSheetSet s;
    s.scheme = scheme;
    s.total_assets = std::move(total_assets);
    s.interbank_assets.assign(n, 0.0);
    s.illiquid_assets.assign(n, 0.0);
    s.capital.assign(n, 0.0);
    s.exposure.assign(net.edge_count(), 0.0);

    for (bank_id c = 0; c < n; ++c) {
        const double ta = s.total_assets[c];
        if (!(ta > 0.0)) throw std::invalid_argument("total assets must be positive");
        s.capital[c] = scheme.buffer_fraction * ta;

        const auto in = net.in_edges(c);
        if (in.empty()) {
            s.illiquid_assets[c] = ta;
            continue;
        }
        const double aib = scheme.interbank_fraction * ta;
        s.interbank_assets[c] = aib;
        s.illiquid_assets[c] = ta - aib;

        double debtor_mass = 0.0;
        for (auto id : in) debtor_mass += s.total_assets[net.edge(id).debtor];
        for (auto id : in) s.exposure[id] = aib * s.total_assets[net.edge(id).debtor] / debtor_mass;
    }
    return s;
}

BalanceSheetSet assign_uniform(const DirectedNetwork& net, const SheetScheme& scheme) {
    if (scheme.variant != SheetVariant::uniform)
        throw std::invalid_argument("assign_uniform needs the uniform sheet scheme");
    return assign_with_sizes(net, scheme, std::vector<double>(net.size(), 1.0));
}

double sample_pareto(double alpha, Rng& rng) {
    // survival function TA^-(alpha-1); 1 - U lies in (0, 1]
    return std::pow(1.0 - uniform01(rng), -1.0 / (alpha - 1.0));
}

BalanceSheetSet assign_powerlaw(const DirectedNetwork& net, const SheetScheme& scheme, Rng& rng) {
    if (scheme.variant != SheetVariant::power_law)
        throw std::invalid_argument("assign_powerlaw needs the power-law sheet scheme");
    scheme.validate();
    std::vector<double> sizes(net.size());
    for (double& ta : sizes) ta = sample_pareto(scheme.size_exponent, rng);
    return assign_with_sizes(net, scheme, std::move(sizes));
}

std::string_view to_string(TargetMode mode) {
    switch (mode) {
        case TargetMode::top_degree: return "top-degree";
        case TargetMode::top_assets: return "top-assets";
        case TargetMode::random: return "random";
    }
    return "?";
}

std::vector<bank_id> select_targets(const DirectedNetwork& net, const BalanceSheetSet& sheets,
                                    TargetMode mode, double fraction, Rng& rng) {
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw std::invalid_argument("target fraction must lie in (0, 1]");
    const std::size_t n = net.size();
    const auto count = std::min<std::size_t>(
        n, static_cast<std::size_t>(std::ceil(fraction * double(n) - 1e-9)));

    std::vector<bank_id> all(n);
    std::iota(all.begin(), all.end(), bank_id{0});
    std::vector<bank_id> chosen;
    chosen.reserve(count);

    if (mode == TargetMode::random) {
        std::sample(all.begin(), all.end(), std::back_inserter(chosen), count, rng);
    } else {
        auto key = [&](bank_id i) {
            return mode == TargetMode::top_degree ? double(net.total_degree(i))
                                                  : sheets.total_assets[i];
        };
        std::stable_sort(all.begin(), all.end(),
                         [&](bank_id a, bank_id b) { return key(a) > key(b); });
        chosen.assign(all.begin(), all.begin() + std::ptrdiff_t(count));
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

BalanceSheetSet apply_policy(const BalanceSheetSet& sheets, std::span<const bank_id> targets,
                             double buffer) {
    if (!(buffer > 0.0)) throw std::invalid_argument("policy buffer must be positive");
    if (!(buffer > sheets.scheme.buffer_fraction))
        throw std::invalid_argument("policy buffer must exceed the baseline buffer fraction");
    BalanceSheetSet out = sheets;
    for (bank_id i : targets) {
        if (i >= out.size()) throw std::invalid_argument("policy target out of range");
        out.capital[i] = buffer * out.total_assets[i];
    }
    return out;
}

}  // namespace contagion
