#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "contagion/network.hpp"
#include "contagion/rng.hpp"

namespace contagion {

enum class SheetVariant { uniform, power_law };

struct SheetScheme {
    SheetVariant variant = SheetVariant::uniform;
    double interbank_fraction = 0.20;  // A^IB / TA
    double buffer_fraction = 0.04;     // K / TA
    double size_exponent = 2.5;        // P(TA) ∝ TA^-alpha, power-law variant only

    // Throws std::invalid_argument unless 0 < buffer < interbank <= 1 and alpha > 2.
    void validate() const;

    friend bool operator==(const SheetScheme&, const SheetScheme&) = default;
};

// Per-bank balance sheets plus the per-edge exposures. exposure[id] is the
// claim the creditor of edge `id` holds on its debtor. Deposits are the
// residual liability and never enter the dynamics, so they are not stored.
struct BalanceSheetSet {
    SheetScheme scheme;
    std::vector<double> total_assets;
    std::vector<double> interbank_assets;
    std::vector<double> illiquid_assets;
    std::vector<double> capital;
    std::vector<double> exposure;

    std::size_t size() const { return total_assets.size(); }

    friend bool operator==(const BalanceSheetSet&, const BalanceSheetSet&) = default;
};

// L^IB(d) = sum of exposures on the out-edges of d.
std::vector<double> interbank_liabilities(const DirectedNetwork& net, const BalanceSheetSet& sheets);

// Shared construction: creditor c splits theta*TA(c) over its debtors in
// proportion to their total assets. Banks with no debtors keep everything
// outside the interbank market.
BalanceSheetSet assign_with_sizes(const DirectedNetwork& net, const SheetScheme& scheme,
                                  std::vector<double> total_assets);

// TA = 1 for every bank, equal split over in-neighbours.
BalanceSheetSet assign_uniform(const DirectedNetwork& net, const SheetScheme& scheme);

// TA drawn i.i.d. Pareto(alpha) with minimum 1, exposures proportional to
// the debtor's size.
BalanceSheetSet assign_powerlaw(const DirectedNetwork& net, const SheetScheme& scheme, Rng& rng);

// Pareto draw with minimum 1 and density exponent alpha, by inverse CDF.
double sample_pareto(double alpha, Rng& rng);

enum class TargetMode { top_degree, top_assets, random };

std::string_view to_string(TargetMode mode);

// ceil(fraction * n) banks, returned in ascending index order. Ranked modes
// break ties by lowest index.
std::vector<bank_id> select_targets(const DirectedNetwork& net, const BalanceSheetSet& sheets,
                                    TargetMode mode, double fraction, Rng& rng);

// Copy of `sheets` with K(i) = buffer * TA(i) on the targets. Exposures and
// asset splits are untouched.
BalanceSheetSet apply_policy(const BalanceSheetSet& sheets, std::span<const bank_id> targets,
                             double buffer);

}  // namespace contagion
