#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "contagion/balance.hpp"
#include "contagion/network.hpp"

namespace contagion {

// Relative slack on the default test so that a loss equal to the buffer up
// to rounding (e.g. five claims of 0.2/5 against K = 0.04) counts as default.
inline constexpr double default_tolerance = 1e-12;

inline bool buffer_exhausted(double loss, double capital) {
    return loss >= capital * (1.0 - default_tolerance);
}

struct CascadeOutcome {
    static constexpr std::int32_t survived = -1;

    std::vector<std::uint8_t> defaulted;
    std::vector<std::int32_t> round;  // survived for banks that did not fail
    std::vector<std::int32_t> order;  // rank among defaulters, seed = 0
    std::vector<bank_id> failure_sequence;  // defaulters by order
    std::size_t defaulted_count = 0;
    double fraction_defaulted = 0.0;
    std::int32_t rounds = 0;  // index of the last round in which a bank failed
};

// Synchronous rounds: round 0 is the seed; in round r every solvent bank
// whose claims on banks failed by round r-1 add up to at least its capital
// buffer defaults. Claims on defaulted banks recover nothing. Within a round
// failures are ordered by bank index.
CascadeOutcome run_cascade(const DirectedNetwork& net, const BalanceSheetSet& sheets,
                           bank_id seed_bank);

// Same dynamics started from several simultaneous failures, all in round 0.
CascadeOutcome run_cascade(const DirectedNetwork& net, const BalanceSheetSet& sheets,
                           std::span<const bank_id> seed_banks);

}  // namespace contagion
