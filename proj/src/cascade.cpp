#include "contagion/cascade.hpp"

#include <algorithm>
#include <stdexcept>

namespace contagion {

CascadeOutcome run_cascade(const DirectedNetwork& net, const BalanceSheetSet& sheets,
                           bank_id seed_bank) {
    return run_cascade(net, sheets, std::span<const bank_id>(&seed_bank, 1));
}

CascadeOutcome run_cascade(const DirectedNetwork& net, const BalanceSheetSet& sheets,
                           std::span<const bank_id> seed_banks) {
    const std::size_t n = net.size();
    if (sheets.size() != n || sheets.capital.size() != n ||
        sheets.exposure.size() != net.edge_count())
        throw std::invalid_argument("balance sheets do not match the network");
    if (seed_banks.empty()) throw std::invalid_argument("cascade needs at least one seed bank");

    CascadeOutcome out;
    out.defaulted.assign(n, 0);
    out.round.assign(n, CascadeOutcome::survived);
    out.order.assign(n, CascadeOutcome::survived);

    std::vector<bank_id> frontier(seed_banks.begin(), seed_banks.end());
    std::sort(frontier.begin(), frontier.end());
    frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
    for (bank_id s : frontier)
        if (s >= n) throw std::invalid_argument("seed bank out of range");

    std::vector<double> loss(n, 0.0);
    std::vector<std::uint8_t> queued(n, 0);
    std::vector<bank_id> next;

    std::int32_t round = 0;
    while (!frontier.empty()) {
        for (bank_id b : frontier) {
            out.defaulted[b] = 1;
            out.round[b] = round;
            out.order[b] = static_cast<std::int32_t>(out.failure_sequence.size());
            out.failure_sequence.push_back(b);
        }
        out.rounds = round;

        next.clear();
        for (bank_id d : frontier) {
            for (std::size_t id = net.out_begin(d); id < net.out_end(d); ++id) {
                const bank_id c = net.edge(id).creditor;
                if (out.defaulted[c] || queued[c]) continue;
                loss[c] += sheets.exposure[id];
                if (buffer_exhausted(loss[c], sheets.capital[c])) {
                    queued[c] = 1;
                    next.push_back(c);
                }
            }
        }
        std::sort(next.begin(), next.end());
        frontier.swap(next);
        ++round;
    }

    out.defaulted_count = out.failure_sequence.size();
    out.fraction_defaulted = double(out.defaulted_count) / double(n);
    return out;
}

}  // namespace contagion
