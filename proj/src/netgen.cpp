#include "contagion/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace contagion {

DirectedNetwork gen_erdos_renyi(std::size_t n, double z, Rng& rng) {
    if (n < 2) throw std::invalid_argument("erdos-renyi: need at least 2 banks");
    if (!(z >= 0.0) || z > double(n - 1))
        throw std::invalid_argument("erdos-renyi: mean degree must lie in [0, n-1]");

    const double p = z / double(n - 1);
    const std::uint64_t slots = std::uint64_t(n) * (n - 1);
    std::vector<Edge> edges;
    edges.reserve(std::size_t(double(slots) * p * 1.05) + 16);

    auto slot_to_edge = [n](std::uint64_t m) {
        const auto debtor = static_cast<bank_id>(m / (n - 1));
        auto creditor = static_cast<bank_id>(m % (n - 1));
        if (creditor >= debtor) ++creditor;
        return Edge{debtor, creditor};
    };

    if (p >= 1.0) {
        for (std::uint64_t m = 0; m < slots; ++m) edges.push_back(slot_to_edge(m));
    } else if (p > 0.0) {
        // geometric skipping over the n(n-1) ordered pairs
        const double log_q = std::log1p(-p);
        std::uint64_t m = 0;
        while (true) {
            const double u = uniform01(rng);
            const double skip = std::floor(std::log1p(-u) / log_q);
            if (skip >= double(slots - m)) break;
            m += static_cast<std::uint64_t>(skip);
            edges.push_back(slot_to_edge(m));
            if (++m >= slots) break;
        }
    }
    return DirectedNetwork(n, std::move(edges));
}

ShiftedPowerLaw::ShiftedPowerLaw(double gamma, double shift, std::uint32_t cutoff)
    : gamma_(gamma), shift_(shift), cutoff_(cutoff) {
    if (!(shift > 0.0)) throw std::invalid_argument("power law shift must be positive");
    cdf_.resize(std::size_t(cutoff) + 1);
    double acc = 0.0, first_moment = 0.0;
    for (std::uint32_t k = 0; k <= cutoff; ++k) {
        const double w = std::pow(double(k) + shift, -gamma);
        acc += w;
        first_moment += double(k) * w;
        cdf_[k] = acc;
    }
    mean_ = first_moment / acc;
}

double ShiftedPowerLaw::pmf(std::uint32_t k) const {
    if (k > cutoff_) return 0.0;
    const double lo = k == 0 ? 0.0 : cdf_[k - 1];
    return (cdf_[k] - lo) / cdf_.back();
}

std::uint32_t ShiftedPowerLaw::sample(Rng& rng) const {
    const double u = uniform01(rng) * cdf_.back();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return static_cast<std::uint32_t>(it - cdf_.begin());
}

std::optional<ShiftedPowerLaw> ShiftedPowerLaw::with_mean(double gamma, double mean,
                                                          std::uint32_t cutoff) {
    // the mean increases monotonically with the shift, from 0 towards cutoff/2
    double lo = std::log(1e-9), hi = std::log(1e9);
    if (!(mean > 0.0) || cutoff == 0) return std::nullopt;
    if (ShiftedPowerLaw(gamma, std::exp(hi), cutoff).mean() <= mean) return std::nullopt;
    if (ShiftedPowerLaw(gamma, std::exp(lo), cutoff).mean() >= mean) return std::nullopt;
    for (int iter = 0; iter < 200 && hi - lo > 1e-13; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (ShiftedPowerLaw(gamma, std::exp(mid), cutoff).mean() < mean)
            lo = mid;
        else
            hi = mid;
    }
    return ShiftedPowerLaw(gamma, std::exp(0.5 * (lo + hi)), cutoff);
}

std::uint32_t scale_free_cutoff(std::size_t n) {
    auto k = static_cast<std::uint32_t>(std::floor(std::sqrt(double(n))));
    return std::min<std::uint32_t>(k, static_cast<std::uint32_t>(n - 1));
}

DirectedNetwork gen_scale_free(std::size_t n, double gamma, double z, Rng& rng) {
    if (n < 2) throw std::invalid_argument("scale-free: need at least 2 banks");
    if (!(gamma > 2.0)) throw std::invalid_argument("scale-free: gamma must exceed 2");
    if (!(z > 0.0)) throw std::invalid_argument("scale-free: mean degree must be positive");

    const std::uint32_t cutoff = scale_free_cutoff(n);
    auto law = ShiftedPowerLaw::with_mean(gamma, z, cutoff);
    if (!law)
        throw GenerationError("scale-free: mean degree " + std::to_string(z) +
                              " unreachable with degree cutoff " + std::to_string(cutoff) +
                              " (must be below " + std::to_string(cutoff / 2.0) + ")");

    std::vector<std::uint32_t> in(n), out(n);
    std::uint64_t in_sum = 0, out_sum = 0;
    for (std::size_t i = 0; i < n; ++i) in_sum += in[i] = law->sample(rng);
    for (std::size_t i = 0; i < n; ++i) out_sum += out[i] = law->sample(rng);

    // top up the deficient side one stub at a time
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    auto& short_side = in_sum < out_sum ? in : out;
    std::uint64_t deficit = in_sum < out_sum ? out_sum - in_sum : in_sum - out_sum;
    while (deficit > 0) {
        const std::size_t i = pick(rng);
        if (short_side[i] >= cutoff) continue;
        ++short_side[i];
        --deficit;
    }

    std::vector<bank_id> out_stubs, in_stubs;
    out_stubs.reserve(std::max(in_sum, out_sum));
    in_stubs.reserve(std::max(in_sum, out_sum));
    for (std::size_t i = 0; i < n; ++i) {
        out_stubs.insert(out_stubs.end(), out[i], static_cast<bank_id>(i));
        in_stubs.insert(in_stubs.end(), in[i], static_cast<bank_id>(i));
    }
    std::shuffle(in_stubs.begin(), in_stubs.end(), rng);

    std::vector<Edge> edges(out_stubs.size());
    for (std::size_t s = 0; s < out_stubs.size(); ++s) edges[s] = {out_stubs[s], in_stubs[s]};
    return DirectedNetwork::from_multigraph(n, std::move(edges));
}

double degree_hamiltonian(const DirectedNetwork& net, double coupling) {
    double h = 0.0;
    for (const Edge& e : net.edges())
        h += double(net.total_degree(e.debtor)) * double(net.total_degree(e.creditor));
    return -coupling * h;
}

namespace {

// uniform in [0, bound) by multiply-shift; bias is below 2^-40 for the
// edge counts handled here
inline std::size_t draw_index(Rng& rng, std::size_t bound) {
    return static_cast<std::size_t>((static_cast<unsigned __int128>(rng()) * bound) >> 64);
}

}  // namespace

RewireResult rewire_assortativity(const DirectedNetwork& net, double coupling,
                                  std::uint32_t sweeps, Rng& rng) {
    if (net.edge_count() < 2) throw std::invalid_argument("rewiring needs at least 2 edges");
    if (sweeps < 1) throw std::invalid_argument("rewiring needs at least one sweep");

    const std::size_t n = net.size();
    std::vector<double> k(n);
    for (bank_id i = 0; i < n; ++i) k[i] = net.total_degree(i);

    std::vector<Edge> edges(net.edges().begin(), net.edges().end());
    // successor lists, stored flat with the CSR offsets of the input
    std::vector<bank_id> succ(edges.size());
    std::vector<std::uint32_t> first(n + 1);
    for (bank_id i = 0; i <= n; ++i) first[i] = i < n ? std::uint32_t(net.out_begin(i))
                                                      : std::uint32_t(edges.size());
    for (std::size_t id = 0; id < edges.size(); ++id) succ[id] = edges[id].creditor;

    auto slot = [&](bank_id from, bank_id to) {
        const auto b = succ.begin() + first[from], e = succ.begin() + first[from + 1];
        return std::find(b, e, to) - succ.begin();
    };
    auto linked = [&](bank_id from, bank_id to) {
        return std::size_t(slot(from, to)) != first[from + 1];
    };

    RewireStats stats;
    stats.initial_energy = degree_hamiltonian(net, coupling);

    const std::size_t m = edges.size();
    const std::uint64_t total = std::uint64_t(sweeps) * m;
    for (std::uint64_t step = 0; step < total; ++step) {
        const std::size_t i = draw_index(rng, m);
        std::size_t j = draw_index(rng, m - 1);
        if (j >= i) ++j;
        ++stats.proposals;

        const bank_id a = edges[i].debtor, b = edges[i].creditor;
        const bank_id c = edges[j].debtor, d = edges[j].creditor;
        if (a == d || c == b) {
            ++stats.rejected_self_loop;
            continue;
        }
        // pairs {a,b},{c,d} are replaced by {a,d},{c,b}
        const double delta = -coupling * (k[a] - k[c]) * (k[d] - k[b]);
        if (delta > 0.0) {
            const double u = uniform01(rng);
            // exp(-delta) is below the smallest non-zero u beyond ~37
            if (delta > 37.0 ? u != 0.0 : u >= std::exp(-delta)) {
                ++stats.rejected_metropolis;
                continue;
            }
        }
        if (linked(a, d) || linked(c, b)) {
            ++stats.rejected_duplicate;
            continue;
        }
        succ[slot(a, b)] = d;
        succ[slot(c, d)] = b;
        edges[i].creditor = d;
        edges[j].creditor = b;
        ++stats.accepted;
    }

    RewireResult result{DirectedNetwork(n, std::move(edges)), stats};
    result.stats.final_energy = degree_hamiltonian(result.network, coupling);
    return result;
}

std::optional<double> degree_assortativity(const DirectedNetwork& net) {
    if (net.edge_count() < 2) throw std::invalid_argument("assortativity needs at least 2 edges");

    double sum_prod = 0.0, sum_deg = 0.0, sum_sq = 0.0;
    std::size_t pairs = 0;
    for (const Edge& e : net.edges()) {
        // reciprocal pairs are counted once, from the lower-indexed debtor
        if (e.debtor > e.creditor && net.has_edge(e.creditor, e.debtor)) continue;
        const double ku = net.total_degree(e.debtor), kv = net.total_degree(e.creditor);
        sum_prod += ku * kv;
        sum_deg += 0.5 * (ku + kv);
        sum_sq += 0.5 * (ku * ku + kv * kv);
        ++pairs;
    }
    const double m = double(pairs);
    const double mean = sum_deg / m;
    const double var = sum_sq / m - mean * mean;
    if (var <= 1e-12 * std::max(1.0, sum_sq / m)) return std::nullopt;
    return std::clamp((sum_prod / m - mean * mean) / var, -1.0, 1.0);
}

}  // namespace contagion
