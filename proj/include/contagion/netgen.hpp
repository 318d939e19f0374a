#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "contagion/network.hpp"
#include "contagion/rng.hpp"

namespace contagion {

// A requested network cannot be produced with the given parameters (as
// opposed to a caller passing nonsense, which is std::invalid_argument).
class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Every ordered pair (i, j), i != j, is an edge independently with
// probability z / (n - 1).
DirectedNetwork gen_erdos_renyi(std::size_t n, double z, Rng& rng);

// Discrete law P(k) ∝ (k + shift)^-gamma on k = 0..cutoff. The shift moves
// the mean without touching the tail exponent.
class ShiftedPowerLaw {
public:
    ShiftedPowerLaw(double gamma, double shift, std::uint32_t cutoff);

    // Solves for the shift by bisection; nullopt when `mean` lies outside the
    // range reachable under the cutoff, which is (0, cutoff / 2).
    static std::optional<ShiftedPowerLaw> with_mean(double gamma, double mean,
                                                    std::uint32_t cutoff);

    double gamma() const { return gamma_; }
    double shift() const { return shift_; }
    std::uint32_t cutoff() const { return cutoff_; }
    double mean() const { return mean_; }
    double pmf(std::uint32_t k) const;

    std::uint32_t sample(Rng& rng) const;

private:
    double gamma_;
    double shift_;
    std::uint32_t cutoff_;
    double mean_ = 0.0;
    std::vector<double> cdf_;  // unnormalised, cdf_.back() is the total mass
};

// Degree cutoff used by the scale-free generator: floor(sqrt(n)), at most n - 1.
std::uint32_t scale_free_cutoff(std::size_t n);

// Directed configuration model with in- and out-degrees drawn independently
// from ShiftedPowerLaw::with_mean(gamma, z, scale_free_cutoff(n)). Self-loops
// and multi-edges produced by the stub matching are deleted.
// Throws GenerationError when z is not reachable under the cutoff.
DirectedNetwork gen_scale_free(std::size_t n, double gamma, double z, Rng& rng);

struct RewireStats {
    std::uint64_t proposals = 0;
    std::uint64_t accepted = 0;
    std::uint64_t rejected_self_loop = 0;
    std::uint64_t rejected_duplicate = 0;
    std::uint64_t rejected_metropolis = 0;
    double initial_energy = 0.0;
    double final_energy = 0.0;
};

struct RewireResult {
    DirectedNetwork network;
    RewireStats stats;
};

// Cost minimised by the rewiring: H(G) = -J * sum over edges (d -> c) of
// k_d * k_c with k the total degree, i.e. -J/2 * sum_ij (a_ij + a_ji) k_i k_j.
// With this sign J < 0 penalises hub-hub links (disassortative) and J > 0
// rewards them (assortative).
double degree_hamiltonian(const DirectedNetwork& net, double coupling);

// Metropolis sampling of exp(-H) over double-edge swaps (a->b, c->d) =>
// (a->d, c->b), sweeps * edge_count proposals. In- and out-degree sequences
// are preserved exactly. Rejections are counted in the order the checks run:
// self-loop, Metropolis, duplicate edge.
RewireResult rewire_assortativity(const DirectedNetwork& net, double coupling,
                                  std::uint32_t sweeps, Rng& rng);

// Pearson correlation of total degree across the endpoints of the undirected
// projection of the edge set. nullopt when every endpoint has the same degree.
std::optional<double> degree_assortativity(const DirectedNetwork& net);

}  // namespace contagion
