#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "doctest.h"

#include "contagion/netgen.hpp"
#include "oracle.hpp"

using namespace contagion;

namespace {

bool same_degrees(const DirectedNetwork& a, const DirectedNetwork& b) {
    const auto da = a.degrees(), db = b.degrees();
    return da.in == db.in && da.out == db.out;
}

// Pearson of total degree over distinct unordered linked pairs, written
// directly from the definition.
std::optional<double> pair_correlation(const DirectedNetwork& net) {
    std::set<std::pair<bank_id, bank_id>> pairs;
    for (const Edge& e : net.edges())
        pairs.insert({std::min(e.debtor, e.creditor), std::max(e.debtor, e.creditor)});
    std::vector<double> x, y;
    for (auto [i, j] : pairs) {
        const double ki = net.total_degree(i), kj = net.total_degree(j);
        x.push_back(ki), y.push_back(kj);
        x.push_back(kj), y.push_back(ki);
    }
    const double m = double(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
    mx /= m, my /= m;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0 || syy == 0) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

// Least-squares slope of log P(K >= k) against log k for k in [lo, hi].
double ccdf_slope(const std::vector<std::uint32_t>& deg, std::uint32_t lo, std::uint32_t hi) {
    std::vector<double> xs, ys;
    for (std::uint32_t k = lo; k <= hi; ++k) {
        const auto at_least = std::count_if(deg.begin(), deg.end(), [k](auto d) { return d >= k; });
        if (at_least == 0) break;
        xs.push_back(std::log(double(k)));
        ys.push_back(std::log(double(at_least) / double(deg.size())));
    }
    const double m = double(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i], sy += ys[i];
        sxx += xs[i] * xs[i], sxy += xs[i] * ys[i];
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

TEST_CASE("erdos-renyi small cases") {
    Rng rng(1);
    CHECK(gen_erdos_renyi(10000, 0.0, rng).edge_count() == 0);

    const auto full = gen_erdos_renyi(3, 2.0, rng);
    CHECK(full.edge_count() == 6);

    CHECK_THROWS_AS(gen_erdos_renyi(1, 0.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(gen_erdos_renyi(10, -1.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(gen_erdos_renyi(10, 9.5, rng), std::invalid_argument);
}

TEST_CASE("erdos-renyi mean degree concentrates") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        Rng rng(100 + s);
        const auto net = gen_erdos_renyi(10000, 4.0, rng);
        CHECK(std::abs(net.mean_degree() - 4.0) < 0.1);
    }
}

TEST_CASE("erdos-renyi in-degrees look binomial") {
    // n=2000, p=2/1999: the in-degree histogram should match Binomial(1999, p)
    const std::size_t n = 2000;
    const double z = 2.0, p = z / double(n - 1);
    std::map<std::uint32_t, double> observed;
    const int reps = 20;
    for (int r = 0; r < reps; ++r) {
        Rng rng(500 + r);
        const auto net = gen_erdos_renyi(n, z, rng);
        for (bank_id i = 0; i < n; ++i) observed[std::min<std::uint32_t>(net.in_degree(i), 6)] += 1;
    }
    double chi2 = 0;
    double tail = 1.0;
    for (std::uint32_t k = 0; k <= 6; ++k) {
        double pk = k < 6 ? std::exp(std::lgamma(n) - std::lgamma(k + 1.0) - std::lgamma(double(n - k)) +
                                     k * std::log(p) + double(n - 1 - k) * std::log1p(-p))
                          : tail;
        tail -= pk;
        const double expect = pk * double(n * reps);
        chi2 += (observed[k] - expect) * (observed[k] - expect) / expect;
    }
    CHECK(chi2 < 16.81);  // chi-square, 6 dof, upper 1%
}

TEST_CASE("shifted power law hits the requested mean") {
    const auto law = ShiftedPowerLaw::with_mean(3.0, 4.0, 100);
    REQUIRE(law.has_value());
    double mass = 0, first = 0;
    for (std::uint32_t k = 0; k <= 100; ++k) {
        const double w = std::pow(k + law->shift(), -3.0);
        mass += w;
        first += k * w;
    }
    CHECK(first / mass == doctest::Approx(4.0).epsilon(1e-6));
    for (std::uint32_t k : {0u, 7u, 100u})
        CHECK(law->pmf(k) == doctest::Approx(std::pow(k + law->shift(), -3.0) / mass));

    Rng rng(3);
    double sum = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const auto k = law->sample(rng);
        REQUIRE(k <= 100);
        sum += k;
    }
    CHECK(std::abs(sum / draws - 4.0) < 0.1);

    CHECK_FALSE(ShiftedPowerLaw::with_mean(3.0, 50.0, 100).has_value());
    CHECK_FALSE(ShiftedPowerLaw::with_mean(3.0, 0.0, 100).has_value());
}

TEST_CASE("scale-free in-degree tail has exponent near -2 in the survival function") {
    for (std::uint64_t s = 0; s < 5; ++s) {
        Rng rng(40 + s);
        const auto net = gen_scale_free(10000, 3.0, 4.0, rng);
        const double slope = ccdf_slope(net.degrees().in, 15, 50);
        CHECK(slope == doctest::Approx(-2.0).epsilon(0.15));
    }
}

TEST_CASE("scale-free hubs: direct sampling agrees with the generator") {
    const std::size_t n = 10000;
    const auto law = ShiftedPowerLaw::with_mean(3.0, 4.0, scale_free_cutoff(n));
    REQUIRE(law.has_value());

    std::vector<double> weights;
    for (std::uint32_t k = 0; k <= law->cutoff(); ++k) weights.push_back(std::pow(k + law->shift(), -3.0));
    std::discrete_distribution<std::uint32_t> degree(weights.begin(), weights.end());

    const int draws = 40;
    int direct_hits = 0, generated_hits = 0;
    for (int r = 0; r < draws; ++r) {
        std::mt19937_64 eng(700 + r);
        std::uint32_t biggest = 0;
        for (std::size_t i = 0; i < n; ++i) biggest = std::max(biggest, degree(eng) + degree(eng));
        direct_hits += biggest > 40;

        Rng rng(900 + r);
        const auto deg = gen_scale_free(n, 3.0, 4.0, rng).degrees();
        generated_hits += *std::max_element(deg.total.begin(), deg.total.end()) > 40;
    }
    CHECK(direct_hits > draws * 3 / 4);
    CHECK(generated_hits > draws * 3 / 4);
}

TEST_CASE("scale-free realized mean degree") {
    for (std::uint64_t s = 0; s < 5; ++s) {
        Rng rng(60 + s);
        const auto net = gen_scale_free(10000, 3.0, 4.0, rng);
        CHECK(std::abs(net.mean_degree() - 4.0) < 0.2);
    }
}

TEST_CASE("scale-free on two nodes") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        Rng rng(s);
        const auto net = gen_scale_free(2, 3.0, 0.25, rng);
        for (const Edge& e : net.edges()) CHECK(e.debtor != e.creditor);
        CHECK(net.edge_count() <= 2);
    }
    Rng rng(0);
    // mean 1 needs every degree at the cutoff of 1, which the law cannot reach
    CHECK_THROWS_AS(gen_scale_free(2, 3.0, 1.0, rng), GenerationError);
    CHECK_THROWS_AS(gen_scale_free(1, 3.0, 0.5, rng), std::invalid_argument);
    CHECK_THROWS_AS(gen_scale_free(100, 2.0, 2.0, rng), std::invalid_argument);
}

TEST_CASE("generators are reproducible") {
    Rng a(77), b(77);
    CHECK(gen_erdos_renyi(3000, 5.0, a) == gen_erdos_renyi(3000, 5.0, b));
    CHECK(gen_scale_free(3000, 3.0, 5.0, a) == gen_scale_free(3000, 3.0, 5.0, b));
    const auto net = gen_erdos_renyi(500, 4.0, a);
    Rng c(5), d(5);
    CHECK(rewire_assortativity(net, -1.0, 5, c).network == rewire_assortativity(net, -1.0, 5, d).network);
}

TEST_CASE("rewiring preserves in- and out-degrees") {
    std::mt19937_64 eng(8);
    for (int rep = 0; rep < 60; ++rep) {
        const std::size_t n = 3 + eng() % 40;
        const auto net = oracle::bernoulli_digraph(n, 0.2, eng);
        if (net.edge_count() < 2) continue;
        for (double J : {-1.0, 0.0, 1.0}) {
            Rng rng(eng());
            const auto out = rewire_assortativity(net, J, 10, rng);
            CHECK(same_degrees(net, out.network));
            CHECK(out.network.edge_count() == net.edge_count());
            const auto& st = out.stats;
            CHECK(st.proposals == 10 * net.edge_count());
            CHECK(st.accepted + st.rejected_self_loop + st.rejected_duplicate + st.rejected_metropolis ==
                  st.proposals);
            CHECK(st.initial_energy == doctest::Approx(degree_hamiltonian(net, J)));
            CHECK(st.final_energy == doctest::Approx(degree_hamiltonian(out.network, J)));
        }
    }
}

TEST_CASE("rewiring with J=0 accepts every legal swap") {
    Rng gen(9);
    const auto net = gen_erdos_renyi(300, 4.0, gen);
    Rng rng(10);
    const auto out = rewire_assortativity(net, 0.0, 10, rng);
    CHECK(out.stats.rejected_metropolis == 0);
    CHECK(out.stats.accepted > 0);
    CHECK_FALSE(out.network == net);
}

TEST_CASE("rewiring sign of the coupling sets the sign of assortativity") {
    Rng gen(11);
    const auto net = gen_erdos_renyi(10000, 4.0, gen);
    Rng a(12), b(13);
    const auto dis = degree_assortativity(rewire_assortativity(net, -1.0, 20, a).network);
    const auto ass = degree_assortativity(rewire_assortativity(net, 1.0, 20, b).network);
    REQUIRE(dis.has_value());
    REQUIRE(ass.has_value());
    CHECK(*dis < -0.05);
    CHECK(*ass > 0.05);
}

TEST_CASE("rewiring lowers the cost for J=-1") {
    int decreased = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        Rng gen(2000 + s);
        const auto net = gen_erdos_renyi(1000, 4.0, gen);
        Rng rng(3000 + s);
        const auto out = rewire_assortativity(net, -1.0, 20, rng);
        decreased += degree_hamiltonian(out.network, -1.0) < degree_hamiltonian(net, -1.0);
    }
    CHECK(decreased >= 95);
}

TEST_CASE("rewiring rejects degenerate input") {
    Rng rng(1);
    CHECK_THROWS(rewire_assortativity(DirectedNetwork(3, {{0, 1}}), 1.0, 5, rng));
    CHECK_THROWS(rewire_assortativity(DirectedNetwork(3, {{0, 1}, {1, 2}}), 1.0, 0, rng));
}

TEST_CASE("assortativity of a star is -1") {
    std::vector<Edge> edges;
    for (bank_id leaf = 1; leaf < 8; ++leaf) {
        edges.push_back({0, leaf});
        edges.push_back({leaf, 0});
    }
    const auto r = degree_assortativity(DirectedNetwork(8, edges));
    REQUIRE(r.has_value());
    CHECK(*r == doctest::Approx(-1.0));
}

TEST_CASE("assortativity of a regular network is undefined") {
    std::vector<Edge> cycle;
    for (bank_id i = 0; i < 10; ++i) cycle.push_back({i, bank_id((i + 1) % 10)});
    CHECK_FALSE(degree_assortativity(DirectedNetwork(10, cycle)).has_value());
}

TEST_CASE("assortativity matches a direct computation and is near zero on ER") {
    Rng gen(14);
    const auto net = gen_erdos_renyi(10000, 4.0, gen);
    const auto r = degree_assortativity(net);
    const auto expect = pair_correlation(net);
    REQUIRE(r.has_value());
    REQUIRE(expect.has_value());
    CHECK(*r == doctest::Approx(*expect).epsilon(1e-9));
    CHECK(std::abs(*r) < 0.05);

    std::mt19937_64 eng(15);
    for (int rep = 0; rep < 30; ++rep) {
        const auto small = oracle::bernoulli_digraph(12, 0.3, eng);
        if (small.edge_count() < 2) continue;
        const auto got = degree_assortativity(small);
        const auto want = pair_correlation(small);
        REQUIRE(got.has_value() == want.has_value());
        if (got) CHECK(*got == doctest::Approx(*want).epsilon(1e-9));
    }
}
