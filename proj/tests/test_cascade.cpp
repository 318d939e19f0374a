#include <algorithm>
#include <random>

#include "doctest.h"

#include "contagion/cascade.hpp"
#include "oracle.hpp"

using namespace contagion;

namespace {

const SheetScheme uniform_scheme{};
const SheetScheme powerlaw_scheme{SheetVariant::power_law};

// No survivor has lost its whole buffer, and the bookkeeping fields agree.
void check_outcome(const DirectedNetwork& net, const BalanceSheetSet& s, const CascadeOutcome& o) {
    const std::size_t n = net.size();
    std::size_t count = 0;
    for (bank_id c = 0; c < n; ++c) {
        CHECK(bool(o.defaulted[c]) == (o.round[c] != CascadeOutcome::survived));
        CHECK(bool(o.defaulted[c]) == (o.order[c] != CascadeOutcome::survived));
        count += o.defaulted[c];
        if (o.defaulted[c]) continue;
        double loss = 0;
        for (auto id : net.in_edges(c))
            if (o.defaulted[net.edge(id).debtor]) loss += s.exposure[id];
        CHECK_FALSE(buffer_exhausted(loss, s.capital[c]));
    }
    CHECK(o.defaulted_count == count);
    CHECK(o.fraction_defaulted == doctest::Approx(double(count) / double(n)));
    CHECK(o.failure_sequence.size() == count);
    for (std::size_t k = 0; k < o.failure_sequence.size(); ++k)
        CHECK(o.order[o.failure_sequence[k]] == std::int32_t(k));
    CHECK(o.rounds <= std::int32_t(n));
}

void check_against_oracle(const DirectedNetwork& net, const BalanceSheetSet& s,
                          const std::vector<bank_id>& seeds) {
    const auto got = run_cascade(net, s, seeds);
    const auto want = oracle::brute_force_cascade(net, s, seeds);
    CHECK(std::vector<int>(got.round.begin(), got.round.end()) == want.round);
    CHECK(std::vector<int>(got.order.begin(), got.order.end()) == want.order);
    CHECK(int(got.defaulted_count) == want.defaulted);
    check_outcome(net, s, got);
}

}  // namespace

TEST_CASE("single claim") {
    const DirectedNetwork net(2, {{0, 1}});
    const auto o = run_cascade(net, assign_uniform(net, uniform_scheme), 0);
    CHECK(o.round[1] == 1);
    CHECK(o.fraction_defaulted == 1.0);
    CHECK(o.rounds == 1);
    CHECK(o.failure_sequence == std::vector<bank_id>{0, 1});
}

TEST_CASE("seed without creditors fails alone") {
    const DirectedNetwork net(4, {{1, 0}, {2, 0}, {3, 1}});
    const auto o = run_cascade(net, assign_uniform(net, uniform_scheme), 0);
    CHECK(o.defaulted_count == 1);
    CHECK(o.fraction_defaulted == doctest::Approx(0.25));
    CHECK(o.rounds == 0);
}

TEST_CASE("creditor falls to one debtor iff in-degree at most five") {
    for (bank_id k = 1; k <= 8; ++k) {
        std::vector<Edge> edges;
        for (bank_id d = 1; d <= k; ++d) edges.push_back({d, 0});
        const DirectedNetwork net(k + 1, edges);
        const auto o = run_cascade(net, assign_uniform(net, uniform_scheme), 1);
        CHECK(bool(o.defaulted[0]) == (k <= 5));
    }
}

TEST_CASE("hub with six creditors of in-degree six spreads nothing") {
    // creditors 1..6, each owed by the hub 0 and by five private debtors
    std::vector<Edge> edges;
    bank_id next = 7;
    for (bank_id c = 1; c <= 6; ++c) {
        edges.push_back({0, c});
        for (int j = 0; j < 5; ++j) edges.push_back({next++, c});
    }
    const DirectedNetwork net(next, edges);
    const auto s = assign_uniform(net, uniform_scheme);
    const auto o = run_cascade(net, s, 0);
    CHECK(o.defaulted_count == 1);
    check_against_oracle(net, s, {0});
}

TEST_CASE("within a round failures are ordered by index") {
    // 0 owes 3 and 1; both fail in round 1, then 2 in round 2
    const DirectedNetwork net(4, {{0, 1}, {0, 3}, {3, 2}});
    const auto o = run_cascade(net, assign_uniform(net, uniform_scheme), 0);
    CHECK(o.failure_sequence == std::vector<bank_id>{0, 1, 3, 2});
    CHECK(o.round == std::vector<std::int32_t>{0, 1, 2, 1});
    CHECK(o.rounds == 2);
}

TEST_CASE("every digraph on three and four banks matches the brute-force oracle") {
    for (std::size_t n : {3u, 4u}) {
        const std::uint64_t masks = std::uint64_t(1) << (n * (n - 1));
        for (std::uint64_t m = 0; m < masks; ++m) {
            const auto net = oracle::digraph_from_mask(n, m);
            const auto s = assign_uniform(net, uniform_scheme);
            for (bank_id seed = 0; seed < n; ++seed) check_against_oracle(net, s, {seed});
        }
    }
}

TEST_CASE("random small networks match the brute-force oracle under both schemes") {
    std::mt19937_64 eng(21);
    for (int rep = 0; rep < 400; ++rep) {
        const std::size_t n = 2 + eng() % 9;
        const double p = 0.1 + 0.6 * double(eng() % 1000) / 1000.0;
        const auto net = oracle::bernoulli_digraph(n, p, eng);
        const bank_id seed = bank_id(eng() % n);
        check_against_oracle(net, assign_uniform(net, uniform_scheme), {seed});

        std::vector<double> ta(n);
        for (double& x : ta) x = oracle::pareto(2.5, eng);
        check_against_oracle(net, assign_with_sizes(net, powerlaw_scheme, ta), {seed});
    }
}

TEST_CASE("more seeds never save a bank") {
    std::mt19937_64 eng(22);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 3 + eng() % 30;
        const auto net = oracle::bernoulli_digraph(n, 3.0 / double(n), eng);
        const auto s = assign_uniform(net, uniform_scheme);
        const std::vector<bank_id> one{bank_id(eng() % n)};
        std::vector<bank_id> two = one;
        two.push_back(bank_id(eng() % n));
        if (two[1] == two[0]) continue;
        const auto a = run_cascade(net, s, one), b = run_cascade(net, s, two);
        for (bank_id i = 0; i < n; ++i) CHECK(b.defaulted[i] >= a.defaulted[i]);
        check_against_oracle(net, s, two);
    }
}

TEST_CASE("more capital never adds a default") {
    std::mt19937_64 eng(23);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 3 + eng() % 30;
        const auto net = oracle::bernoulli_digraph(n, 3.0 / double(n), eng);
        const auto s = assign_uniform(net, uniform_scheme);
        auto richer = s;
        for (double& k : richer.capital)
            if (eng() % 3 == 0) k *= 2.0;
        const bank_id seed = bank_id(eng() % n);
        const auto a = run_cascade(net, s, seed), b = run_cascade(net, richer, seed);
        for (bank_id i = 0; i < n; ++i) CHECK(b.defaulted[i] <= a.defaulted[i]);
    }
}

TEST_CASE("cascade is deterministic") {
    std::mt19937_64 eng(24);
    const auto net = oracle::bernoulli_digraph(200, 0.02, eng);
    const auto s = assign_uniform(net, uniform_scheme);
    const auto a = run_cascade(net, s, 7), b = run_cascade(net, s, 7);
    CHECK(a.round == b.round);
    CHECK(a.failure_sequence == b.failure_sequence);
}

TEST_CASE("cascade rejects inconsistent input") {
    const DirectedNetwork net(3, {{0, 1}});
    const auto s = assign_uniform(net, uniform_scheme);
    CHECK_THROWS(run_cascade(net, s, 3));
    CHECK_THROWS(run_cascade(net, s, std::vector<bank_id>{}));
    const DirectedNetwork other(4, {{0, 1}});
    CHECK_THROWS(run_cascade(other, s, 0));
}
