#include <random>
#include <sstream>

#include "doctest.h"

#include "contagion/network.hpp"
#include "oracle.hpp"

using namespace contagion;

TEST_CASE("network rejects self-loops, duplicates and bad indices") {
    CHECK_THROWS_AS(DirectedNetwork(3, {{1, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(DirectedNetwork(3, {{0, 1}, {0, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(DirectedNetwork(3, {{0, 3}}), std::invalid_argument);
    CHECK_NOTHROW(DirectedNetwork(3, {{0, 1}, {1, 0}}));
}

TEST_CASE("from_multigraph drops loops and repeats") {
    const auto net = DirectedNetwork::from_multigraph(3, {{0, 1}, {0, 1}, {2, 2}, {2, 0}});
    CHECK(net.edge_count() == 2);
    CHECK(net.has_edge(0, 1));
    CHECK(net.has_edge(2, 0));
    CHECK_FALSE(net.has_edge(2, 2));
}

TEST_CASE("adjacency index agrees with the edge set") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t n = 2 + rng() % 30;
        const auto net = oracle::bernoulli_digraph(n, 0.15, rng);

        std::size_t in_total = 0, out_total = 0;
        for (bank_id i = 0; i < n; ++i) {
            for (std::size_t id = net.out_begin(i); id < net.out_end(i); ++id)
                CHECK(net.edge(id).debtor == i);
            for (auto id : net.in_edges(i)) CHECK(net.edge(id).creditor == i);
            in_total += net.in_degree(i);
            out_total += net.out_degree(i);
        }
        CHECK(in_total == net.edge_count());
        CHECK(out_total == net.edge_count());

        for (std::size_t id = 0; id < net.edge_count(); ++id) {
            const Edge e = net.edge(id);
            CHECK(net.find_edge(e.debtor, e.creditor) == id);
        }

        const auto deg = net.degrees();
        CHECK(deg.mean == doctest::Approx(double(net.edge_count()) / double(n)));
        for (bank_id i = 0; i < n; ++i) CHECK(deg.total[i] == deg.in[i] + deg.out[i]);
    }
}

TEST_CASE("edge list export is one debtor,creditor pair per line") {
    const DirectedNetwork net(4, {{3, 0}, {0, 2}, {1, 2}});
    std::ostringstream os;
    write_edge_list(os, net);
    CHECK(os.str() == "0,2\n1,2\n3,0\n");

    std::istringstream is(os.str());
    CHECK(read_edge_list(is, 4) == net);

    std::istringstream bad("0;2\n");
    CHECK_THROWS(read_edge_list(bad, 4));
}
