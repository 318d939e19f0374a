#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace contagion {

using bank_id = std::uint32_t;

// Edge (debtor, creditor): the creditor holds a claim on the debtor, so the
// edge is an interbank asset of the creditor and a liability of the debtor.
struct Edge {
    bank_id debtor;
    bank_id creditor;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct DegreeProfile {
    std::vector<std::uint32_t> in;
    std::vector<std::uint32_t> out;
    std::vector<std::uint32_t> total;
    double mean = 0.0;  // edge count / n
};

// Simple directed graph in compressed form. Edges are kept sorted by
// (debtor, creditor); the position of an edge in that order is its edge id,
// which BalanceSheetSet uses to index exposure weights. The out-edges of a
// bank are therefore the contiguous id range out_begin(d)..out_end(d).
class DirectedNetwork {
public:
    DirectedNetwork() = default;

    // Throws std::invalid_argument on self-loops, duplicates or indices >= n.
    DirectedNetwork(std::size_t n, std::vector<Edge> edges);

    // Sorts, drops self-loops and duplicates instead of rejecting them.
    static DirectedNetwork from_multigraph(std::size_t n, std::vector<Edge> edges);

    std::size_t size() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }
    std::span<const Edge> edges() const { return edges_; }
    const Edge& edge(std::size_t id) const { return edges_[id]; }

    std::size_t out_begin(bank_id d) const { return out_offsets_[d]; }
    std::size_t out_end(bank_id d) const { return out_offsets_[d + 1]; }

    // Ids of the edges pointing into `c`, ordered by debtor.
    std::span<const std::uint32_t> in_edges(bank_id c) const {
        return {in_edge_ids_.data() + in_offsets_[c], in_offsets_[c + 1] - in_offsets_[c]};
    }

    std::uint32_t in_degree(bank_id i) const { return in_offsets_[i + 1] - in_offsets_[i]; }
    std::uint32_t out_degree(bank_id i) const { return out_offsets_[i + 1] - out_offsets_[i]; }
    std::uint32_t total_degree(bank_id i) const { return in_degree(i) + out_degree(i); }

    bool has_edge(bank_id debtor, bank_id creditor) const;

    // Edge id of (debtor, creditor), or edge_count() when absent.
    std::size_t find_edge(bank_id debtor, bank_id creditor) const;

    DegreeProfile degrees() const;
    double mean_degree() const { return n_ == 0 ? 0.0 : double(edges_.size()) / double(n_); }

    friend bool operator==(const DirectedNetwork& a, const DirectedNetwork& b) {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

private:
    void build_index();

    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::uint32_t> out_offsets_{0};
    std::vector<std::uint32_t> in_offsets_{0};
    std::vector<std::uint32_t> in_edge_ids_;
};

// One "debtor,creditor" line per edge, zero-based, LF terminated.
void write_edge_list(std::ostream& os, const DirectedNetwork& net);
void write_edge_list(const std::string& path, const DirectedNetwork& net);
DirectedNetwork read_edge_list(std::istream& is, std::size_t n);

}  // namespace contagion
