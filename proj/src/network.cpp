#include "contagion/network.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace contagion {

DirectedNetwork::DirectedNetwork(std::size_t n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)) {
    std::sort(edges_.begin(), edges_.end());
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        if (e.debtor >= n_ || e.creditor >= n_)
            throw std::invalid_argument("edge endpoint out of range");
        if (e.debtor == e.creditor)
            throw std::invalid_argument("self-loop on bank " + std::to_string(e.debtor));
        if (i > 0 && edges_[i - 1] == e)
            throw std::invalid_argument("duplicate edge " + std::to_string(e.debtor) + "->" +
                                        std::to_string(e.creditor));
    }
    build_index();
}

DirectedNetwork DirectedNetwork::from_multigraph(std::size_t n, std::vector<Edge> edges) {
    std::erase_if(edges, [](const Edge& e) { return e.debtor == e.creditor; });
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return DirectedNetwork(n, std::move(edges));
}

void DirectedNetwork::build_index() {
    out_offsets_.assign(n_ + 1, 0);
    in_offsets_.assign(n_ + 1, 0);
    for (const Edge& e : edges_) {
        ++out_offsets_[e.debtor + 1];
        ++in_offsets_[e.creditor + 1];
    }
    for (std::size_t i = 0; i < n_; ++i) {
        out_offsets_[i + 1] += out_offsets_[i];
        in_offsets_[i + 1] += in_offsets_[i];
    }
    // edges are sorted by debtor, so filling in order keeps each in-list sorted by debtor
    in_edge_ids_.resize(edges_.size());
    std::vector<std::uint32_t> cursor(in_offsets_.begin(), in_offsets_.end() - 1);
    for (std::size_t id = 0; id < edges_.size(); ++id)
        in_edge_ids_[cursor[edges_[id].creditor]++] = static_cast<std::uint32_t>(id);
}

std::size_t DirectedNetwork::find_edge(bank_id debtor, bank_id creditor) const {
    if (debtor >= n_ || creditor >= n_) return edges_.size();
    auto first = edges_.begin() + out_offsets_[debtor];
    auto last = edges_.begin() + out_offsets_[debtor + 1];
    auto it = std::lower_bound(first, last, Edge{debtor, creditor});
    if (it != last && it->creditor == creditor) return std::size_t(it - edges_.begin());
    return edges_.size();
}

bool DirectedNetwork::has_edge(bank_id debtor, bank_id creditor) const {
    return find_edge(debtor, creditor) != edges_.size();
}

DegreeProfile DirectedNetwork::degrees() const {
    DegreeProfile p;
    p.in.resize(n_);
    p.out.resize(n_);
    p.total.resize(n_);
    for (bank_id i = 0; i < n_; ++i) {
        p.in[i] = in_degree(i);
        p.out[i] = out_degree(i);
        p.total[i] = p.in[i] + p.out[i];
    }
    p.mean = mean_degree();
    return p;
}

void write_edge_list(std::ostream& os, const DirectedNetwork& net) {
    for (const Edge& e : net.edges()) os << e.debtor << ',' << e.creditor << '\n';
}

void write_edge_list(const std::string& path, const DirectedNetwork& net) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_edge_list(os, net);
    if (!os.good()) throw std::runtime_error("failed writing '" + path + "'");
}

DirectedNetwork read_edge_list(std::istream& is, std::size_t n) {
    std::vector<Edge> edges;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        unsigned long d = 0, c = 0;
        char comma = 0;
        if (!(ls >> d >> comma >> c) || comma != ',')
            throw std::runtime_error("malformed edge line: '" + line + "'");
        edges.push_back({static_cast<bank_id>(d), static_cast<bank_id>(c)});
    }
    return DirectedNetwork(n, std::move(edges));
}

}  // namespace contagion
