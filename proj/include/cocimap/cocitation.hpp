#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cocimap/corpus.hpp"

namespace cocimap {

namespace detail {
inline std::uint64_t pair_key(DenseId a, DenseId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}
}  // namespace detail

// Weighted undirected co-citation network of one citing year. Edge weight is
// the number of that year's papers co-citing the two endpoints. No
// self-loops; nodes are implicit in the edge map (every node has an edge).
struct CoCitationNetwork {
    int year = 0;
    std::unordered_map<std::uint64_t, int> edges;  // unordered pair -> weight

    std::size_t edge_count() const { return edges.size(); }

    int max_weight() const {
        int m = 0;
        for (const auto& [k, w] : edges) m = std::max(m, w);
        return m;
    }

    std::vector<DenseId> nodes() const {
        std::vector<DenseId> out;
        out.reserve(edges.size());
        for (const auto& [k, w] : edges) {
            out.push_back(static_cast<DenseId>(k >> 32));
            out.push_back(static_cast<DenseId>(k & 0xffffffffu));
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
};

// Thresholded view: edge weights collapsed to 1, isolated nodes dropped.
struct BinaryNetwork {
    int year = 0;
    std::map<DenseId, std::vector<DenseId>> adj;  // node -> sorted neighbors

    std::size_t node_count() const { return adj.size(); }

    std::size_t edge_count() const {
        std::size_t deg = 0;
        for (const auto& [v, ns] : adj) deg += ns.size();
        return deg / 2;
    }

    bool has_edge(DenseId u, DenseId v) const {
        auto it = adj.find(u);
        if (it == adj.end()) return false;
        return std::binary_search(it->second.begin(), it->second.end(), v);
    }

    void add_edge(DenseId u, DenseId v) {
        if (u == v) throw std::invalid_argument("self-loop");
        insert_sorted(adj[u], v);
        insert_sorted(adj[v], u);
    }

    std::vector<DenseId> node_list() const {
        std::vector<DenseId> out;
        out.reserve(adj.size());
        for (const auto& [v, ns] : adj) out.push_back(v);
        return out;
    }

private:
    static void insert_sorted(std::vector<DenseId>& v, DenseId x) {
        auto it = std::lower_bound(v.begin(), v.end(), x);
        if (it == v.end() || *it != x) v.insert(it, x);
    }
};

// Every paper published in `year` adds +1 to each unordered pair of distinct
// papers in its reference set. Multiplicity does not change pair counts;
// self-citations keep the citing paper in the set but never form {X,X}.
inline CoCitationNetwork build_yearly_network(const CorpusStore& store, int year) {
    if (!store.in_range(year)) throw std::invalid_argument("year outside analysis range");
    CoCitationNetwork net;
    net.year = year;
    for (DenseId p : store.papers_of_year(year)) {
        auto refs = store.distinct_refs(p);
        for (std::size_t i = 0; i < refs.size(); ++i)
            for (std::size_t j = i + 1; j < refs.size(); ++j)
                ++net.edges[detail::pair_key(refs[i], refs[j])];
    }
    return net;
}

inline BinaryNetwork threshold(const CoCitationNetwork& net, int w) {
    if (w < 1) throw std::invalid_argument("threshold must be >= 1");
    BinaryNetwork bin;
    bin.year = net.year;
    for (const auto& [key, weight] : net.edges) {
        if (weight < w) continue;
        bin.add_edge(static_cast<DenseId>(key >> 32), static_cast<DenseId>(key & 0xffffffffu));
    }
    return bin;
}

// Node count of the thresholded network for w = 1 .. max_weight + 1 (the last
// entry is always zero). Empty network -> empty curve.
inline std::vector<std::pair<int, std::size_t>> size_vs_threshold(const CoCitationNetwork& net) {
    std::vector<std::pair<int, std::size_t>> curve;
    if (net.edges.empty()) return curve;
    // a node survives threshold w iff its strongest incident edge has weight >= w
    std::unordered_map<DenseId, int> strongest;
    for (const auto& [key, w] : net.edges) {
        auto u = static_cast<DenseId>(key >> 32);
        auto v = static_cast<DenseId>(key & 0xffffffffu);
        strongest[u] = std::max(strongest[u], w);
        strongest[v] = std::max(strongest[v], w);
    }
    int wmax = net.max_weight();
    std::vector<std::size_t> count(static_cast<std::size_t>(wmax) + 1, 0);
    for (const auto& [node, w] : strongest) ++count[static_cast<std::size_t>(w)];
    std::size_t running = 0;
    std::vector<std::size_t> at_least(static_cast<std::size_t>(wmax) + 2, 0);
    for (int w = wmax; w >= 1; --w) {
        running += count[static_cast<std::size_t>(w)];
        at_least[static_cast<std::size_t>(w)] = running;
    }
    for (int w = 1; w <= wmax + 1; ++w)
        curve.emplace_back(w, at_least[static_cast<std::size_t>(w)]);
    return curve;
}

}  // namespace cocimap
