#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "cocimap/cliques.hpp"

namespace cocimap {

// Overlapping k-clique percolation communities of one year's binary network.
struct CommunitySet {
    int year = 0;
    int k = 4;
    std::vector<std::vector<DenseId>> communities;  // each sorted; canonical order
    bool approximate = false;
};

namespace detail {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<std::size_t>(b)] = a;
    }
};

inline std::size_t intersection_size(const std::vector<DenseId>& a, const std::vector<DenseId>& b) {
    std::size_t n = 0, i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) ++i;
        else if (a[i] > b[j]) ++j;
        else { ++n; ++i; ++j; }
    }
    return n;
}

inline std::vector<std::vector<DenseId>> components_to_communities(
    const std::vector<std::vector<DenseId>>& cliques, UnionFind& uf) {
    std::map<int, std::vector<DenseId>> merged;
    for (std::size_t i = 0; i < cliques.size(); ++i) {
        auto& m = merged[uf.find(static_cast<int>(i))];
        m.insert(m.end(), cliques[i].begin(), cliques[i].end());
    }
    std::vector<std::vector<DenseId>> out;
    out.reserve(merged.size());
    for (auto& [root, members] : merged) {
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        out.push_back(std::move(members));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

// Communities = connected components of the overlap graph of maximal cliques
// of size >= k, where two cliques connect iff they share >= k-1 nodes. Each
// community is the union of its cliques' nodes.
inline CommunitySet k_clique_communities(const BinaryNetwork& g, int k, std::uint64_t budget = 0) {
    if (k < 3) throw std::invalid_argument("k must be >= 3");
    CliqueSet cliques = enumerate_maximal_cliques(g, static_cast<std::size_t>(k), budget);
    CommunitySet out;
    out.year = g.year;
    out.k = k;
    out.approximate = cliques.approximate;
    detail::UnionFind uf(cliques.cliques.size());
    for (std::size_t i = 0; i < cliques.cliques.size(); ++i)
        for (std::size_t j = i + 1; j < cliques.cliques.size(); ++j)
            if (detail::intersection_size(cliques.cliques[i], cliques.cliques[j]) >=
                static_cast<std::size_t>(k - 1))
                uf.unite(static_cast<int>(i), static_cast<int>(j));
    out.communities = detail::components_to_communities(cliques.cliques, uf);
    return out;
}

// Test oracle: enumerate every k-clique directly and percolate via shared
// (k-1)-subsets. Guarded to tiny graphs.
inline CommunitySet communities_brute_force(const BinaryNetwork& g, int k) {
    if (k < 3) throw std::invalid_argument("k must be >= 3");
    if (g.node_count() > 20) throw std::invalid_argument("brute force limited to <= 20 nodes");
    auto nodes = g.node_list();
    std::size_t n = nodes.size();

    std::vector<std::vector<DenseId>> kcliques;
    std::vector<DenseId> pick;
    auto recurse = [&](auto&& self, std::size_t start) -> void {
        if (pick.size() == static_cast<std::size_t>(k)) {
            kcliques.push_back(pick);
            return;
        }
        for (std::size_t i = start; i < n; ++i) {
            bool ok = true;
            for (DenseId u : pick)
                if (!g.has_edge(u, nodes[i])) { ok = false; break; }
            if (!ok) continue;
            pick.push_back(nodes[i]);
            self(self, i + 1);
            pick.pop_back();
        }
    };
    recurse(recurse, 0);

    detail::UnionFind uf(kcliques.size());
    // two distinct k-cliques are adjacent iff they share exactly k-1 nodes,
    // i.e. both contain a common (k-1)-subset
    std::map<std::vector<DenseId>, int> seen;
    for (std::size_t i = 0; i < kcliques.size(); ++i) {
        for (std::size_t drop = 0; drop < kcliques[i].size(); ++drop) {
            std::vector<DenseId> sub;
            for (std::size_t j = 0; j < kcliques[i].size(); ++j)
                if (j != drop) sub.push_back(kcliques[i][j]);
            auto [it, inserted] = seen.emplace(std::move(sub), static_cast<int>(i));
            if (!inserted) uf.unite(it->second, static_cast<int>(i));
        }
    }

    CommunitySet out;
    out.year = g.year;
    out.k = k;
    out.communities = detail::components_to_communities(kcliques, uf);
    return out;
}

}  // namespace cocimap
