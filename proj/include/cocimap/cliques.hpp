#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "cocimap/cocitation.hpp"

namespace cocimap {

struct CliqueSet {
    std::vector<std::vector<DenseId>> cliques;  // each sorted; canonical order
    bool approximate = false;                   // budget was exhausted
};

namespace detail {

// Compact-index view of a BinaryNetwork for clique search.
struct CompactGraph {
    std::vector<DenseId> label;             // compact index -> dense id
    std::vector<std::vector<int>> adj;      // sorted

    explicit CompactGraph(const BinaryNetwork& g) {
        label = g.node_list();
        adj.resize(label.size());
        std::vector<int> index_of;  // dense ids are sorted in node_list
        for (std::size_t i = 0; i < label.size(); ++i) {
            const auto& ns = g.adj.at(label[i]);
            adj[i].reserve(ns.size());
            for (DenseId n : ns) {
                auto it = std::lower_bound(label.begin(), label.end(), n);
                adj[i].push_back(static_cast<int>(it - label.begin()));
            }
        }
    }

    bool connected(int u, int v) const {
        return std::binary_search(adj[u].begin(), adj[u].end(), v);
    }

    std::size_t size() const { return label.size(); }
};

// Smallest-last (degeneracy) ordering, bucket queue with lazy deletion.
inline std::vector<int> degeneracy_order(const std::vector<std::vector<int>>& adj) {
    std::size_t n = adj.size();
    std::vector<int> degree(n);
    std::vector<char> removed(n, 0);
    std::size_t maxdeg = 0;
    for (std::size_t i = 0; i < n; ++i) {
        degree[i] = static_cast<int>(adj[i].size());
        maxdeg = std::max(maxdeg, adj[i].size());
    }
    std::vector<std::vector<int>> buckets(maxdeg + 1);
    for (std::size_t i = 0; i < n; ++i)
        buckets[static_cast<std::size_t>(degree[i])].push_back(static_cast<int>(i));
    std::vector<int> order;
    order.reserve(n);
    while (order.size() < n) {
        int v = -1;
        for (auto& bucket : buckets) {
            while (!bucket.empty()) {
                int cand = bucket.back();
                std::size_t d = static_cast<std::size_t>(&bucket - buckets.data());
                if (removed[static_cast<std::size_t>(cand)] ||
                    degree[static_cast<std::size_t>(cand)] != static_cast<int>(d)) {
                    bucket.pop_back();
                    continue;
                }
                bucket.pop_back();
                v = cand;
                break;
            }
            if (v >= 0) break;
        }
        removed[static_cast<std::size_t>(v)] = 1;
        order.push_back(v);
        for (int u : adj[static_cast<std::size_t>(v)]) {
            auto ui = static_cast<std::size_t>(u);
            if (removed[ui]) continue;
            --degree[ui];
            buckets[static_cast<std::size_t>(degree[ui])].push_back(u);
        }
    }
    return order;
}

struct BronKerbosch {
    const CompactGraph& g;
    std::size_t min_size;
    std::uint64_t budget;    // 0 = unlimited
    std::uint64_t work = 0;
    bool exhausted = false;
    std::vector<std::vector<int>> found;
    std::vector<int> current;

    BronKerbosch(const CompactGraph& g_, std::size_t min_size_, std::uint64_t budget_)
        : g(g_), min_size(min_size_), budget(budget_) {}

    void expand(std::vector<int> cand, std::vector<int> excl) {
        if (budget && ++work > budget) {
            exhausted = true;
            return;
        }
        if (cand.empty() && excl.empty()) {
            if (current.size() >= min_size) found.push_back(current);
            return;
        }
        // pivot: vertex of cand ∪ excl with most neighbors in cand
        int pivot = -1;
        std::size_t best = 0;
        auto consider = [&](int u) {
            std::size_t cnt = 0;
            for (int v : cand)
                if (g.connected(u, v)) ++cnt;
            if (pivot < 0 || cnt > best) {
                pivot = u;
                best = cnt;
            }
        };
        for (int u : cand) consider(u);
        for (int u : excl) consider(u);

        std::vector<int> branch;
        for (int v : cand)
            if (!g.connected(pivot, v)) branch.push_back(v);

        for (int v : branch) {
            std::vector<int> cand2, excl2;
            for (int u : cand)
                if (g.connected(v, u)) cand2.push_back(u);
            for (int u : excl)
                if (g.connected(v, u)) excl2.push_back(u);
            current.push_back(v);
            expand(std::move(cand2), std::move(excl2));
            current.pop_back();
            if (exhausted) return;
            cand.erase(std::find(cand.begin(), cand.end(), v));
            excl.push_back(v);
        }
    }
};

}  // namespace detail

// All maximal cliques of size >= min_size (Bron-Kerbosch with pivoting, outer
// level over the degeneracy order). A nonzero budget caps the number of
// recursive expansions; on exhaustion the cliques found so far are returned
// with approximate = true.
inline CliqueSet enumerate_maximal_cliques(const BinaryNetwork& g, std::size_t min_size,
                                           std::uint64_t budget = 0) {
    detail::CompactGraph cg(g);
    CliqueSet out;
    if (cg.size() == 0) return out;

    auto order = detail::degeneracy_order(cg.adj);
    std::vector<int> pos(cg.size());
    for (std::size_t i = 0; i < order.size(); ++i) pos[static_cast<std::size_t>(order[i])] = static_cast<int>(i);

    detail::BronKerbosch bk(cg, min_size, budget);
    for (int v : order) {
        std::vector<int> cand, excl;
        for (int u : cg.adj[static_cast<std::size_t>(v)]) {
            if (pos[static_cast<std::size_t>(u)] > pos[static_cast<std::size_t>(v)])
                cand.push_back(u);
            else
                excl.push_back(u);
        }
        bk.current.assign(1, v);
        bk.expand(std::move(cand), std::move(excl));
        if (bk.exhausted) break;
    }

    out.approximate = bk.exhausted;
    out.cliques.reserve(bk.found.size());
    for (const auto& c : bk.found) {
        std::vector<DenseId> labeled;
        labeled.reserve(c.size());
        for (int v : c) labeled.push_back(cg.label[static_cast<std::size_t>(v)]);
        std::sort(labeled.begin(), labeled.end());
        out.cliques.push_back(std::move(labeled));
    }
    std::sort(out.cliques.begin(), out.cliques.end());
    return out;
}

}  // namespace cocimap
