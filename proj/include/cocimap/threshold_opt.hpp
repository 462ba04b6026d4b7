#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cocimap/cpm.hpp"

namespace cocimap {

struct ThresholdEntry {
    int w = 1;
    std::size_t n_communities = 0;
    std::vector<std::size_t> sizes;  // descending
    std::size_t largest = 0;
    std::size_t second_largest = 0;
    std::size_t clustered_nodes = 0;  // distinct nodes in >= 1 community
    bool approximate = false;
};

struct ThresholdScan {
    int year = 0;
    int k = 4;
    std::vector<ThresholdEntry> entries;  // ascending w
};

enum class ThresholdCriterion { ratio2, entropy };

// Run CPM at every threshold of the range (default [1, max weight]), with
// early exit once the thresholded network is empty.
inline ThresholdScan scan_thresholds(const CoCitationNetwork& net, int k, int w_lo = 1,
                                     int w_hi = 0, std::uint64_t budget = 0) {
    if (w_lo < 1) throw std::invalid_argument("w_lo must be >= 1");
    if (w_hi <= 0) w_hi = std::max(net.max_weight(), w_lo);
    if (w_hi < w_lo) throw std::invalid_argument("empty threshold range");
    ThresholdScan scan;
    scan.year = net.year;
    scan.k = k;
    for (int w = w_lo; w <= w_hi; ++w) {
        BinaryNetwork bin = threshold(net, w);
        ThresholdEntry e;
        e.w = w;
        if (bin.node_count() > 0) {
            CommunitySet comms = k_clique_communities(bin, k, budget);
            e.approximate = comms.approximate;
            e.n_communities = comms.communities.size();
            std::vector<DenseId> clustered;
            for (const auto& c : comms.communities) {
                e.sizes.push_back(c.size());
                clustered.insert(clustered.end(), c.begin(), c.end());
            }
            std::sort(e.sizes.begin(), e.sizes.end(), std::greater<>());
            std::sort(clustered.begin(), clustered.end());
            clustered.erase(std::unique(clustered.begin(), clustered.end()), clustered.end());
            e.clustered_nodes = clustered.size();
            e.largest = e.sizes.empty() ? 0 : e.sizes.front();
            e.second_largest = e.sizes.size() >= 2 ? e.sizes[1] : 0;
        }
        scan.entries.push_back(std::move(e));
        if (bin.node_count() == 0) break;
    }
    return scan;
}

namespace detail {

inline double size_entropy(const std::vector<std::size_t>& sizes) {
    double total = 0;
    for (std::size_t s : sizes) total += static_cast<double>(s);
    double h = 0;
    for (std::size_t s : sizes) {
        double p = static_cast<double>(s) / total;
        h -= p * std::log(p);
    }
    return h;
}

}  // namespace detail

// Smallest w whose largest community is at most twice the second largest
// (both nonzero). Falls back to the w maximizing the Shannon entropy of the
// community size distribution; ties break toward smaller w.
inline int select_threshold(const ThresholdScan& scan,
                            ThresholdCriterion criterion = ThresholdCriterion::ratio2) {
    if (scan.entries.empty()) throw std::invalid_argument("empty scan");
    if (criterion == ThresholdCriterion::ratio2) {
        for (const auto& e : scan.entries)
            if (e.second_largest > 0 && e.largest <= 2 * e.second_largest) return e.w;
    }
    int best_w = 0;
    double best_h = -1.0;
    for (const auto& e : scan.entries) {
        if (e.n_communities == 0) continue;
        double h = detail::size_entropy(e.sizes);
        if (h > best_h) {
            best_h = h;
            best_w = e.w;
        }
    }
    if (best_w == 0) throw std::runtime_error("no communities at any threshold");
    return best_w;
}

}  // namespace cocimap
