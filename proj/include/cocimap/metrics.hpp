#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cocimap/cocitation.hpp"
#include "cocimap/timeline.hpp"

namespace cocimap {

inline constexpr double kDefaultDecayRate = 0.23;
inline constexpr const char* kMultidisciplinaryCategory = "multidisciplinary sciences";

// Directed citation graph over the whole corpus. Repeated references collapse
// to one link; self-loops are dropped.
struct CitationGraph {
    std::unordered_map<DenseId, std::vector<DenseId>> out;  // citing -> sorted cited
    std::unordered_map<DenseId, std::vector<DenseId>> in;   // cited -> sorted citing
    std::unordered_map<DenseId, int> year;                  // known publication years

    bool has_citation(DenseId citing, DenseId cited) const {
        auto it = out.find(citing);
        if (it == out.end()) return false;
        return std::binary_search(it->second.begin(), it->second.end(), cited);
    }
};

inline CitationGraph build_citation_graph(const CorpusStore& store) {
    CitationGraph g;
    for (DenseId p = 0; p < store.size(); ++p) {
        const PaperRecord& rec = store.record(p);
        if (rec.year) g.year[p] = *rec.year;
        for (const auto& [cited_id, mult] : rec.refs) {
            DenseId cited = store.require(cited_id);
            if (cited == p) continue;
            g.out[p].push_back(cited);
            g.in[cited].push_back(p);
        }
    }
    auto dedup = [](std::unordered_map<DenseId, std::vector<DenseId>>& adj) {
        for (auto& [v, ns] : adj) {
            std::sort(ns.begin(), ns.end());
            ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
        }
    };
    dedup(g.out);
    dedup(g.in);
    return g;
}

// Internal directed-citation density: citations among members over
// |G|*(|G|-1). Lies in [0,1]; above 0.5 requires mutual citations.
inline double cohesion(const std::vector<DenseId>& members, const CitationGraph& cg) {
    if (members.size() < 2) throw std::invalid_argument("cohesion needs >= 2 members");
    std::size_t links = 0;
    for (DenseId i : members) {
        auto it = cg.out.find(i);
        if (it == cg.out.end()) continue;
        links += detail::intersection_size(it->second, members);
    }
    double n = static_cast<double>(members.size());
    return static_cast<double>(links) / (n * (n - 1.0));
}

struct EfficiencyResult {
    double value = 0.0;
    std::size_t citers = 0;              // qualifying outside citers
    std::size_t unknown_year_citers = 0; // excluded for missing publication year
};

// Exponentially time-discounted count of outside papers citing into the
// group, per member. A citer published in year t_i <= t contributes
// exp(-lambda*(t - t_i)) once, however many members it cites.
inline EfficiencyResult efficiency(const std::vector<DenseId>& members, int year,
                                   const CitationGraph& cg,
                                   double lambda = kDefaultDecayRate) {
    if (members.empty()) throw std::invalid_argument("efficiency of empty group");
    EfficiencyResult res;
    std::unordered_set<DenseId> seen;
    for (DenseId m : members) {
        auto it = cg.in.find(m);
        if (it == cg.in.end()) continue;
        for (DenseId citer : it->second) {
            if (std::binary_search(members.begin(), members.end(), citer)) continue;
            if (!seen.insert(citer).second) continue;
            auto yit = cg.year.find(citer);
            if (yit == cg.year.end()) {
                ++res.unknown_year_citers;
                continue;
            }
            if (yit->second > year) continue;
            res.value += std::exp(-lambda * static_cast<double>(year - yit->second));
            ++res.citers;
        }
    }
    res.value /= static_cast<double>(members.size());
    return res;
}

struct OverlapStat {
    std::size_t total_overlap = 0;
    double relative_total_overlap = 0.0;
};

// Per community: members that also belong to at least one other community of
// the same year.
inline std::vector<OverlapStat> overlap_stats(const CommunitySet& comms) {
    std::unordered_map<DenseId, int> membership_count;
    for (const auto& c : comms.communities)
        for (DenseId m : c) ++membership_count[m];
    std::vector<OverlapStat> out;
    out.reserve(comms.communities.size());
    for (const auto& c : comms.communities) {
        OverlapStat s;
        for (DenseId m : c)
            if (membership_count[m] > 1) ++s.total_overlap;
        s.relative_total_overlap =
            c.empty() ? 0.0 : static_cast<double>(s.total_overlap) / static_cast<double>(c.size());
        out.push_back(s);
    }
    return out;
}

struct GroupMetrics {
    int timeline_id = -1;
    int year = 0;
    std::size_t size = 0;
    double cohesion = 0.0;
    double efficiency = 0.0;
    std::size_t total_overlap = 0;
    double relative_total_overlap = 0.0;
};

inline std::vector<GroupMetrics> compute_group_metrics(
    const TimelineSet& set, const std::map<int, CommunitySet>& yearly, const CitationGraph& cg,
    double lambda = kDefaultDecayRate) {
    // per year: how many of that year's communities each node belongs to
    std::map<int, std::unordered_map<DenseId, int>> membership;
    for (const auto& [year, comms] : yearly)
        for (const auto& c : comms.communities)
            for (DenseId m : c) ++membership[year][m];
    std::vector<GroupMetrics> out;
    for (const Timeline& tl : set.timelines) {
        for (const auto& [year, state] : tl.states) {
            GroupMetrics m;
            m.timeline_id = tl.id;
            m.year = year;
            m.size = state.members.size();
            m.cohesion = state.members.size() >= 2 ? cohesion(state.members, cg) : 0.0;
            m.efficiency = efficiency(state.members, year, cg, lambda).value;
            auto mit = membership.find(year);
            if (mit != membership.end()) {
                for (DenseId member : state.members)
                    if (mit->second[member] > 1) ++m.total_overlap;
            }
            m.relative_total_overlap =
                m.size == 0 ? 0.0
                            : static_cast<double>(m.total_overlap) / static_cast<double>(m.size);
            out.push_back(m);
        }
    }
    return out;
}

// -- binning helpers ---------------------------------------------------------

struct BinnedCurve {
    std::vector<double> bin_low, bin_high, mean, stddev;
    std::vector<std::size_t> count;
};

// Exponential (power of two) bins over positive values.
inline std::size_t exp_bin(double v) {
    std::size_t b = 0;
    double edge = 2.0;
    while (v >= edge) {
        edge *= 2.0;
        ++b;
    }
    return b;
}

inline BinnedCurve bin_by_exponential(const std::vector<double>& x, const std::vector<double>& y) {
    BinnedCurve c;
    if (x.empty()) return c;
    std::map<std::size_t, std::vector<double>> groups;
    for (std::size_t i = 0; i < x.size(); ++i) groups[exp_bin(x[i])].push_back(y[i]);
    for (const auto& [b, vals] : groups) {
        double lo = std::pow(2.0, static_cast<double>(b));
        double mean = 0;
        for (double v : vals) mean += v;
        mean /= static_cast<double>(vals.size());
        double var = 0;
        for (double v : vals) var += (v - mean) * (v - mean);
        var /= static_cast<double>(vals.size());
        c.bin_low.push_back(b == 0 ? 1.0 : lo);
        c.bin_high.push_back(lo * 2.0);
        c.mean.push_back(mean);
        c.stddev.push_back(std::sqrt(var));
        c.count.push_back(vals.size());
    }
    return c;
}

// Equal-width histogram over [lo, hi]; the last bin is closed on the right.
inline std::vector<std::pair<double, std::size_t>> linear_histogram(const std::vector<double>& v,
                                                                    double lo, double hi,
                                                                    std::size_t bins) {
    std::vector<std::pair<double, std::size_t>> out;
    double width = (hi - lo) / static_cast<double>(bins);
    for (std::size_t b = 0; b < bins; ++b) out.emplace_back(lo + width * static_cast<double>(b), 0);
    for (double x : v) {
        if (x < lo || x > hi) continue;
        auto b = static_cast<std::size_t>((x - lo) / width);
        if (b >= bins) b = bins - 1;
        ++out[b].second;
    }
    return out;
}

struct LifecycleStats {
    std::map<int, std::size_t> lifespan_histogram;
    std::map<std::size_t, std::size_t> size_histogram;        // exponential bins, keyed by low edge
    std::vector<std::pair<double, std::size_t>> cohesion_histogram;  // linear bins
    std::map<std::size_t, std::size_t> efficiency_histogram;  // exponential bins of 1+eps floor
    BinnedCurve size_vs_lifespan;
    BinnedCurve size_vs_cohesion;
};

inline LifecycleStats lifecycle_stats(const TimelineSet& set,
                                      const std::vector<GroupMetrics>& metrics) {
    LifecycleStats s;
    std::unordered_map<int, int> lifespan_of;
    for (const Timeline& tl : set.timelines) {
        ++s.lifespan_histogram[tl.lifespan()];
        lifespan_of[tl.id] = tl.lifespan();
    }
    std::vector<double> sizes, cohesions, lifespans;
    for (const GroupMetrics& m : metrics) {
        auto b = exp_bin(static_cast<double>(m.size));
        ++s.size_histogram[static_cast<std::size_t>(1) << b];
        if (m.efficiency > 0.0)
            ++s.efficiency_histogram[static_cast<std::size_t>(1) << exp_bin(m.efficiency)];
        sizes.push_back(static_cast<double>(m.size));
        cohesions.push_back(m.cohesion);
        lifespans.push_back(static_cast<double>(lifespan_of[m.timeline_id]));
    }
    s.cohesion_histogram = linear_histogram(cohesions, 0.0, 1.0, 20);
    s.size_vs_lifespan = bin_by_exponential(sizes, lifespans);
    s.size_vs_cohesion = bin_by_exponential(sizes, cohesions);
    return s;
}

// -- multidisciplinarity -----------------------------------------------------

namespace detail {

inline bool has_category_info(const PaperRecord& r) { return !r.categories.empty(); }

inline bool is_multi(const PaperRecord& r, const std::string& cat) {
    return std::binary_search(r.categories.begin(), r.categories.end(), cat);
}

inline double category_fraction(const std::vector<DenseId>& papers, const CorpusStore& store,
                                const std::string& cat) {
    std::size_t with_info = 0, multi = 0;
    for (DenseId p : papers) {
        const PaperRecord& r = store.record(p);
        if (!has_category_info(r)) continue;
        ++with_info;
        if (is_multi(r, cat)) ++multi;
    }
    return with_info == 0 ? 0.0 : static_cast<double>(multi) / static_cast<double>(with_info);
}

}  // namespace detail

// Fraction of papers carrying `cat` among all papers published up to `year`
// (papers without category information excluded).
inline double multi_ratio_published_up_to(const CorpusStore& store, int year,
                                          const std::string& cat = kMultidisciplinaryCategory) {
    std::vector<DenseId> papers;
    for (const auto& [y, ids] : store.per_year_index()) {
        if (y > year) break;
        papers.insert(papers.end(), ids.begin(), ids.end());
    }
    return detail::category_fraction(papers, store, cat);
}

inline double multi_ratio_of_nodes(const std::vector<DenseId>& nodes, const CorpusStore& store,
                                   const std::string& cat = kMultidisciplinaryCategory) {
    return detail::category_fraction(nodes, store, cat);
}

inline std::vector<DenseId> community_members_union(const CommunitySet& comms) {
    std::vector<DenseId> all;
    for (const auto& c : comms.communities) all.insert(all.end(), c.begin(), c.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

// Ratio among nodes with at least one edge of weight >= w, per w.
inline std::vector<std::pair<int, double>> multidisciplinarity_vs_threshold(
    const CoCitationNetwork& net, const CorpusStore& store,
    const std::string& cat = kMultidisciplinaryCategory) {
    std::vector<std::pair<int, double>> curve;
    std::unordered_map<DenseId, int> strongest;
    for (const auto& [key, w] : net.edges) {
        auto u = static_cast<DenseId>(key >> 32);
        auto v = static_cast<DenseId>(key & 0xffffffffu);
        strongest[u] = std::max(strongest[u], w);
        strongest[v] = std::max(strongest[v], w);
    }
    for (int w = 1; w <= net.max_weight(); ++w) {
        std::vector<DenseId> nodes;
        for (const auto& [node, s] : strongest)
            if (s >= w) nodes.push_back(node);
        if (nodes.empty()) break;
        curve.emplace_back(w, detail::category_fraction(nodes, store, cat));
    }
    return curve;
}

// Top-3 categories of a timeline: candidates must appear on more than 10% of
// the members in more than 70% of the timeline's years; ranked by the mean of
// N_{t,c}/N_t over all years.
inline std::vector<std::pair<std::string, double>> top_categories(const Timeline& tl,
                                                                  const CorpusStore& store) {
    std::map<std::string, std::size_t> years_present;
    std::map<std::string, double> ratio_sum;
    std::size_t n_years = tl.states.size();
    for (const auto& [year, state] : tl.states) {
        std::map<std::string, std::size_t> counts;
        for (DenseId m : state.members)
            for (const auto& c : store.record(m).categories) ++counts[c];
        for (const auto& [cat, n] : counts) {
            double ratio = static_cast<double>(n) / static_cast<double>(state.members.size());
            ratio_sum[cat] += ratio;
            if (ratio > 0.1) ++years_present[cat];
        }
    }
    std::vector<std::pair<std::string, double>> passing;
    for (const auto& [cat, present] : years_present)
        if (static_cast<double>(present) > 0.7 * static_cast<double>(n_years))
            passing.emplace_back(cat, ratio_sum[cat] / static_cast<double>(n_years));
    std::sort(passing.begin(), passing.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (passing.size() > 3) passing.resize(3);
    return passing;
}

}  // namespace cocimap
