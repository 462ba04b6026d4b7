#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cocimap/cpm.hpp"

namespace cocimap {

struct GroupState {
    int year = 0;
    std::vector<DenseId> members;  // sorted
    int timeline_id = -1;
    int source_community_index = -1;  // index into that year's CommunitySet
};

struct Timeline {
    int id = -1;
    int birth_year = 0;
    int death_year = 0;
    std::map<int, GroupState> states;  // contiguous [birth_year, death_year]

    int lifespan() const { return death_year - birth_year + 1; }
};

struct MatchRecord {
    int year = 0;  // source side (t)
    int from_index = -1;
    int to_index = -1;
    int merged_index = -1;
    double jaccard = 0.0;
};

struct TimelineEvent {
    enum class Type { split, merge };
    Type type;
    int year = 0;  // source side (t)
    int from_timeline = -1;
    int to_timeline = -1;
};

struct TransitionEdge {
    int from_timeline = -1;
    int to_timeline = -1;
    int year = 0;  // source side (t)
    std::vector<DenseId> moved;
};

inline double jaccard(const std::vector<DenseId>& a, const std::vector<DenseId>& b) {
    if (a.empty() && b.empty()) throw std::invalid_argument("jaccard of two empty sets");
    std::size_t inter = detail::intersection_size(a, b);
    std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

// Union of two thresholded yearly networks.
inline BinaryNetwork merge_networks(const BinaryNetwork& a, const BinaryNetwork& b) {
    BinaryNetwork merged = a;
    merged.year = a.year;
    for (const auto& [v, ns] : b.adj)
        for (DenseId u : ns)
            if (v < u && !merged.has_edge(v, u)) merged.add_edge(v, u);
    return merged;
}

struct MatchResult {
    std::vector<MatchRecord> matches;  // ordered as accepted by the greedy pass
    std::vector<int> deaths;           // unmatched indices of year t
    std::vector<int> births;           // unmatched indices of year t+1
    std::vector<std::string> warnings; // containment violations etc.
};

namespace detail {

// Index of the merged community best containing `members`. Exact CPM
// guarantees full containment; anything less is reported to the caller.
inline int containing_module(const std::vector<DenseId>& members, const CommunitySet& merged,
                             bool* fully_contained) {
    int best = -1;
    std::size_t best_overlap = 0;
    for (std::size_t i = 0; i < merged.communities.size(); ++i) {
        std::size_t ov = intersection_size(members, merged.communities[i]);
        if (ov > best_overlap) {
            best_overlap = ov;
            best = static_cast<int>(i);
        }
    }
    if (fully_contained) *fully_contained = best >= 0 && best_overlap == members.size();
    return best;
}

}  // namespace detail

// Greedy highest-Jaccard matching of year-t modules to year-t+1 modules,
// restricted to pairs inside the same merged-network module. Ties break by
// (smaller from-index, smaller to-index). Only positive overlaps match.
inline MatchResult match_adjacent(const CommunitySet& comms_t, const CommunitySet& comms_t1,
                                  const CommunitySet& merged) {
    MatchResult result;
    std::vector<int> home_t(comms_t.communities.size(), -1);
    std::vector<int> home_t1(comms_t1.communities.size(), -1);
    auto assign_homes = [&](const CommunitySet& comms, std::vector<int>& home, int year) {
        for (std::size_t i = 0; i < comms.communities.size(); ++i) {
            bool contained = false;
            home[i] = detail::containing_module(comms.communities[i], merged, &contained);
            if (!contained)
                result.warnings.push_back("module " + std::to_string(i) + " of year " +
                                          std::to_string(year) +
                                          " not fully contained in a merged module");
        }
    };
    assign_homes(comms_t, home_t, comms_t.year);
    assign_homes(comms_t1, home_t1, comms_t1.year);

    struct Pair {
        double j;
        int merged_index;
        int from;
        int to;
    };
    std::vector<Pair> pairs;
    for (std::size_t a = 0; a < comms_t.communities.size(); ++a) {
        for (std::size_t b = 0; b < comms_t1.communities.size(); ++b) {
            if (home_t[a] < 0 || home_t[a] != home_t1[b]) continue;
            double j = jaccard(comms_t.communities[a], comms_t1.communities[b]);
            if (j > 0.0)
                pairs.push_back({j, home_t[a], static_cast<int>(a), static_cast<int>(b)});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
        if (x.j != y.j) return x.j > y.j;
        if (x.from != y.from) return x.from < y.from;
        return x.to < y.to;
    });

    std::vector<char> taken_t(comms_t.communities.size(), 0);
    std::vector<char> taken_t1(comms_t1.communities.size(), 0);
    for (const auto& p : pairs) {
        if (taken_t[static_cast<std::size_t>(p.from)] || taken_t1[static_cast<std::size_t>(p.to)])
            continue;
        taken_t[static_cast<std::size_t>(p.from)] = 1;
        taken_t1[static_cast<std::size_t>(p.to)] = 1;
        result.matches.push_back({comms_t.year, p.from, p.to, p.merged_index, p.j});
    }
    for (std::size_t a = 0; a < comms_t.communities.size(); ++a)
        if (!taken_t[a]) result.deaths.push_back(static_cast<int>(a));
    for (std::size_t b = 0; b < comms_t1.communities.size(); ++b)
        if (!taken_t1[b]) result.births.push_back(static_cast<int>(b));
    return result;
}

struct TimelineSet {
    std::vector<Timeline> timelines;     // ordered by id
    std::vector<TimelineEvent> events;
    std::vector<MatchRecord> match_log;
    std::vector<std::string> warnings;
};

// Chain yearly community sets over a contiguous year range into timelines.
// Merged networks are clustered with the same k as the yearly runs.
inline TimelineSet build_timelines(const std::map<int, CommunitySet>& yearly,
                                   const std::map<int, BinaryNetwork>& nets,
                                   std::uint64_t budget = 0) {
    TimelineSet out;
    if (yearly.empty()) return out;
    for (const auto& [year, comms] : yearly)
        if (year != yearly.begin()->first && yearly.find(year - 1) == yearly.end())
            throw std::invalid_argument("year range must be contiguous");

    auto new_timeline = [&](int year, const std::vector<DenseId>& members, int source) {
        Timeline t;
        t.id = static_cast<int>(out.timelines.size());
        t.birth_year = t.death_year = year;
        t.states[year] = {year, members, t.id, source};
        out.timelines.push_back(std::move(t));
        return out.timelines.back().id;
    };

    int first_year = yearly.begin()->first;
    // community index -> timeline id, for the currently processed year
    std::vector<int> owner(yearly.at(first_year).communities.size());
    for (std::size_t i = 0; i < owner.size(); ++i)
        owner[i] = new_timeline(first_year, yearly.at(first_year).communities[i],
                                static_cast<int>(i));

    for (auto it = yearly.begin(); std::next(it) != yearly.end(); ++it) {
        int t = it->first;
        const CommunitySet& comms_t = it->second;
        const CommunitySet& comms_t1 = std::next(it)->second;
        BinaryNetwork merged_net = merge_networks(nets.at(t), nets.at(t + 1));
        CommunitySet merged = k_clique_communities(merged_net, comms_t.k, budget);
        MatchResult mr = match_adjacent(comms_t, comms_t1, merged);
        out.warnings.insert(out.warnings.end(), mr.warnings.begin(), mr.warnings.end());
        out.match_log.insert(out.match_log.end(), mr.matches.begin(), mr.matches.end());

        std::vector<int> next_owner(comms_t1.communities.size(), -1);
        for (const auto& m : mr.matches) {
            int tid = owner[static_cast<std::size_t>(m.from_index)];
            Timeline& tl = out.timelines[static_cast<std::size_t>(tid)];
            tl.death_year = t + 1;
            tl.states[t + 1] = {t + 1, comms_t1.communities[static_cast<std::size_t>(m.to_index)],
                                tid, m.to_index};
            next_owner[static_cast<std::size_t>(m.to_index)] = tid;
        }
        std::vector<int> born_timelines;
        for (int b : mr.births) {
            int tid = new_timeline(t + 1, comms_t1.communities[static_cast<std::size_t>(b)], b);
            next_owner[static_cast<std::size_t>(b)] = tid;
            born_timelines.push_back(tid);
        }

        // split: a timeline alive at t sheds members into a newborn module
        for (std::size_t a = 0; a < comms_t.communities.size(); ++a) {
            int tid = owner[a];
            for (int btid : born_timelines) {
                const auto& birth_members =
                    out.timelines[static_cast<std::size_t>(btid)].states.at(t + 1).members;
                if (detail::intersection_size(comms_t.communities[a], birth_members) > 0)
                    out.events.push_back({TimelineEvent::Type::split, t, tid, btid});
            }
        }
        // merge: a dying timeline's members flow into another surviving timeline
        for (int d : mr.deaths) {
            int tid = owner[static_cast<std::size_t>(d)];
            for (std::size_t b = 0; b < comms_t1.communities.size(); ++b) {
                int other = next_owner[b];
                if (other == tid) continue;
                bool other_is_birth =
                    std::find(born_timelines.begin(), born_timelines.end(), other) !=
                    born_timelines.end();
                if (other_is_birth) continue;  // counted as a split of some timeline
                if (detail::intersection_size(comms_t.communities[static_cast<std::size_t>(d)],
                                              comms_t1.communities[b]) > 0)
                    out.events.push_back({TimelineEvent::Type::merge, t, tid, other});
            }
        }
        owner = std::move(next_owner);
    }
    return out;
}

// Articles that are members of one timeline at t and of a different timeline
// at t+1. With strict_moves, articles still present in the source timeline at
// t+1 are not counted.
inline std::vector<TransitionEdge> detect_transitions(const TimelineSet& set,
                                                      bool strict_moves = false) {
    std::vector<TransitionEdge> out;
    for (const Timeline& from : set.timelines) {
        for (const auto& [t, state] : from.states) {
            const GroupState* stay = nullptr;
            auto next_it = from.states.find(t + 1);
            if (next_it != from.states.end()) stay = &next_it->second;
            for (const Timeline& to : set.timelines) {
                if (to.id == from.id) continue;
                auto target_it = to.states.find(t + 1);
                if (target_it == to.states.end()) continue;
                std::vector<DenseId> moved;
                std::set_intersection(state.members.begin(), state.members.end(),
                                      target_it->second.members.begin(),
                                      target_it->second.members.end(),
                                      std::back_inserter(moved));
                if (strict_moves && stay) {
                    std::vector<DenseId> filtered;
                    std::set_difference(moved.begin(), moved.end(), stay->members.begin(),
                                        stay->members.end(), std::back_inserter(filtered));
                    moved = std::move(filtered);
                }
                if (!moved.empty()) out.push_back({from.id, to.id, t, std::move(moved)});
            }
        }
    }
    return out;
}

}  // namespace cocimap
