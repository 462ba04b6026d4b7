#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cocimap/cocitation.hpp"
#include "cocimap/corpus.hpp"
#include "cocimap/cpm.hpp"
#include "cocimap/threshold_opt.hpp"
#include "cocimap/timeline.hpp"

// Plain sorted text tables for every pipeline stage, written so reruns are
// byte-identical and golden-file diffs are possible.

namespace cocimap::io {

namespace fs = std::filesystem;

inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

inline std::uint64_t fnv1a64_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::uint64_t h = 1469598103934665603ull;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

inline std::ofstream open_out(const fs::path& p) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    return out;
}

inline std::ifstream open_in(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    return in;
}

inline std::vector<std::string> split_tab(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream iss(line);
    while (std::getline(iss, field, '\t')) out.push_back(field);
    return out;
}

// Sorted lexicographically on opaque ids; comma separated.
inline std::string member_list(const std::vector<DenseId>& members, const CorpusStore& store) {
    std::vector<std::string> ids;
    ids.reserve(members.size());
    for (DenseId m : members) ids.push_back(store.opaque_id(m));
    std::sort(ids.begin(), ids.end());
    std::string out;
    for (const auto& id : ids) {
        if (!out.empty()) out += ',';
        out += id;
    }
    return out;
}

inline std::vector<DenseId> parse_member_list(const std::string& field, const CorpusStore& store) {
    std::vector<DenseId> out;
    std::string id;
    std::istringstream iss(field);
    while (std::getline(iss, id, ',')) out.push_back(store.require(id));
    std::sort(out.begin(), out.end());
    return out;
}

// -- networks ----------------------------------------------------------------

inline void save_network(const CoCitationNetwork& net, const CorpusStore& store,
                         const fs::path& path) {
    struct Row {
        std::string a, b;
        int w;
    };
    std::vector<Row> rows;
    rows.reserve(net.edges.size());
    for (const auto& [key, w] : net.edges) {
        std::string a = store.opaque_id(static_cast<DenseId>(key >> 32));
        std::string b = store.opaque_id(static_cast<DenseId>(key & 0xffffffffu));
        if (b < a) std::swap(a, b);
        rows.push_back({std::move(a), std::move(b), w});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });
    auto out = open_out(path);
    for (const auto& r : rows) out << r.a << '\t' << r.b << '\t' << r.w << '\n';
}

inline CoCitationNetwork load_network(const fs::path& path, const CorpusStore& store, int year) {
    CoCitationNetwork net;
    net.year = year;
    auto in = open_in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split_tab(line);
        if (f.size() != 3) throw std::runtime_error("bad edge line in " + path.string());
        net.edges[detail::pair_key(store.require(f[0]), store.require(f[1]))] = std::stoi(f[2]);
    }
    return net;
}

// -- threshold scans ---------------------------------------------------------

inline void save_scan(const ThresholdScan& scan, const fs::path& path) {
    auto out = open_out(path);
    out << "w\tn_communities\tlargest\tsecond_largest\tclustered_nodes\tsizes\tapproximate\n";
    for (const auto& e : scan.entries) {
        std::string sizes;
        for (std::size_t s : e.sizes) {
            if (!sizes.empty()) sizes += ',';
            sizes += std::to_string(s);
        }
        out << e.w << '\t' << e.n_communities << '\t' << e.largest << '\t' << e.second_largest
            << '\t' << e.clustered_nodes << '\t' << sizes << '\t' << (e.approximate ? 1 : 0)
            << '\n';
    }
}

inline void save_selected_thresholds(const std::map<int, int>& selected, const fs::path& path) {
    auto out = open_out(path);
    out << "year\tw\n";
    for (const auto& [year, w] : selected) out << year << '\t' << w << '\n';
}

inline std::map<int, int> load_selected_thresholds(const fs::path& path) {
    std::map<int, int> out;
    auto in = open_in(path);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split_tab(line);
        out[std::stoi(f[0])] = std::stoi(f[1]);
    }
    return out;
}

// -- communities -------------------------------------------------------------

inline void save_communities(const std::map<int, CommunitySet>& yearly, const CorpusStore& store,
                             const fs::path& path) {
    auto out = open_out(path);
    out << "year\tindex\tmembers\n";
    for (const auto& [year, comms] : yearly)
        for (std::size_t i = 0; i < comms.communities.size(); ++i)
            out << year << '\t' << i << '\t' << member_list(comms.communities[i], store) << '\n';
}

inline std::map<int, CommunitySet> load_communities(const fs::path& path, const CorpusStore& store,
                                                    int k) {
    std::map<int, CommunitySet> out;
    auto in = open_in(path);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split_tab(line);
        int year = std::stoi(f[0]);
        auto& comms = out[year];
        comms.year = year;
        comms.k = k;
        comms.communities.push_back(parse_member_list(f[2], store));
    }
    for (auto& [year, comms] : out)
        std::sort(comms.communities.begin(), comms.communities.end());
    return out;
}

// -- timelines ---------------------------------------------------------------

inline void save_timelines(const TimelineSet& set, const CorpusStore& store, const fs::path& dir) {
    {
        auto out = open_out(dir / "timelines.tsv");
        out << "timeline_id\tyear\tmembers\n";
        for (const auto& tl : set.timelines)
            for (const auto& [year, state] : tl.states)
                out << tl.id << '\t' << year << '\t' << member_list(state.members, store) << '\n';
    }
    {
        auto out = open_out(dir / "events.tsv");
        out << "type\tyear\tfrom_timeline\tto_timeline\n";
        for (const auto& e : set.events)
            out << (e.type == TimelineEvent::Type::split ? "split" : "merge") << '\t' << e.year
                << '\t' << e.from_timeline << '\t' << e.to_timeline << '\n';
    }
    {
        auto out = open_out(dir / "match_log.tsv");
        out << "year\tfrom_index\tto_index\tmerged_index\tjaccard\n";
        for (const auto& m : set.match_log)
            out << m.year << '\t' << m.from_index << '\t' << m.to_index << '\t' << m.merged_index
                << '\t' << fmt_double(m.jaccard) << '\n';
    }
    if (!set.warnings.empty()) {
        auto out = open_out(dir / "warnings.txt");
        for (const auto& w : set.warnings) out << w << '\n';
    }
}

inline TimelineSet load_timelines(const fs::path& path, const CorpusStore& store) {
    TimelineSet set;
    std::map<int, Timeline> by_id;
    auto in = open_in(path);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split_tab(line);
        int id = std::stoi(f[0]);
        int year = std::stoi(f[1]);
        Timeline& tl = by_id[id];
        tl.id = id;
        GroupState state;
        state.year = year;
        state.timeline_id = id;
        state.members = parse_member_list(f[2], store);
        tl.states[year] = std::move(state);
    }
    for (auto& [id, tl] : by_id) {
        tl.birth_year = tl.states.begin()->first;
        tl.death_year = tl.states.rbegin()->first;
        set.timelines.push_back(std::move(tl));
    }
    return set;
}

inline void save_transitions(const std::vector<TransitionEdge>& edges, const CorpusStore& store,
                             const fs::path& path) {
    auto out = open_out(path);
    out << "from_timeline\tto_timeline\tyear\tsize\tmembers\n";
    for (const auto& e : edges)
        out << e.from_timeline << '\t' << e.to_timeline << '\t' << e.year << '\t'
            << e.moved.size() << '\t' << member_list(e.moved, store) << '\n';
}

}  // namespace cocimap::io
