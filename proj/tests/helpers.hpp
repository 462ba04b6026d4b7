#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cocimap/cocitation.hpp"
#include "cocimap/corpus.hpp"
#include "cocimap/synthetic.hpp"

namespace helpers {

// Fluent builder for tiny corpora used all over the tests.
class Corpus {
public:
    Corpus& add(const std::string& id, int year, const std::vector<std::string>& refs = {},
                const std::string& title = "", const std::vector<std::string>& categories = {},
                const std::vector<std::string>& keywords_plus = {}) {
        nlohmann::ordered_json j;
        j["id"] = id;
        j["year"] = year;
        if (!title.empty()) j["title"] = title;
        if (!categories.empty()) j["categories"] = categories;
        if (!keywords_plus.empty()) j["keywords_plus"] = keywords_plus;
        j["refs"] = refs;
        lines_ += j.dump() + "\n";
        return *this;
    }

    Corpus& raw(const std::string& line) {
        lines_ += line + "\n";
        return *this;
    }

    const std::string& text() const { return lines_; }

    cocimap::CorpusStore parse(int year_min = 0, int year_max = 9999, bool strict = false,
                               cocimap::ParseReport* report = nullptr) const {
        std::istringstream in(lines_);
        return cocimap::parse_corpus(in, {year_min, year_max, strict}, report);
    }

private:
    std::string lines_;
};

// Binary network over small integer node ids.
inline cocimap::BinaryNetwork net_from_edges(
    const std::vector<std::pair<cocimap::DenseId, cocimap::DenseId>>& edges, int year = 2000) {
    cocimap::BinaryNetwork g;
    g.year = year;
    for (const auto& [u, v] : edges) g.add_edge(u, v);
    return g;
}

inline void add_clique(cocimap::BinaryNetwork& g, const std::vector<cocimap::DenseId>& nodes) {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if (!g.has_edge(nodes[i], nodes[j])) g.add_edge(nodes[i], nodes[j]);
}

inline cocimap::BinaryNetwork random_graph(cocimap::synthetic::Rng& rng, std::size_t n,
                                           double p, int year = 2000) {
    cocimap::BinaryNetwork g;
    g.year = year;
    for (cocimap::DenseId u = 0; u < n; ++u)
        for (cocimap::DenseId v = u + 1; v < n; ++v)
            if (rng.chance(p)) g.add_edge(u, v);
    return g;
}

// Weighted network built directly from an edge triple list.
inline cocimap::CoCitationNetwork weighted_net(
    const std::vector<std::tuple<cocimap::DenseId, cocimap::DenseId, int>>& edges,
    int year = 2000) {
    cocimap::CoCitationNetwork net;
    net.year = year;
    for (const auto& [u, v, w] : edges) net.edges[cocimap::detail::pair_key(u, v)] = w;
    return net;
}

// Recursive byte comparison of two directory trees; returns a description of
// the first difference, or empty when identical.
inline std::string compare_trees(const std::filesystem::path& a, const std::filesystem::path& b) {
    namespace fs = std::filesystem;
    auto listing = [](const fs::path& root) {
        std::vector<fs::path> rel;
        for (const auto& e : fs::recursive_directory_iterator(root))
            if (e.is_regular_file()) rel.push_back(fs::relative(e.path(), root));
        std::sort(rel.begin(), rel.end());
        return rel;
    };
    auto la = listing(a), lb = listing(b);
    if (la != lb) return "file lists differ";
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    for (const auto& rel : la)
        if (slurp(a / rel) != slurp(b / rel)) return "content differs: " + rel.string();
    return "";
}

}  // namespace helpers
