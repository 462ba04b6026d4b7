#include <doctest.h>

#include <map>
#include <set>

#include "cocimap/cocitation.hpp"
#include "helpers.hpp"

using namespace cocimap;

namespace {

int weight_of(const CoCitationNetwork& net, const CorpusStore& s, const std::string& a,
              const std::string& b) {
    auto it = net.edges.find(detail::pair_key(s.require(a), s.require(b)));
    return it == net.edges.end() ? 0 : it->second;
}

}  // namespace

TEST_CASE("two co-citing papers produce weight 2") {
    auto store = helpers::Corpus()
                     .add("p1", 2000, {"a", "b"})
                     .add("p2", 2000, {"a", "b"})
                     .parse();
    auto net = build_yearly_network(store, 2000);
    CHECK(net.edge_count() == 1);
    CHECK(weight_of(net, store, "a", "b") == 2);
}

TEST_CASE("reference multiplicity does not create self-pairs or extra weight") {
    auto store = helpers::Corpus().add("p", 2000, {"a", "a", "b"}).parse();
    auto net = build_yearly_network(store, 2000);
    CHECK(net.edge_count() == 1);
    CHECK(weight_of(net, store, "a", "b") == 1);
    CHECK(net.edges.count(detail::pair_key(store.require("a"), store.require("a"))) == 0);
}

TEST_CASE("self-citation keeps the citing paper in the pair set") {
    auto store = helpers::Corpus().add("p", 2000, {"p", "b"}).parse();
    auto net = build_yearly_network(store, 2000);
    CHECK(net.edge_count() == 1);
    CHECK(weight_of(net, store, "p", "b") == 1);
}

TEST_CASE("year with no co-citing papers yields an empty network") {
    auto store = helpers::Corpus().add("p", 2000, {"a"}).parse();
    CHECK(build_yearly_network(store, 2000).edge_count() == 0);
    CHECK_THROWS_AS(build_yearly_network(store, 12000), std::invalid_argument);
}

TEST_CASE("threshold keeps edges at or above w") {
    auto net = helpers::weighted_net({{0, 1, 1}, {1, 2, 2}, {2, 3, 5}});
    SUBCASE("w=1 keeps everything") {
        auto bin = threshold(net, 1);
        CHECK(bin.edge_count() == 3);
        CHECK(bin.node_count() == 4);
    }
    SUBCASE("w above max empties the network") {
        auto bin = threshold(net, 6);
        CHECK(bin.edge_count() == 0);
        CHECK(bin.node_count() == 0);
    }
    SUBCASE("w=2 keeps two edges") {
        auto bin = threshold(net, 2);
        CHECK(bin.edge_count() == 2);
        CHECK(bin.has_edge(1, 2));
        CHECK(bin.has_edge(2, 3));
        CHECK_FALSE(bin.has_edge(0, 1));
    }
    SUBCASE("w must be positive") { CHECK_THROWS_AS(threshold(net, 0), std::invalid_argument); }
}

TEST_CASE("thresholded edges at w+1 are a subset of edges at w") {
    synthetic::Rng rng(7);
    CoCitationNetwork net;
    for (int i = 0; i < 60; ++i)
        net.edges[detail::pair_key(static_cast<DenseId>(rng.below(15)),
                                   static_cast<DenseId>(15 + rng.below(15)))] =
            1 + static_cast<int>(rng.below(5));
    for (int w = 1; w <= net.max_weight(); ++w) {
        auto lo = threshold(net, w), hi = threshold(net, w + 1);
        for (const auto& [v, ns] : hi.adj)
            for (DenseId u : ns) CHECK(lo.has_edge(v, u));
    }
}

TEST_CASE("size_vs_threshold curves") {
    SUBCASE("single edge of weight 3") {
        auto curve = size_vs_threshold(helpers::weighted_net({{0, 1, 3}}));
        std::vector<std::pair<int, std::size_t>> expect = {{1, 2}, {2, 2}, {3, 2}, {4, 0}};
        CHECK(curve == expect);
    }
    SUBCASE("empty network") {
        CHECK(size_vs_threshold(CoCitationNetwork{}).empty());
    }
    SUBCASE("star with weights 1,1,2") {
        auto curve =
            size_vs_threshold(helpers::weighted_net({{0, 1, 1}, {0, 2, 1}, {0, 3, 2}}));
        std::vector<std::pair<int, std::size_t>> expect = {{1, 4}, {2, 2}, {3, 0}};
        CHECK(curve == expect);
    }
}

TEST_CASE("edge weights equal brute-force co-citation counts on random corpora") {
    synthetic::Rng rng(1234);
    for (int trial = 0; trial < 20; ++trial) {
        helpers::Corpus corpus;
        std::vector<std::vector<std::string>> refsets;
        for (int p = 0; p < 12; ++p) {
            std::set<std::string> refs;
            std::size_t n = rng.below(5);
            for (std::size_t r = 0; r < n; ++r)
                refs.insert("t" + std::to_string(rng.below(8)));
            refsets.emplace_back(refs.begin(), refs.end());
            corpus.add("p" + std::to_string(p), 2000, refsets.back());
        }
        auto store = corpus.parse();
        auto net = build_yearly_network(store, 2000);
        // oracle: for every target pair, count papers whose distinct refs hold both
        std::map<std::pair<std::string, std::string>, int> expect;
        for (const auto& refs : refsets)
            for (std::size_t i = 0; i < refs.size(); ++i)
                for (std::size_t j = i + 1; j < refs.size(); ++j)
                    ++expect[{refs[i], refs[j]}];
        CHECK(net.edge_count() == expect.size());
        for (const auto& [pair, w] : expect)
            CHECK(weight_of(net, store, pair.first, pair.second) == w);
    }
}
