#include <doctest.h>

#include <cmath>

#include "cocimap/tagging.hpp"
#include "helpers.hpp"
#include "oracle_svd.hpp"

using namespace cocimap;

TEST_CASE("stemming matches the reference vocabulary") {
    CHECK(porter::stem("sequences") == "sequenc");
    CHECK(porter::stem("sequence") == "sequenc");
    CHECK(porter::stem("kinases") == "kinas");
    CHECK(porter::stem("organization") == "organ");
    CHECK(stem_expression("DNA sequences") == "dna sequenc");
    CHECK(stem_expression("bcl-2") == "bcl-2");
    CHECK(stem_expression("chromosome-11") == "chromosome-11");
    CHECK(stem_expression("Excitatory amino acids") == "excitatori amino acid");
}

TEST_CASE("stemming is idempotent over a mixed vocabulary") {
    // (not a universal property of the stemmer; holds for this vocabulary)
    for (const std::string& word :
         {"sequences", "apoptosis", "glutamate", "organization", "receptors",
          "bcl-2", "chromosome-11", "dna", "metazoa", "comparative", "plasticity"}) {
        auto once = stem_expression(word);
        CHECK(stem_expression(once) == once);
    }
}

TEST_CASE("tokenization trims punctuation but keeps hyphens and digits") {
    auto toks = stem_tokens("The (DNA) sequences, of bcl-2!");
    REQUIRE(toks.size() == 5);
    CHECK(toks[0] == "the");
    CHECK(toks[1] == "dna");
    CHECK(toks[2] == "sequenc");
    CHECK(toks[3] == "of");
    CHECK(toks[4] == "bcl-2");
}

TEST_CASE("candidate set deduplicates on the stemmed form") {
    auto store = helpers::Corpus()
                     .add("a", 2000, {}, "", {}, {"DNA SEQUENCES", "dna sequence"})
                     .add("b", 2000, {}, "", {}, {"protein kinases"})
                     .parse();
    auto cands = build_candidate_set(store);
    REQUIRE(cands.size() == 2);
    CHECK(cands[0] == "dna sequenc");
    CHECK(cands[1] == "protein kinas");
}

TEST_CASE("corpus without keywords yields no candidates") {
    auto store = helpers::Corpus().add("a", 2000).parse();
    CHECK(build_candidate_set(store).empty());
}

TEST_CASE("title matching requires contiguous stem runs") {
    std::unordered_set<std::string> cands = {"dna", "dna sequenc", "sequenc dna"};
    auto hits = title_keywords("Comparative aspects of DNA organization in metazoa", cands, 2);
    CHECK(hits == std::unordered_set<std::string>{"dna"});
    hits = title_keywords("New DNA sequences in metazoa", cands, 2);
    CHECK(hits.count("dna sequenc") == 1);
    CHECK(hits.count("sequenc dna") == 0);
}

TEST_CASE("keyword matrix drops articles without matches") {
    auto store = helpers::Corpus()
                     .add("a", 2000, {}, "DNA sequences in yeast", {}, {"dna"})
                     .add("b", 2000, {}, "Unrelated topic entirely", {}, {})
                     .parse();
    auto mat = match_titles({store.require("a"), store.require("b")}, store,
                            build_candidate_set(store));
    CHECK(mat.articles == std::vector<DenseId>{store.require("a")});
    CHECK(mat.keywords == std::vector<std::string>{"dna"});
    CHECK(mat.tf(0) == 1);
}

TEST_CASE("tfidf scoring follows the formula") {
    KeywordMatrix mat;
    mat.keywords = {"alpha", "beta"};
    mat.articles = {0, 1, 2};
    mat.cells = {{1, 1, 1}, {1, 0, 0}};
    YearContext ctx;
    ctx.n_groups = 50;
    ctx.group_count = {{"alpha", 2}, {"beta", 50}};
    auto scored = tfidf_scores(mat, ctx);
    REQUIRE(scored.size() == 2);
    CHECK(scored[0].keyword == "alpha");
    CHECK(scored[0].score == doctest::Approx(3.0 * std::log(25.0)).epsilon(1e-12));
    CHECK(scored[1].score == doctest::Approx(0.0));  // keyword in every group
}

TEST_CASE("missing census entry is a logic error") {
    KeywordMatrix mat;
    mat.keywords = {"alpha"};
    mat.articles = {0};
    mat.cells = {{1}};
    CHECK_THROWS_AS(tfidf_scores(mat, YearContext{}), std::logic_error);
}

TEST_CASE("the four-title module reproduces ordering and suppression") {
    helpers::Corpus corpus;
    corpus.add("t1", 1960, {}, "Nucleotide arrangement in DNA sequences of bacteria");
    corpus.add("t2", 1962, {}, "Long DNA sequences and their periodicity");
    corpus.add("t3", 1965, {}, "Reassociation kinetics of DNA sequences");
    corpus.add("t4", 1966, {}, "Comparative aspects of DNA organization in metazoa");
    corpus.add("kwsource", 1976, {}, "", {}, {"DNA SEQUENCES", "DNA", "SEQUENCES"});
    auto store = corpus.parse();
    std::vector<DenseId> members;
    for (const char* id : {"t1", "t2", "t3", "t4"}) members.push_back(store.require(id));
    std::sort(members.begin(), members.end());
    auto mat = match_titles(members, store, build_candidate_set(store));
    REQUIRE(mat.keywords == std::vector<std::string>{"dna", "dna sequenc", "sequenc"});
    // group census chosen so idf separates the three candidates
    YearContext ctx;
    ctx.n_groups = 50;
    ctx.group_count = {{"dna sequenc", 1}, {"dna", 6}, {"sequenc", 4}};
    auto scored = tfidf_scores(mat, ctx);
    REQUIRE(scored.size() == 3);
    CHECK(scored[0].keyword == "dna sequenc");
    CHECK(scored[1].keyword == "dna");
    CHECK(scored[2].keyword == "sequenc");
    auto kept = filter_keywords(scored);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].keyword == "dna sequenc");
}

TEST_CASE("filter drops single-title keywords regardless of score") {
    std::vector<ScoredKeyword> scored = {{"rare", 1, 99.0}, {"common", 3, 1.0}};
    auto kept = filter_keywords(scored);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].keyword == "common");
}

TEST_CASE("filter keeps at most ten keywords") {
    std::vector<ScoredKeyword> scored;
    for (int i = 0; i < 12; ++i)
        scored.push_back({"kw" + std::to_string(i), 2, 100.0 - i});
    CHECK(filter_keywords(scored).size() == 10);
}

TEST_CASE("suppression never removes a keyword beating all its superstrings") {
    std::vector<ScoredKeyword> scored = {{"dna", 4, 9.0}, {"dna sequenc", 3, 5.0}};
    auto kept = filter_keywords(scored);
    REQUIRE(kept.size() == 2);  // substring outranks its superstring and survives
    scored = {{"dna sequenc", 3, 9.0}, {"dna", 4, 9.0}};
    kept = filter_keywords(scored);
    REQUIRE(kept.size() == 1);  // equal score suppresses the substring
    CHECK(kept[0].keyword == "dna sequenc");
}

TEST_CASE("rcur selection modes") {
    SUBCASE("three or fewer candidates are taken whole") {
        KeywordMatrix mat;
        mat.keywords = {"a", "b", "c"};
        mat.articles = {0, 1, 2};
        mat.cells = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        auto sel = rcur_select(mat, {});
        CHECK(sel.method == SelectionMethod::all_candidates);
        CHECK(sel.selected == std::vector<std::string>{"a", "b", "c"});
    }
    SUBCASE("empty matrix selects nothing") {
        CHECK(rcur_select(KeywordMatrix{}, {}).selected.empty());
    }
    SUBCASE("duplicate occurrence profiles fall back to tfidf ranking") {
        KeywordMatrix mat;
        mat.keywords = {"a", "b", "c", "d"};
        mat.articles = {0, 1, 2, 3};
        mat.cells = {{1, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
        std::vector<ScoredKeyword> scored = {{"c", 2, 5.0}, {"a", 2, 4.0}, {"b", 2, 3.0},
                                             {"d", 2, 2.0}};
        auto sel = rcur_select(mat, scored);
        CHECK(sel.method == SelectionMethod::tfidf_fallback);
        CHECK(sel.selected == std::vector<std::string>{"c", "a", "b"});
    }
    SUBCASE("a dominant row is selected by leverage") {
        KeywordMatrix mat;
        mat.keywords = {"dom", "r1", "r2", "r3"};
        mat.articles = {0, 1, 2, 3};
        mat.cells = {{1, 1, 1, 1}, {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}};
        auto sel = rcur_select(mat, {});
        REQUIRE(sel.method == SelectionMethod::rcur);
        REQUIRE(sel.selected.size() == 3);
        CHECK(std::find(sel.selected.begin(), sel.selected.end(), "dom") !=
              sel.selected.end());
    }
}

TEST_CASE("leverage scores match the independent oracle and sum to one") {
    synthetic::Rng rng(4711);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t m = 2 + rng.below(7), n = 2 + rng.below(7);
        std::vector<std::vector<double>> rows(m, std::vector<double>(n, 0.0));
        bool nonzero = false;
        for (auto& row : rows)
            for (auto& v : row)
                if (rng.chance(0.5)) { v = 1.0; nonzero = true; }
        if (!nonzero) rows[0][0] = 1.0;
        // skip matrices whose top-r subspace is ambiguous (tied singular
        // values straddling the mass-fraction boundary)
        auto svd = oracle::one_sided_jacobi(rows);
        double total = 0.0, acc = 0.0;
        for (double s : svd.sigma) total += s;
        std::size_t r = svd.sigma.size();
        for (std::size_t i = 0; i < svd.sigma.size(); ++i) {
            acc += svd.sigma[i];
            if (acc >= 0.8 * total) { r = i + 1; break; }
        }
        if (r < svd.sigma.size() && svd.sigma[r - 1] - svd.sigma[r] < 1e-6) continue;
        auto lev = row_leverage_scores(rows);
        auto expect = oracle::leverage_scores(rows);
        double sum = 0.0;
        REQUIRE(lev.scores.size() == expect.size());
        for (std::size_t i = 0; i < expect.size(); ++i) {
            CHECK(lev.scores[i] == doctest::Approx(expect[i]).epsilon(1e-9));
            sum += lev.scores[i];
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("window compression") {
    std::map<int, std::vector<std::string>> selected;
    SUBCASE("tag in three of four years is significant") {
        selected = {{2000, {"a"}}, {2001, {"a"}}, {2002, {"a"}}, {2003, {"b"}}};
        auto windows = window_tags(selected, 2000, 2003, 4);
        REQUIRE(windows.size() == 1);
        CHECK(windows[0].tags == std::vector<std::string>{"a"});
    }
    SUBCASE("exact-half tags accepted only when nothing clears half") {
        selected = {{2000, {"a", "b"}}, {2001, {"a", "b"}}, {2002, {}}, {2003, {}}};
        auto windows = window_tags(selected, 2000, 2003, 4);
        REQUIRE(windows.size() == 1);
        CHECK(windows[0].tags == std::vector<std::string>{"a", "b"});
    }
    SUBCASE("half loses against a clear majority") {
        selected = {{2000, {"a", "b"}}, {2001, {"a", "b"}}, {2002, {"a"}}, {2003, {}}};
        auto windows = window_tags(selected, 2000, 2003, 4);
        REQUIRE(windows.size() == 1);
        CHECK(windows[0].tags == std::vector<std::string>{"a"});
    }
    SUBCASE("windows tile from the birth year") {
        selected = {{2000, {"a"}}, {2001, {"a"}}, {2002, {"a"}}, {2003, {"a"}},
                    {2004, {"b"}}, {2005, {"b"}}};
        auto windows = window_tags(selected, 2000, 2005, 4);
        REQUIRE(windows.size() == 2);
        CHECK(windows[0].from_year == 2000);
        CHECK(windows[0].to_year == 2003);
        CHECK(windows[1].from_year == 2004);
        CHECK(windows[1].to_year == 2005);
        CHECK(windows[1].tags == std::vector<std::string>{"b"});
    }
}
