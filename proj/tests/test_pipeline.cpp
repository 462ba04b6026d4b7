#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "cocimap/pipeline.hpp"
#include "helpers.hpp"

using namespace cocimap;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

// A five-paper cited core re-cited by two papers each year: one stable
// community of five for three years.
std::string small_corpus_text() {
    helpers::Corpus corpus;
    corpus.add("c1", 1998, {}, "Nucleotide arrangement in DNA sequences of bacteria",
               {"Biochemistry & Molecular Biology"}, {"DNA SEQUENCES"});
    corpus.add("c2", 1998, {}, "Long DNA sequences and their periodicity", {"Biochemistry & Molecular Biology"});
    corpus.add("c3", 1998, {}, "Reassociation kinetics of DNA sequences", {"Genetics & Heredity"});
    corpus.add("c4", 1998, {}, "Comparative aspects of DNA organization in metazoa",
               {"Genetics & Heredity"});
    corpus.add("c5", 1998, {}, "Hybridization of DNA sequences in solution", {"Biochemistry & Molecular Biology"});
    std::vector<std::string> core = {"c1", "c2", "c3", "c4", "c5"};
    for (int year = 2000; year <= 2002; ++year)
        for (int i = 0; i < 2; ++i)
            corpus.add("p" + std::to_string(year) + "_" + std::to_string(i), year, core,
                       "Survey of DNA sequences", {"Genetics & Heredity"});
    return corpus.text();
}

PipelineConfig small_config(const fs::path& work, const std::string& out_name) {
    fs::path input = work / "corpus.ndjson";
    {
        std::ofstream f(input);
        f << small_corpus_text();
    }
    PipelineConfig cfg;
    cfg.input = input.string();
    cfg.output = (work / out_name).string();
    cfg.year_from = 1998;
    cfg.year_to = 2002;
    cfg.min_lifespan = 2;
    cfg.window = 2;
    cfg.min_display_size = 2;
    return cfg;
}

}  // namespace

TEST_CASE("full pipeline is deterministic across reruns") {
    auto work = fresh_dir("cocimap_pipeline_det");
    auto cfg1 = small_config(work, "out1");
    auto cfg2 = small_config(work, "out2");
    run_pipeline(cfg1);
    run_pipeline(cfg2);
    // outputs are byte-identical except for the differing output path in the
    // manifest config echo, so compare everything else plus the stage lists
    auto diff = helpers::compare_trees(fs::path(cfg1.output) / "corpus",
                                       fs::path(cfg2.output) / "corpus");
    CHECK(diff == "");
    for (const char* dir :
         {"networks", "thresholds", "communities", "timelines", "metrics", "tags", "map",
          "figures"}) {
        diff = helpers::compare_trees(fs::path(cfg1.output) / dir, fs::path(cfg2.output) / dir);
        CHECK_MESSAGE(diff == "", dir << ": " << diff);
    }
}

TEST_CASE("manifest lists all eight stages with checksummed outputs") {
    auto work = fresh_dir("cocimap_pipeline_manifest");
    auto cfg = small_config(work, "out");
    run_pipeline(cfg);
    auto in = io::open_in(fs::path(cfg.output) / "manifest.json");
    nlohmann::json manifest = nlohmann::json::parse(in);
    CHECK(manifest.at("schema_version") == 1);
    const auto& stages = manifest.at("stages");
    REQUIRE(stages.size() == 8);
    std::vector<std::string> names;
    for (const auto& s : stages) {
        names.push_back(s.at("name").get<std::string>());
        CHECK(!s.at("outputs").empty());
        for (const auto& o : s.at("outputs")) {
            auto checksum = o.at("checksum").get<std::string>();
            CHECK(checksum.rfind("fnv64:", 0) == 0);
            CHECK(checksum.size() == 6 + 16);
            CHECK(fs::exists(fs::path(cfg.output) / o.at("path").get<std::string>()));
        }
    }
    CHECK(names == std::vector<std::string>{"ingest", "build", "threshold", "cluster", "match",
                                            "metrics", "tags", "map"});
}

TEST_CASE("pipeline reports the failing stage for a corpus without co-citations") {
    auto work = fresh_dir("cocimap_pipeline_empty");
    fs::path input = work / "corpus.ndjson";
    {
        std::ofstream f(input);
        f << helpers::Corpus().add("a", 2000, {"b"}).add("b", 1999).text();
    }
    PipelineConfig cfg;
    cfg.input = input.string();
    cfg.output = (work / "out").string();
    cfg.year_from = 1999;
    cfg.year_to = 2000;
    try {
        run_pipeline(cfg);
        FAIL("expected run_pipeline to throw");
    } catch (const std::runtime_error& e) {
        std::string msg = e.what();
        CHECK(msg.find("stage build") != std::string::npos);
        CHECK(msg.find("no co-citing papers") != std::string::npos);
    }
}

TEST_CASE("config validation and json echo") {
    PipelineConfig cfg;
    cfg.input = "x";
    CHECK_NOTHROW(cfg.validate());
    auto j = cfg.to_json();
    CHECK(j.at("k") == 4);
    CHECK(j.at("criterion") == "ratio2");
    cfg.year_from = 2010;
    cfg.year_to = 2000;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("stage tables round-trip through their loaders") {
    auto store = helpers::Corpus()
                     .add("a", 2000, {"x", "y"})
                     .add("b", 2000, {"x", "y"})
                     .add("c", 2000, {"x", "z"})
                     .parse();
    auto work = fresh_dir("cocimap_io_roundtrip");
    DenseId x = store.require("x"), y = store.require("y"), z = store.require("z");

    SUBCASE("weighted network") {
        auto net = build_yearly_network(store, 2000);
        io::save_network(net, store, work / "net.tsv");
        auto back = io::load_network(work / "net.tsv", store, 2000);
        CHECK(back.edges == net.edges);
        CHECK(back.year == 2000);
    }
    SUBCASE("selected thresholds") {
        std::map<int, int> sel = {{2000, 2}, {2001, 1}};
        io::save_selected_thresholds(sel, work / "selected.tsv");
        CHECK(io::load_selected_thresholds(work / "selected.tsv") == sel);
    }
    SUBCASE("communities") {
        std::map<int, CommunitySet> yearly;
        yearly[2000].year = 2000;
        yearly[2000].k = 4;
        std::vector<DenseId> c1 = {x, y, z};
        std::sort(c1.begin(), c1.end());
        yearly[2000].communities = {c1};
        io::save_communities(yearly, store, work / "communities.tsv");
        auto back = io::load_communities(work / "communities.tsv", store, 4);
        REQUIRE(back.count(2000) == 1);
        CHECK(back[2000].communities == yearly[2000].communities);
        CHECK(back[2000].k == 4);
    }
    SUBCASE("timelines") {
        TimelineSet set;
        Timeline tl;
        tl.id = 3;
        tl.birth_year = 2000;
        tl.death_year = 2001;
        std::vector<DenseId> members = {x, y, z};
        std::sort(members.begin(), members.end());
        tl.states[2000] = {2000, members, 3, 0};
        tl.states[2001] = {2001, members, 3, 0};
        set.timelines.push_back(tl);
        io::save_timelines(set, store, work / "timelines");
        auto back = io::load_timelines(work / "timelines" / "timelines.tsv", store);
        REQUIRE(back.timelines.size() == 1);
        CHECK(back.timelines[0].id == 3);
        CHECK(back.timelines[0].birth_year == 2000);
        CHECK(back.timelines[0].death_year == 2001);
        CHECK(back.timelines[0].states.at(2001).members == members);
    }
}
