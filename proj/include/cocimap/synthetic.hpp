#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

// Deterministic synthetic corpus with planted community structure: stable
// co-citation modules, transient modules, a mid-range membership move, and
// multidisciplinarity enrichment inside the modules. Used by the bundled demo
// and the test suite. Uses a hand-rolled generator so the byte stream is
// identical across platforms.

namespace cocimap::synthetic {

struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    std::uint64_t below(std::uint64_t n) { return next() % n; }
    bool chance(double p) { return static_cast<double>(next() >> 11) / 9007199254740992.0 < p; }
};

struct DemoOptions {
    int first_citing_year = 1999;
    int years = 10;
    std::uint64_t seed = 42;
    int modules = 6;
    int module_size = 8;
    int citers_per_module = 3;
    int noise_citers_per_year = 60;
    int noise_pool = 150;
    double multi_in_modules = 0.40;
    double multi_overall = 0.05;
};

inline void write_demo_corpus(std::ostream& out, const DemoOptions& opt = {}) {
    Rng rng(opt.seed);
    const std::vector<std::vector<std::string>> phrase_pools = {
        {"dna sequence", "genome organization", "repetitive dna"},
        {"gene expression", "transcription factor", "promoter region"},
        {"protein kinase", "signal transduction", "phosphorylation"},
        {"neural network", "synaptic plasticity", "cortical neurons"},
        {"climate model", "ocean circulation", "carbon cycle"},
        {"quantum dot", "electron transport", "semiconductor devices"},
        {"cell cycle", "mitotic spindle", "checkpoint control"},
        {"immune response", "antigen receptor", "cytokine signaling"}};
    const std::vector<std::string> fillers = {"analysis", "structure",  "dynamics",
                                              "evolution", "properties", "regulation"};
    const std::vector<std::string> categories = {
        "biochemistry and molecular biology", "cell biology",
        "neurosciences",                      "physics, applied",
        "chemistry, multidisciplinary",       "ecology"};
    const std::string multi_cat = "multidisciplinary sciences";

    auto emit = [&](nlohmann::ordered_json j) { out << j.dump() << '\n'; };
    auto title_for = [&](int module, Rng& r) {
        const auto& pool = phrase_pools[static_cast<std::size_t>(module) % phrase_pools.size()];
        std::string t = pool[r.below(pool.size())];
        t += " " + fillers[r.below(fillers.size())];
        t += " of " + pool[r.below(pool.size())];
        return t;
    };

    // base (cited) papers per module
    std::vector<std::vector<std::string>> module_members(static_cast<std::size_t>(opt.modules));
    for (int m = 0; m < opt.modules; ++m) {
        for (int i = 0; i < opt.module_size; ++i) {
            std::string id = "M" + std::to_string(m) + "P" + std::to_string(i);
            module_members[static_cast<std::size_t>(m)].push_back(id);
            nlohmann::ordered_json j;
            j["id"] = id;
            j["year"] = opt.first_citing_year - 9 + static_cast<int>(rng.below(8));
            j["title"] = title_for(m, rng);
            std::vector<std::string> cats = {categories[static_cast<std::size_t>(m) % categories.size()]};
            if (rng.chance(opt.multi_in_modules)) cats.push_back(multi_cat);
            j["categories"] = cats;
            const auto& pool = phrase_pools[static_cast<std::size_t>(m) % phrase_pools.size()];
            j["keywords_plus"] = std::vector<std::string>{pool[0], pool[rng.below(pool.size())]};
            j["refs"] = std::vector<std::string>{};
            emit(j);
        }
    }
    // noise pool of weakly cited papers
    std::vector<std::string> noise_ids;
    for (int i = 0; i < opt.noise_pool; ++i) {
        std::string id = "N" + std::to_string(i);
        noise_ids.push_back(id);
        nlohmann::ordered_json j;
        j["id"] = id;
        j["year"] = opt.first_citing_year - 12 + static_cast<int>(rng.below(11));
        j["title"] = fillers[rng.below(fillers.size())] + " of scattered observations";
        if (rng.chance(opt.multi_overall)) j["categories"] = std::vector<std::string>{multi_cat};
        else j["categories"] = std::vector<std::string>{categories[rng.below(categories.size())]};
        j["refs"] = std::vector<std::string>{};
        emit(j);
    }

    int moved_from = 0, moved_to = 1;
    int move_year = opt.first_citing_year + opt.years / 2;
    int citer_serial = 0;
    for (int y = opt.first_citing_year; y < opt.first_citing_year + opt.years; ++y) {
        for (int m = 0; m < opt.modules; ++m) {
            // module 0 loses its last two members to module 1 from move_year on
            std::vector<std::string> members = module_members[static_cast<std::size_t>(m)];
            if (y >= move_year && m == moved_from)
                members.resize(members.size() - 2);
            if (y >= move_year && m == moved_to) {
                const auto& src = module_members[static_cast<std::size_t>(moved_from)];
                members.push_back(src[src.size() - 2]);
                members.push_back(src[src.size() - 1]);
            }
            for (int c = 0; c < opt.citers_per_module; ++c) {
                nlohmann::ordered_json j;
                j["id"] = "C" + std::to_string(citer_serial++);
                j["year"] = y;
                j["title"] = title_for(m, rng);
                j["categories"] = std::vector<std::string>{
                    rng.chance(opt.multi_overall) ? multi_cat
                                                  : categories[rng.below(categories.size())]};
                j["refs"] = members;
                emit(j);
            }
        }
        for (int c = 0; c < opt.noise_citers_per_year; ++c) {
            nlohmann::ordered_json j;
            j["id"] = "C" + std::to_string(citer_serial++);
            j["year"] = y;
            j["title"] = fillers[rng.below(fillers.size())] + " of miscellaneous topics";
            j["categories"] = std::vector<std::string>{
                rng.chance(opt.multi_overall) ? multi_cat : categories[rng.below(categories.size())]};
            std::vector<std::string> refs;
            int nrefs = 2 + static_cast<int>(rng.below(3));
            for (int r = 0; r < nrefs; ++r) refs.push_back(noise_ids[rng.below(noise_ids.size())]);
            j["refs"] = refs;
            emit(j);
        }
    }
}

}  // namespace cocimap::synthetic
