#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace cocimap {

using DenseId = std::uint32_t;

// One publication. Records synthesized for ids that only appear in reference
// lists carry no year/title/categories and have in_corpus == false.
struct PaperRecord {
    std::string id;
    std::optional<int> year;
    std::string title;
    std::vector<std::string> categories;     // sorted, unique
    std::vector<std::string> keywords_plus;  // sorted, unique
    std::vector<std::pair<std::string, int>> refs;  // (cited id, multiplicity >= 1)
    bool in_corpus = true;
};

struct ParseOptions {
    int year_min = 0;
    int year_max = 9999;
    bool strict = false;
};

struct ParseReport {
    std::size_t parsed = 0;
    std::size_t skipped = 0;
    std::size_t out_of_range = 0;
    std::vector<std::string> messages;
};

class CorpusStore {
public:
    CorpusStore() = default;
    CorpusStore(int year_min, int year_max) : year_min_(year_min), year_max_(year_max) {}

    DenseId intern(PaperRecord rec) {
        auto it = by_id_.find(rec.id);
        if (it != by_id_.end()) {
            PaperRecord& existing = records_[it->second];
            if (existing.in_corpus && rec.in_corpus)
                throw std::runtime_error("duplicate id: " + rec.id);
            if (rec.in_corpus) {
                rec.in_corpus = true;
                records_[it->second] = std::move(rec);
                index_year(it->second);
            }
            return it->second;
        }
        auto dense = static_cast<DenseId>(records_.size());
        by_id_.emplace(rec.id, dense);
        records_.push_back(std::move(rec));
        index_year(dense);
        return dense;
    }

    DenseId intern_cited_only(const std::string& id) {
        auto it = by_id_.find(id);
        if (it != by_id_.end()) return it->second;
        PaperRecord rec;
        rec.id = id;
        rec.in_corpus = false;
        return intern(std::move(rec));
    }

    // Resolves every reference target to a dense id (creating cited-only
    // nodes). Call once after the last intern().
    void finalize() {
        std::size_t n = records_.size();
        for (std::size_t i = 0; i < n; ++i)
            for (const auto& [cited, mult] : records_[i].refs)
                intern_cited_only(cited);
    }

    bool in_range(int year) const { return year >= year_min_ && year <= year_max_; }
    int year_min() const { return year_min_; }
    int year_max() const { return year_max_; }

    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

    const PaperRecord& record(DenseId id) const { return records_.at(id); }
    const std::string& opaque_id(DenseId id) const { return records_.at(id).id; }

    std::optional<DenseId> lookup(const std::string& id) const {
        auto it = by_id_.find(id);
        if (it == by_id_.end()) return std::nullopt;
        return it->second;
    }

    DenseId require(const std::string& id) const {
        auto it = by_id_.find(id);
        if (it == by_id_.end()) throw std::runtime_error("unknown paper id: " + id);
        return it->second;
    }

    const std::vector<DenseId>& papers_of_year(int year) const {
        static const std::vector<DenseId> none;
        auto it = per_year_.find(year);
        return it == per_year_.end() ? none : it->second;
    }

    const std::map<int, std::vector<DenseId>>& per_year_index() const { return per_year_; }

    // Distinct dense ids of the references of one paper (multiplicity and
    // repeats collapsed; self-references kept). Sorted.
    std::vector<DenseId> distinct_refs(DenseId paper) const {
        std::vector<DenseId> out;
        for (const auto& [cited, mult] : records_.at(paper).refs)
            out.push_back(require(cited));
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

private:
    void index_year(DenseId dense) {
        const PaperRecord& r = records_[dense];
        if (r.in_corpus && r.year && in_range(*r.year))
            per_year_[*r.year].push_back(dense);
    }

    std::vector<PaperRecord> records_;
    std::unordered_map<std::string, DenseId> by_id_;
    std::map<int, std::vector<DenseId>> per_year_;
    int year_min_ = 0;
    int year_max_ = 9999;
};

namespace detail {

inline PaperRecord record_from_json(const nlohmann::json& j) {
    PaperRecord rec;
    rec.id = j.at("id").get<std::string>();
    if (rec.id.empty()) throw std::runtime_error("empty id");
    if (j.contains("year") && !j["year"].is_null()) rec.year = j["year"].get<int>();
    if (j.contains("title") && !j["title"].is_null()) rec.title = j["title"].get<std::string>();
    if (j.contains("categories"))
        for (const auto& c : j["categories"]) rec.categories.push_back(c.get<std::string>());
    if (j.contains("keywords_plus"))
        for (const auto& k : j["keywords_plus"]) rec.keywords_plus.push_back(k.get<std::string>());
    std::sort(rec.categories.begin(), rec.categories.end());
    rec.categories.erase(std::unique(rec.categories.begin(), rec.categories.end()),
                         rec.categories.end());
    std::sort(rec.keywords_plus.begin(), rec.keywords_plus.end());
    rec.keywords_plus.erase(std::unique(rec.keywords_plus.begin(), rec.keywords_plus.end()),
                            rec.keywords_plus.end());
    if (j.contains("refs")) {
        std::map<std::string, int> mult;  // repeated entries encode multiplicity
        for (const auto& r : j["refs"]) ++mult[r.get<std::string>()];
        for (auto& [id, m] : mult) rec.refs.emplace_back(id, m);
    }
    return rec;
}

inline nlohmann::ordered_json record_to_json(const PaperRecord& rec) {
    nlohmann::ordered_json j;
    j["id"] = rec.id;
    if (rec.year) j["year"] = *rec.year;
    if (!rec.title.empty()) j["title"] = rec.title;
    if (!rec.categories.empty()) j["categories"] = rec.categories;
    if (!rec.keywords_plus.empty()) j["keywords_plus"] = rec.keywords_plus;
    std::vector<std::string> refs;
    for (const auto& [id, m] : rec.refs)
        for (int i = 0; i < m; ++i) refs.push_back(id);
    j["refs"] = refs;
    return j;
}

}  // namespace detail

// Parses UTF-8 line-delimited records (one JSON object per line). Lenient
// mode skips malformed lines and reports them; strict mode aborts. Duplicate
// ids always abort.
inline CorpusStore parse_corpus(std::istream& in, const ParseOptions& opt,
                                ParseReport* report = nullptr) {
    CorpusStore store(opt.year_min, opt.year_max);
    ParseReport local;
    ParseReport& rep = report ? *report : local;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            auto rec = detail::record_from_json(nlohmann::json::parse(line));
            if (rec.year && !store.in_range(*rec.year)) ++rep.out_of_range;
            store.intern(std::move(rec));
            ++rep.parsed;
        } catch (const std::exception& e) {
            std::string msg = "line " + std::to_string(lineno) + ": " + e.what();
            if (std::string(e.what()).rfind("duplicate id", 0) == 0 || opt.strict)
                throw std::runtime_error(msg);
            ++rep.skipped;
            rep.messages.push_back(std::move(msg));
        }
    }
    store.finalize();
    return store;
}

// Round-trip counterpart of parse_corpus: emits only real (in-corpus) records.
inline void serialize_corpus(const CorpusStore& store, std::ostream& out) {
    for (DenseId i = 0; i < store.size(); ++i) {
        const PaperRecord& rec = store.record(i);
        if (!rec.in_corpus) continue;
        out << detail::record_to_json(rec).dump() << '\n';
    }
}

struct YearStats {
    std::size_t published = 0;
    std::size_t citing = 0;     // >= 1 reference
    std::size_t co_citing = 0;  // >= 2 distinct references
    std::size_t cited = 0;      // distinct papers cited by this year's papers
    std::size_t co_cited = 0;   // distinct papers co-cited by this year's papers
};

inline std::map<int, YearStats> corpus_stats(const CorpusStore& store) {
    std::map<int, YearStats> out;
    for (const auto& [year, papers] : store.per_year_index()) {
        YearStats& s = out[year];
        s.published = papers.size();
        std::vector<DenseId> cited, co_cited;
        for (DenseId p : papers) {
            auto refs = store.distinct_refs(p);
            if (!refs.empty()) ++s.citing;
            if (refs.size() >= 2) {
                ++s.co_citing;
                co_cited.insert(co_cited.end(), refs.begin(), refs.end());
            }
            cited.insert(cited.end(), refs.begin(), refs.end());
        }
        auto distinct = [](std::vector<DenseId>& v) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
            return v.size();
        };
        s.cited = distinct(cited);
        s.co_cited = distinct(co_cited);
    }
    return out;
}

// Per-year per-category ratio N_{t,c}/N_t, keeping categories whose ratio
// exceeds min_ratio in at least one year.
inline std::map<std::string, std::map<int, double>> category_usage(const CorpusStore& store,
                                                                   double min_ratio) {
    if (min_ratio < 0.0 || min_ratio > 1.0)
        throw std::invalid_argument("min_ratio must be in [0,1]");
    std::map<std::string, std::map<int, double>> ratios;
    for (const auto& [year, papers] : store.per_year_index()) {
        std::map<std::string, std::size_t> counts;
        for (DenseId p : papers)
            for (const auto& c : store.record(p).categories) ++counts[c];
        for (const auto& [cat, n] : counts)
            ratios[cat][year] = static_cast<double>(n) / static_cast<double>(papers.size());
    }
    for (auto it = ratios.begin(); it != ratios.end();) {
        bool keep = false;
        for (const auto& [year, r] : it->second)
            if (r > min_ratio) keep = true;
        it = keep ? std::next(it) : ratios.erase(it);
    }
    return ratios;
}

}  // namespace cocimap
