#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cocimap/corpus.hpp"
#include "cocimap/porter.hpp"
#include "cocimap/svd.hpp"

namespace cocimap {

// -- stemming ----------------------------------------------------------------

// Lowercase, split on whitespace, trim surrounding punctuation (intra-token
// hyphens and digits survive), Porter-stem each token.
inline std::vector<std::string> stem_tokens(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream iss(text);
    std::string tok;
    while (iss >> tok) {
        for (char& c : tok) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        auto keep = [](char c) {
            return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
        };
        std::size_t b = 0, e = tok.size();
        while (b < e && !keep(tok[b])) ++b;
        while (e > b && !keep(tok[e - 1])) --e;
        if (b == e) continue;
        out.push_back(porter::stem(tok.substr(b, e - b)));
    }
    return out;
}

// Stemmed form of an expression: per-word stems joined by single spaces.
inline std::string stem_expression(const std::string& expr) {
    auto toks = stem_tokens(expr);
    std::string out;
    for (const auto& t : toks) {
        if (!out.empty()) out += ' ';
        out += t;
    }
    return out;
}

// -- keyword candidates and the keyword/article matrix -----------------------

// Stemmed Keyword-Plus expressions over the whole corpus, deduplicated on the
// stemmed form. Sorted.
inline std::vector<std::string> build_candidate_set(const CorpusStore& store) {
    std::vector<std::string> out;
    for (DenseId p = 0; p < store.size(); ++p)
        for (const auto& kwp : store.record(p).keywords_plus) {
            auto stemmed = stem_expression(kwp);
            if (!stemmed.empty()) out.push_back(std::move(stemmed));
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// 0/1 matrix of keywords (rows) vs articles (columns). Only keywords matching
// at least one title and articles matching at least one keyword appear.
struct KeywordMatrix {
    std::vector<std::string> keywords;       // sorted
    std::vector<DenseId> articles;           // sorted
    std::vector<std::vector<double>> cells;  // keywords x articles, entries 0/1

    std::size_t tf(std::size_t row) const {
        std::size_t n = 0;
        for (double v : cells[row]) n += v > 0.5 ? 1 : 0;
        return n;
    }

    std::unordered_set<std::string> keyword_set() const {
        return {keywords.begin(), keywords.end()};
    }
};

namespace detail {

inline std::vector<std::string> split_tokens(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream iss(s);
    std::string t;
    while (iss >> t) out.push_back(std::move(t));
    return out;
}

// a occurs as a contiguous run inside b
inline bool contiguous_subsequence(const std::vector<std::string>& a,
                                   const std::vector<std::string>& b) {
    if (a.empty() || a.size() > b.size()) return false;
    for (std::size_t start = 0; start + a.size() <= b.size(); ++start) {
        bool ok = true;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (b[start + i] != a[i]) { ok = false; break; }
        if (ok) return true;
    }
    return false;
}

}  // namespace detail

// A candidate matches a title iff its stemmed token sequence occurs as a
// contiguous run in the title's stemmed token sequence.
inline std::unordered_set<std::string> title_keywords(
    const std::string& title, const std::unordered_set<std::string>& candidates,
    std::size_t max_candidate_tokens) {
    std::unordered_set<std::string> matched;
    auto toks = stem_tokens(title);
    for (std::size_t start = 0; start < toks.size(); ++start) {
        std::string phrase;
        for (std::size_t len = 1; len <= max_candidate_tokens && start + len <= toks.size();
             ++len) {
            if (len > 1) phrase += ' ';
            phrase += toks[start + len - 1];
            if (candidates.count(phrase)) matched.insert(phrase);
        }
    }
    return matched;
}

inline std::size_t max_token_count(const std::vector<std::string>& candidates) {
    std::size_t m = 1;
    for (const auto& c : candidates)
        m = std::max(m, detail::split_tokens(c).size());
    return m;
}

inline KeywordMatrix match_titles(const std::vector<DenseId>& members, const CorpusStore& store,
                                  const std::vector<std::string>& candidates) {
    std::unordered_set<std::string> cand_set(candidates.begin(), candidates.end());
    std::size_t max_len = max_token_count(candidates);
    std::map<DenseId, std::vector<std::string>> per_article;
    std::unordered_set<std::string> all_keywords;
    for (DenseId m : members) {
        const std::string& title = store.record(m).title;
        if (title.empty()) continue;
        auto matched = title_keywords(title, cand_set, max_len);
        if (matched.empty()) continue;
        auto& v = per_article[m];
        v.assign(matched.begin(), matched.end());
        all_keywords.insert(matched.begin(), matched.end());
    }
    KeywordMatrix mat;
    mat.keywords.assign(all_keywords.begin(), all_keywords.end());
    std::sort(mat.keywords.begin(), mat.keywords.end());
    for (const auto& [article, kws] : per_article) mat.articles.push_back(article);
    mat.cells.assign(mat.keywords.size(), std::vector<double>(mat.articles.size(), 0.0));
    for (std::size_t col = 0; col < mat.articles.size(); ++col)
        for (const auto& kw : per_article[mat.articles[col]]) {
            auto row = static_cast<std::size_t>(
                std::lower_bound(mat.keywords.begin(), mat.keywords.end(), kw) -
                mat.keywords.begin());
            mat.cells[row][col] = 1.0;
        }
    return mat;
}

// -- Tf-Idf scoring ----------------------------------------------------------

// Year-level census: how many groups the year has and in how many of them
// each keyword matches at least one title.
struct YearContext {
    std::size_t n_groups = 0;
    std::unordered_map<std::string, std::size_t> group_count;
};

inline YearContext build_year_context(const std::vector<std::unordered_set<std::string>>& group_keywords) {
    YearContext ctx;
    ctx.n_groups = group_keywords.size();
    for (const auto& kws : group_keywords)
        for (const auto& kw : kws) ++ctx.group_count[kw];
    return ctx;
}

struct ScoredKeyword {
    std::string keyword;
    std::size_t tf = 0;
    double score = 0.0;
};

// score = Tf(kw, G) * ln(N_g / n_g(kw))
inline std::vector<ScoredKeyword> tfidf_scores(const KeywordMatrix& matrix,
                                               const YearContext& ctx) {
    std::vector<ScoredKeyword> out;
    for (std::size_t row = 0; row < matrix.keywords.size(); ++row) {
        ScoredKeyword sk;
        sk.keyword = matrix.keywords[row];
        sk.tf = matrix.tf(row);
        auto it = ctx.group_count.find(sk.keyword);
        if (it == ctx.group_count.end() || it->second == 0)
            throw std::logic_error("keyword missing from year census: " + sk.keyword);
        sk.score = static_cast<double>(sk.tf) *
                   std::log(static_cast<double>(ctx.n_groups) / static_cast<double>(it->second));
        out.push_back(std::move(sk));
    }
    std::sort(out.begin(), out.end(), [](const ScoredKeyword& a, const ScoredKeyword& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.keyword < b.keyword;
    });
    return out;
}

// Drop single-article keywords, suppress keywords contained in another
// keyword of higher-or-equal score, keep the top 10.
inline std::vector<ScoredKeyword> filter_keywords(const std::vector<ScoredKeyword>& scored) {
    std::vector<ScoredKeyword> multi;
    for (const auto& sk : scored)
        if (sk.tf >= 2) multi.push_back(sk);
    std::vector<ScoredKeyword> kept;
    for (const auto& sk : multi) {
        auto toks = detail::split_tokens(sk.keyword);
        bool suppressed = false;
        for (const auto& other : multi) {
            if (other.keyword == sk.keyword || other.score < sk.score) continue;
            auto other_toks = detail::split_tokens(other.keyword);
            if (other_toks.size() > toks.size() &&
                detail::contiguous_subsequence(toks, other_toks)) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed) kept.push_back(sk);
    }
    if (kept.size() > 10) kept.resize(10);  // already sorted by score desc, ties lexicographic
    return kept;
}

// Restriction of a matrix to a keyword subset; columns that lose all their
// entries are dropped.
inline KeywordMatrix restrict_matrix(const KeywordMatrix& mat,
                                     const std::vector<std::string>& keywords) {
    KeywordMatrix out;
    out.keywords = keywords;
    std::sort(out.keywords.begin(), out.keywords.end());
    std::vector<std::size_t> rows;
    for (const auto& kw : out.keywords) {
        auto it = std::lower_bound(mat.keywords.begin(), mat.keywords.end(), kw);
        if (it == mat.keywords.end() || *it != kw)
            throw std::invalid_argument("keyword not in matrix: " + kw);
        rows.push_back(static_cast<std::size_t>(it - mat.keywords.begin()));
    }
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < mat.articles.size(); ++c) {
        bool any = false;
        for (std::size_t r : rows)
            if (mat.cells[r][c] > 0.5) { any = true; break; }
        if (any) cols.push_back(c);
    }
    for (std::size_t c : cols) out.articles.push_back(mat.articles[c]);
    out.cells.assign(out.keywords.size(), std::vector<double>(cols.size(), 0.0));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            out.cells[i][j] = mat.cells[rows[i]][cols[j]];
    return out;
}

// -- rCUR selection ----------------------------------------------------------

enum class SelectionMethod { rcur, all_candidates, tfidf_fallback };

inline const char* to_string(SelectionMethod m) {
    switch (m) {
        case SelectionMethod::rcur: return "rcur";
        case SelectionMethod::all_candidates: return "all_candidates";
        default: return "tfidf_fallback";
    }
}

struct TagSelection {
    std::vector<std::string> selected;  // <= 3
    SelectionMethod method = SelectionMethod::rcur;
};

namespace detail {

inline bool has_duplicate_rows(const KeywordMatrix& mat) {
    for (std::size_t i = 0; i < mat.cells.size(); ++i)
        for (std::size_t j = i + 1; j < mat.cells.size(); ++j)
            if (mat.cells[i] == mat.cells[j]) return true;
    return false;
}

inline std::vector<std::string> top3_by_score(const std::vector<ScoredKeyword>& scored) {
    std::vector<std::string> out;
    for (const auto& sk : scored) {
        out.push_back(sk.keyword);
        if (out.size() == 3) break;
    }
    return out;
}

}  // namespace detail

// Select up to three representative keywords by top-r leverage scores. Three
// or fewer candidates are taken as-is; a degenerate matrix (rank deficiency or
// duplicate occurrence profiles) falls back to the Tf-Idf ranking. `scored`
// must cover the matrix keywords and be sorted by descending score.
inline TagSelection rcur_select(const KeywordMatrix& matrix,
                                const std::vector<ScoredKeyword>& scored) {
    TagSelection sel;
    if (matrix.keywords.empty()) return sel;
    if (matrix.keywords.size() <= 3) {
        sel.selected = matrix.keywords;
        sel.method = SelectionMethod::all_candidates;
        return sel;
    }
    LeverageResult lev = row_leverage_scores(matrix.cells);
    bool degenerate =
        lev.numeric_rank < std::min<int>(3, static_cast<int>(matrix.keywords.size())) ||
        lev.numeric_rank < lev.rank_used || detail::has_duplicate_rows(matrix);
    if (degenerate) {
        sel.selected = detail::top3_by_score(scored);
        sel.method = SelectionMethod::tfidf_fallback;
        return sel;
    }
    std::vector<std::size_t> order(matrix.keywords.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (lev.scores[a] != lev.scores[b]) return lev.scores[a] > lev.scores[b];
        return matrix.keywords[a] < matrix.keywords[b];
    });
    for (std::size_t i = 0; i < std::min<std::size_t>(3, order.size()); ++i)
        sel.selected.push_back(matrix.keywords[order[i]]);
    sel.method = SelectionMethod::rcur;
    return sel;
}

// -- window compression ------------------------------------------------------

struct WindowTags {
    int from_year = 0;
    int to_year = 0;
    std::vector<std::string> tags;  // sorted
};

// Tile [birth, death] into fixed windows from the birth year; a tag is
// significant in a window if selected in more than half of its years, with
// exactly-half accepted when nothing clears half.
inline std::vector<WindowTags> window_tags(const std::map<int, std::vector<std::string>>& selected,
                                           int birth_year, int death_year, int window = 4) {
    if (window < 1) throw std::invalid_argument("window must be >= 1");
    std::vector<WindowTags> out;
    for (int start = birth_year; start <= death_year; start += window) {
        int end = std::min(start + window - 1, death_year);
        std::map<std::string, int> counts;
        int steps = end - start + 1;
        for (int y = start; y <= end; ++y) {
            auto it = selected.find(y);
            if (it == selected.end()) continue;
            for (const auto& tag : it->second) ++counts[tag];
        }
        WindowTags wt;
        wt.from_year = start;
        wt.to_year = end;
        for (const auto& [tag, n] : counts)
            if (2 * n > steps) wt.tags.push_back(tag);
        if (wt.tags.empty())
            for (const auto& [tag, n] : counts)
                if (2 * n == steps) wt.tags.push_back(tag);
        out.push_back(std::move(wt));
    }
    return out;
}

}  // namespace cocimap
