#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "cocimap/cocitation.hpp"
#include "cocimap/corpus.hpp"
#include "cocimap/cpm.hpp"
#include "cocimap/io.hpp"
#include "cocimap/metrics.hpp"
#include "cocimap/svg.hpp"
#include "cocimap/tagging.hpp"
#include "cocimap/threshold_opt.hpp"
#include "cocimap/timeline.hpp"

namespace cocimap {

namespace fs = std::filesystem;

struct PipelineConfig {
    std::string input;
    std::string output = "out";
    int year_from = 1975;
    int year_to = 2008;
    int k = 4;
    ThresholdCriterion criterion = ThresholdCriterion::ratio2;
    double lambda = kDefaultDecayRate;
    int window = 4;
    int min_lifespan = 14;
    std::size_t min_display_size = 10;
    std::string multidisciplinary_category = kMultidisciplinaryCategory;
    double min_category_ratio = 0.02;
    bool strict = false;
    bool strict_moves = false;
    std::uint64_t clique_budget = 0;

    static PipelineConfig load(const fs::path& path) {
        auto in = io::open_in(path);
        nlohmann::json j = nlohmann::json::parse(in);
        PipelineConfig c;
        c.input = j.at("input").get<std::string>();
        if (j.contains("output")) c.output = j["output"].get<std::string>();
        if (j.contains("year_from")) c.year_from = j["year_from"].get<int>();
        if (j.contains("year_to")) c.year_to = j["year_to"].get<int>();
        if (j.contains("k")) c.k = j["k"].get<int>();
        if (j.contains("criterion"))
            c.criterion = j["criterion"].get<std::string>() == "entropy"
                              ? ThresholdCriterion::entropy
                              : ThresholdCriterion::ratio2;
        if (j.contains("lambda")) c.lambda = j["lambda"].get<double>();
        if (j.contains("window")) c.window = j["window"].get<int>();
        if (j.contains("min_lifespan")) c.min_lifespan = j["min_lifespan"].get<int>();
        if (j.contains("min_display_size"))
            c.min_display_size = j["min_display_size"].get<std::size_t>();
        if (j.contains("multidisciplinary_category"))
            c.multidisciplinary_category = j["multidisciplinary_category"].get<std::string>();
        if (j.contains("min_category_ratio"))
            c.min_category_ratio = j["min_category_ratio"].get<double>();
        if (j.contains("strict")) c.strict = j["strict"].get<bool>();
        if (j.contains("strict_moves")) c.strict_moves = j["strict_moves"].get<bool>();
        if (j.contains("clique_budget")) c.clique_budget = j["clique_budget"].get<std::uint64_t>();
        c.validate();
        // environment overrides for paths only
        if (const char* p = std::getenv("COCIMAP_INPUT")) c.input = p;
        if (const char* p = std::getenv("COCIMAP_OUTPUT")) c.output = p;
        return c;
    }

    void validate() const {
        if (year_from > year_to) throw std::invalid_argument("year_from > year_to");
        if (k < 3) throw std::invalid_argument("k must be >= 3");
        if (lambda <= 0) throw std::invalid_argument("lambda must be positive");
        if (window < 1) throw std::invalid_argument("window must be >= 1");
        if (min_lifespan < 1) throw std::invalid_argument("min_lifespan must be >= 1");
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["input"] = input;
        j["output"] = output;
        j["year_from"] = year_from;
        j["year_to"] = year_to;
        j["k"] = k;
        j["criterion"] = criterion == ThresholdCriterion::entropy ? "entropy" : "ratio2";
        j["lambda"] = lambda;
        j["window"] = window;
        j["min_lifespan"] = min_lifespan;
        j["min_display_size"] = min_display_size;
        j["multidisciplinary_category"] = multidisciplinary_category;
        j["min_category_ratio"] = min_category_ratio;
        j["strict"] = strict;
        j["strict_moves"] = strict_moves;
        j["clique_budget"] = clique_budget;
        return j;
    }
};

struct StateTags {
    int timeline_id = -1;
    int year = 0;
    std::vector<ScoredKeyword> scored;  // post-filter, score order
    TagSelection selection;
};

struct PipelineContext {
    PipelineConfig cfg;
    CorpusStore store;
    ParseReport ingest_report;
    std::map<int, CoCitationNetwork> networks;
    std::map<int, ThresholdScan> scans;
    std::map<int, int> selected_w;
    std::map<int, BinaryNetwork> binary;
    std::map<int, CommunitySet> communities;
    TimelineSet timelines;
    std::vector<TransitionEdge> transitions;
    CitationGraph citations;
    std::vector<GroupMetrics> group_metrics;
    LifecycleStats lifecycle;
    std::vector<StateTags> tags;
    std::map<int, std::vector<WindowTags>> windowed;  // timeline id -> windows

    fs::path out(const std::string& rel) const { return fs::path(cfg.output) / rel; }
};

// -- stages ------------------------------------------------------------------

inline void stage_ingest(PipelineContext& ctx) {
    ParseOptions opt{ctx.cfg.year_from, ctx.cfg.year_to, ctx.cfg.strict};
    auto in = io::open_in(ctx.cfg.input);
    ctx.store = parse_corpus(in, opt, &ctx.ingest_report);
    {
        auto out = io::open_out(ctx.out("corpus/corpus.ndjson"));
        serialize_corpus(ctx.store, out);
    }
    {
        auto out = io::open_out(ctx.out("corpus/ingest_report.tsv"));
        out << "parsed\tskipped\tout_of_range\n";
        out << ctx.ingest_report.parsed << '\t' << ctx.ingest_report.skipped << '\t'
            << ctx.ingest_report.out_of_range << '\n';
        for (const auto& m : ctx.ingest_report.messages) out << "# " << m << '\n';
    }
    {
        auto stats = corpus_stats(ctx.store);
        auto out = io::open_out(ctx.out("corpus/year_stats.tsv"));
        out << "year\tpublished\tciting\tco_citing\tcited\tco_cited\n";
        for (const auto& [year, s] : stats)
            out << year << '\t' << s.published << '\t' << s.citing << '\t' << s.co_citing << '\t'
                << s.cited << '\t' << s.co_cited << '\n';
    }
    {
        auto usage = category_usage(ctx.store, ctx.cfg.min_category_ratio);
        auto out = io::open_out(ctx.out("corpus/category_usage.tsv"));
        out << "category\tyear\tratio\n";
        for (const auto& [cat, years] : usage)
            for (const auto& [year, ratio] : years)
                out << cat << '\t' << year << '\t' << io::fmt_double(ratio) << '\n';
    }
}

inline void stage_build(PipelineContext& ctx) {
    bool any = false;
    for (int y = ctx.cfg.year_from; y <= ctx.cfg.year_to; ++y) {
        CoCitationNetwork net = build_yearly_network(ctx.store, y);
        if (net.edge_count() > 0) any = true;
        io::save_network(net, ctx.store, ctx.out("networks/net_" + std::to_string(y) + ".tsv"));
        ctx.networks[y] = std::move(net);
    }
    if (!any) throw std::runtime_error("no co-citing papers");
}

inline void stage_threshold(PipelineContext& ctx) {
    for (auto& [year, net] : ctx.networks) {
        ThresholdScan scan = scan_thresholds(net, ctx.cfg.k, 1, 0, ctx.cfg.clique_budget);
        io::save_scan(scan, ctx.out("thresholds/scan_" + std::to_string(year) + ".tsv"));
        int w = 1;
        try {
            w = select_threshold(scan, ctx.cfg.criterion);
        } catch (const std::runtime_error&) {
            w = 1;  // no communities this year at any threshold
        }
        ctx.selected_w[year] = w;
        ctx.scans[year] = std::move(scan);
    }
    io::save_selected_thresholds(ctx.selected_w, ctx.out("thresholds/selected.tsv"));
}

inline void stage_cluster(PipelineContext& ctx) {
    for (const auto& [year, net] : ctx.networks) {
        BinaryNetwork bin = threshold(net, ctx.selected_w.at(year));
        CommunitySet comms = bin.node_count() > 0
                                 ? k_clique_communities(bin, ctx.cfg.k, ctx.cfg.clique_budget)
                                 : CommunitySet{year, ctx.cfg.k, {}, false};
        comms.year = year;
        ctx.binary[year] = std::move(bin);
        ctx.communities[year] = std::move(comms);
    }
    io::save_communities(ctx.communities, ctx.store, ctx.out("communities/communities.tsv"));
}

inline void stage_match(PipelineContext& ctx) {
    ctx.timelines = build_timelines(ctx.communities, ctx.binary, ctx.cfg.clique_budget);
    ctx.transitions = detect_transitions(ctx.timelines, ctx.cfg.strict_moves);
    io::save_timelines(ctx.timelines, ctx.store, ctx.out("timelines"));
    io::save_transitions(ctx.transitions, ctx.store, ctx.out("timelines/transitions.tsv"));
}

inline void stage_metrics(PipelineContext& ctx) {
    ctx.citations = build_citation_graph(ctx.store);
    ctx.group_metrics =
        compute_group_metrics(ctx.timelines, ctx.communities, ctx.citations, ctx.cfg.lambda);
    ctx.lifecycle = lifecycle_stats(ctx.timelines, ctx.group_metrics);

    {
        auto out = io::open_out(ctx.out("metrics/group_metrics.tsv"));
        out << "timeline_id\tyear\tsize\tcohesion\tefficiency\ttotal_overlap\trelative_total_"
               "overlap\n";
        for (const auto& m : ctx.group_metrics)
            out << m.timeline_id << '\t' << m.year << '\t' << m.size << '\t'
                << io::fmt_double(m.cohesion) << '\t' << io::fmt_double(m.efficiency) << '\t'
                << m.total_overlap << '\t' << io::fmt_double(m.relative_total_overlap) << '\n';
    }
    {
        auto out = io::open_out(ctx.out("metrics/lifespan_histogram.tsv"));
        out << "lifespan\tcount\n";
        for (const auto& [l, n] : ctx.lifecycle.lifespan_histogram) out << l << '\t' << n << '\n';
    }
    {
        auto out = io::open_out(ctx.out("metrics/size_histogram.tsv"));
        out << "size_bin_low\tcount\n";
        for (const auto& [b, n] : ctx.lifecycle.size_histogram) out << b << '\t' << n << '\n';
    }
    {
        auto out = io::open_out(ctx.out("metrics/efficiency_histogram.tsv"));
        out << "efficiency_bin_low\tcount\n";
        for (const auto& [b, n] : ctx.lifecycle.efficiency_histogram)
            out << b << '\t' << n << '\n';
    }
    {
        auto out = io::open_out(ctx.out("metrics/cohesion_histogram.tsv"));
        out << "cohesion_bin_low\tcount\n";
        for (const auto& [lo, n] : ctx.lifecycle.cohesion_histogram)
            out << io::fmt_double(lo) << '\t' << n << '\n';
    }
    auto save_curve = [&](const BinnedCurve& c, const std::string& rel) {
        auto out = io::open_out(ctx.out(rel));
        out << "bin_low\tbin_high\tmean\tstddev\tcount\n";
        for (std::size_t i = 0; i < c.mean.size(); ++i)
            out << io::fmt_double(c.bin_low[i]) << '\t' << io::fmt_double(c.bin_high[i]) << '\t'
                << io::fmt_double(c.mean[i]) << '\t' << io::fmt_double(c.stddev[i]) << '\t'
                << c.count[i] << '\n';
    };
    save_curve(ctx.lifecycle.size_vs_lifespan, "metrics/size_vs_lifespan.tsv");
    save_curve(ctx.lifecycle.size_vs_cohesion, "metrics/size_vs_cohesion.tsv");
    {
        auto out = io::open_out(ctx.out("metrics/multidisciplinarity.tsv"));
        out << "year\tall_published\tco_cited\tgrouped\n";
        for (const auto& [year, comms] : ctx.communities) {
            double all = multi_ratio_published_up_to(ctx.store, year,
                                                     ctx.cfg.multidisciplinary_category);
            auto bit = ctx.binary.find(year);
            double coc = bit == ctx.binary.end()
                             ? 0.0
                             : multi_ratio_of_nodes(bit->second.node_list(), ctx.store,
                                                    ctx.cfg.multidisciplinary_category);
            double grp = multi_ratio_of_nodes(community_members_union(comms), ctx.store,
                                              ctx.cfg.multidisciplinary_category);
            out << year << '\t' << io::fmt_double(all) << '\t' << io::fmt_double(coc) << '\t'
                << io::fmt_double(grp) << '\n';
        }
    }
    {
        auto out = io::open_out(ctx.out("metrics/multi_vs_threshold.tsv"));
        out << "year\tw\tratio\n";
        for (const auto& [year, net] : ctx.networks)
            for (const auto& [w, r] :
                 multidisciplinarity_vs_threshold(net, ctx.store,
                                                  ctx.cfg.multidisciplinary_category))
                out << year << '\t' << w << '\t' << io::fmt_double(r) << '\n';
    }
    {
        auto out = io::open_out(ctx.out("metrics/top_categories.tsv"));
        out << "timeline_id\trank\tcategory\tmean_ratio\n";
        for (const auto& tl : ctx.timelines.timelines) {
            auto top = top_categories(tl, ctx.store);
            for (std::size_t i = 0; i < top.size(); ++i)
                out << tl.id << '\t' << i + 1 << '\t' << top[i].first << '\t'
                    << io::fmt_double(top[i].second) << '\n';
        }
    }
}

inline void stage_tags(PipelineContext& ctx) {
    auto candidates = build_candidate_set(ctx.store);
    // per year: matrices and keyword sets for every community, in canonical order
    std::map<int, std::vector<KeywordMatrix>> matrices;
    std::map<int, YearContext> year_ctx;
    for (const auto& [year, comms] : ctx.communities) {
        std::vector<std::unordered_set<std::string>> kwsets;
        for (const auto& c : comms.communities) {
            matrices[year].push_back(match_titles(c, ctx.store, candidates));
            kwsets.push_back(matrices[year].back().keyword_set());
        }
        year_ctx[year] = build_year_context(kwsets);
    }
    auto community_index = [&](int year, const std::vector<DenseId>& members) -> int {
        const auto& cs = ctx.communities.at(year).communities;
        auto it = std::lower_bound(cs.begin(), cs.end(), members);
        if (it == cs.end() || *it != members) return -1;
        return static_cast<int>(it - cs.begin());
    };
    for (const auto& tl : ctx.timelines.timelines) {
        for (const auto& [year, state] : tl.states) {
            StateTags st;
            st.timeline_id = tl.id;
            st.year = year;
            int idx = community_index(year, state.members);
            if (idx >= 0) {
                const KeywordMatrix& mat = matrices.at(year)[static_cast<std::size_t>(idx)];
                if (!mat.keywords.empty()) {
                    auto scored = tfidf_scores(mat, year_ctx.at(year));
                    st.scored = filter_keywords(scored);
                    if (!st.scored.empty()) {
                        std::vector<std::string> kws;
                        for (const auto& sk : st.scored) kws.push_back(sk.keyword);
                        st.selection = rcur_select(restrict_matrix(mat, kws), st.scored);
                    }
                }
            }
            ctx.tags.push_back(std::move(st));
        }
    }
    {
        auto out = io::open_out(ctx.out("tags/tags.tsv"));
        out << "timeline_id\tyear\tscored\tselected\tmethod\n";
        for (const auto& st : ctx.tags) {
            std::string scored, selected;
            for (const auto& sk : st.scored) {
                if (!scored.empty()) scored += ';';
                scored += sk.keyword + ":" + io::fmt_double(sk.score);
            }
            for (const auto& kw : st.selection.selected) {
                if (!selected.empty()) selected += ';';
                selected += kw;
            }
            out << st.timeline_id << '\t' << st.year << '\t' << scored << '\t' << selected << '\t'
                << to_string(st.selection.method) << '\n';
        }
    }
    {
        // 4-year-window compression for long-lived timelines
        std::map<int, std::map<int, std::vector<std::string>>> selected_by_tl;
        for (const auto& st : ctx.tags)
            selected_by_tl[st.timeline_id][st.year] = st.selection.selected;
        auto out = io::open_out(ctx.out("tags/window_tags.tsv"));
        out << "timeline_id\tfrom_year\tto_year\ttags\n";
        for (const auto& tl : ctx.timelines.timelines) {
            if (tl.lifespan() < ctx.cfg.min_lifespan) continue;
            auto windows = window_tags(selected_by_tl[tl.id], tl.birth_year, tl.death_year,
                                       ctx.cfg.window);
            ctx.windowed[tl.id] = windows;
            for (const auto& w : windows) {
                std::string tags;
                for (const auto& t : w.tags) {
                    if (!tags.empty()) tags += ';';
                    tags += t;
                }
                out << tl.id << '\t' << w.from_year << '\t' << w.to_year << '\t' << tags << '\n';
            }
        }
    }
}

// -- map and figures ---------------------------------------------------------

inline void emit_map(PipelineContext& ctx) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = 1;
    doc["min_lifespan"] = ctx.cfg.min_lifespan;
    doc["min_display_size"] = ctx.cfg.min_display_size;
    std::set<int> shown;
    doc["timelines"] = nlohmann::ordered_json::array();
    for (const auto& tl : ctx.timelines.timelines) {
        if (tl.lifespan() < ctx.cfg.min_lifespan) continue;
        shown.insert(tl.id);
        nlohmann::ordered_json row;
        row["id"] = tl.id;
        row["birth_year"] = tl.birth_year;
        row["death_year"] = tl.death_year;
        row["categories"] = nlohmann::ordered_json::array();
        for (const auto& [cat, ratio] : top_categories(tl, ctx.store)) {
            nlohmann::ordered_json c;
            c["name"] = cat;
            c["mean_ratio"] = ratio;
            row["categories"].push_back(c);
        }
        row["sizes"] = nlohmann::ordered_json::array();
        for (const auto& [year, state] : tl.states) {
            nlohmann::ordered_json s;
            s["year"] = year;
            s["size"] = state.members.size();
            s["show_size"] = state.members.size() > ctx.cfg.min_display_size;
            row["sizes"].push_back(s);
        }
        row["windows"] = nlohmann::ordered_json::array();
        auto wit = ctx.windowed.find(tl.id);
        if (wit != ctx.windowed.end())
            for (const auto& w : wit->second) {
                nlohmann::ordered_json wj;
                wj["from_year"] = w.from_year;
                wj["to_year"] = w.to_year;
                wj["tags"] = w.tags;
                row["windows"].push_back(wj);
            }
        doc["timelines"].push_back(row);
    }
    doc["transitions"] = nlohmann::ordered_json::array();
    for (const auto& e : ctx.transitions) {
        if (!shown.count(e.from_timeline) || !shown.count(e.to_timeline)) continue;
        nlohmann::ordered_json t;
        t["from"] = e.from_timeline;
        t["to"] = e.to_timeline;
        t["year"] = e.year;
        t["size"] = e.moved.size();
        t["show_size"] = e.moved.size() > ctx.cfg.min_display_size;
        doc["transitions"].push_back(t);
    }
    {
        auto out = io::open_out(ctx.out("map/map.json"));
        out << doc.dump(2) << '\n';
    }

    // basic renderable map: one row per timeline, rectangles per yearly state,
    // arrows for transitions
    const double row_h = 60, year_w = 48, left = 240, top = 40;
    std::map<int, double> row_y;
    double y = top;
    int ymin = ctx.cfg.year_to, ymax = ctx.cfg.year_from;
    std::size_t max_size = 1;
    for (const auto& tl : ctx.timelines.timelines) {
        if (!shown.count(tl.id)) continue;
        row_y[tl.id] = y;
        y += row_h;
        ymin = std::min(ymin, tl.birth_year);
        ymax = std::max(ymax, tl.death_year);
        for (const auto& [yy, st] : tl.states) max_size = std::max(max_size, st.members.size());
    }
    auto xpos = [&](int year) { return left + year_w * static_cast<double>(year - ymin); };
    auto out = io::open_out(ctx.out("map/map.svg"));
    double width = xpos(ymax) + year_w + 40, height = y + 40;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
        << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
    out << "<defs><marker id='arrow' markerWidth='8' markerHeight='8' refX='6' refY='3' "
           "orient='auto'><path d='M0,0 L6,3 L0,6 z' fill='#d62728'/></marker></defs>\n";
    for (int yy = ymin; yy <= ymax; ++yy)
        out << "<text x='" << xpos(yy) << "' y='" << top - 16
            << "' font-size='10' text-anchor='middle'>" << yy << "</text>\n";
    for (const auto& tl : ctx.timelines.timelines) {
        if (!shown.count(tl.id)) continue;
        double ry = row_y[tl.id];
        std::string label = "T" + std::to_string(tl.id);
        auto cats = top_categories(tl, ctx.store);
        for (std::size_t i = 0; i < cats.size() && i < 2; ++i)
            label += (i == 0 ? ": " : "; ") + cats[i].first;
        out << "<text x='8' y='" << ry + 4 << "' font-size='10'>" << label << "</text>\n";
        for (const auto& [yy, st] : tl.states) {
            double h = 6.0 + 34.0 * static_cast<double>(st.members.size()) /
                                 static_cast<double>(max_size);
            out << "<rect x='" << xpos(yy) - year_w * 0.4 << "' y='" << ry - h / 2 << "' width='"
                << year_w * 0.8 << "' height='" << io::fmt_double(h)
                << "' fill='#9ecae1' stroke='#3182bd'/>\n";
            if (st.members.size() > ctx.cfg.min_display_size)
                out << "<text x='" << xpos(yy) << "' y='" << ry + 3
                    << "' font-size='9' text-anchor='middle'>" << st.members.size()
                    << "</text>\n";
        }
    }
    for (const auto& e : ctx.transitions) {
        if (!shown.count(e.from_timeline) || !shown.count(e.to_timeline)) continue;
        double x1 = xpos(e.year) + year_w * 0.4, y1 = row_y[e.from_timeline];
        double x2 = xpos(e.year + 1) - year_w * 0.4, y2 = row_y[e.to_timeline];
        out << "<line x1='" << x1 << "' y1='" << y1 << "' x2='" << x2 << "' y2='" << y2
            << "' stroke='#d62728' marker-end='url(#arrow)'/>\n";
        if (e.moved.size() > ctx.cfg.min_display_size)
            out << "<text x='" << (x1 + x2) / 2 << "' y='" << (y1 + y2) / 2 - 4
                << "' font-size='9' fill='#d62728' text-anchor='middle'>" << e.moved.size()
                << "</text>\n";
    }
    out << "</svg>\n";
}

inline void emit_figures(PipelineContext& ctx) {
    auto table = [&](const std::string& rel) { return io::open_out(ctx.out(rel)); };

    {  // yearly publication and citation counts
        auto stats = corpus_stats(ctx.store);
        auto out = table("figures/fig2.tsv");
        out << "year\tpublished\tciting\tco_citing\tcited\tco_cited\n";
        std::vector<svg::Series> series(5);
        const char* names[] = {"published", "citing", "co_citing", "cited", "co_cited"};
        for (int i = 0; i < 5; ++i) series[static_cast<std::size_t>(i)].label = names[i];
        for (const auto& [year, s] : stats) {
            out << year << '\t' << s.published << '\t' << s.citing << '\t' << s.co_citing << '\t'
                << s.cited << '\t' << s.co_cited << '\n';
            double x = year;
            series[0].points.emplace_back(x, static_cast<double>(s.published));
            series[1].points.emplace_back(x, static_cast<double>(s.citing));
            series[2].points.emplace_back(x, static_cast<double>(s.co_citing));
            series[3].points.emplace_back(x, static_cast<double>(s.cited));
            series[4].points.emplace_back(x, static_cast<double>(s.co_cited));
        }
        svg::line_chart(series, "Yearly publication and citation counts",
                        ctx.out("figures/fig2.svg"));
    }
    {  // category usage
        auto usage = category_usage(ctx.store, ctx.cfg.min_category_ratio);
        auto out = table("figures/fig3.tsv");
        out << "category\tyear\tratio\n";
        std::vector<svg::Series> series;
        for (const auto& [cat, years] : usage) {
            svg::Series s;
            s.label = cat;
            for (const auto& [year, ratio] : years) {
                out << cat << '\t' << year << '\t' << io::fmt_double(ratio) << '\n';
                s.points.emplace_back(year, ratio);
            }
            if (series.size() < 8) series.push_back(std::move(s));
        }
        svg::line_chart(series, "Category usage ratio per year", ctx.out("figures/fig3.svg"));
    }
    {  // network size vs threshold
        auto out = table("figures/fig4a.tsv");
        out << "year\tw\tnodes\n";
        std::vector<svg::Series> series;
        for (const auto& [year, net] : ctx.networks) {
            svg::Series s;
            s.label = std::to_string(year);
            for (const auto& [w, n] : size_vs_threshold(net)) {
                out << year << '\t' << w << '\t' << n << '\n';
                s.points.emplace_back(w, static_cast<double>(n));
            }
            if (!s.points.empty() && series.size() < 8) series.push_back(std::move(s));
        }
        svg::line_chart(series, "Co-citation network size vs weight threshold",
                        ctx.out("figures/fig4a.svg"));
    }
    {  // clustered nodes and largest group at the selected threshold
        auto out = table("figures/fig4b.tsv");
        out << "year\tclustered_nodes\tlargest_group\n";
        svg::Series s1{"clustered", {}}, s2{"largest", {}};
        for (const auto& [year, comms] : ctx.communities) {
            std::size_t clustered = community_members_union(comms).size();
            std::size_t largest = 0;
            for (const auto& c : comms.communities) largest = std::max(largest, c.size());
            out << year << '\t' << clustered << '\t' << largest << '\n';
            s1.points.emplace_back(year, static_cast<double>(clustered));
            s2.points.emplace_back(year, static_cast<double>(largest));
        }
        svg::line_chart({s1, s2}, "Clustered articles per year", ctx.out("figures/fig4b.svg"));
    }
    {  // group state size histogram
        auto out = table("figures/fig4c.tsv");
        out << "size_bin_low\tcount\n";
        std::vector<std::pair<std::string, double>> bars;
        for (const auto& [b, n] : ctx.lifecycle.size_histogram) {
            out << b << '\t' << n << '\n';
            bars.emplace_back(std::to_string(b), static_cast<double>(n));
        }
        svg::bar_chart(bars, "Group state sizes", ctx.out("figures/fig4c.svg"));
    }
    {  // lifespan histogram
        auto out = table("figures/fig5a.tsv");
        out << "lifespan\tcount\n";
        std::vector<std::pair<std::string, double>> bars;
        for (const auto& [l, n] : ctx.lifecycle.lifespan_histogram) {
            out << l << '\t' << n << '\n';
            bars.emplace_back(std::to_string(l), static_cast<double>(n));
        }
        svg::bar_chart(bars, "Timeline lifespans", ctx.out("figures/fig5a.svg"));
    }
    {  // size histogram: all states vs states with overlap
        std::map<std::size_t, std::size_t> all, overlapped;
        for (const auto& m : ctx.group_metrics) {
            auto bin = static_cast<std::size_t>(1) << exp_bin(static_cast<double>(m.size));
            ++all[bin];
            if (m.total_overlap > 0) ++overlapped[bin];
        }
        auto out = table("figures/fig5b.tsv");
        out << "size_bin_low\tall_states\toverlapping_states\n";
        for (const auto& [b, n] : all)
            out << b << '\t' << n << '\t' << (overlapped.count(b) ? overlapped[b] : 0) << '\n';
    }
    {  // overlap histograms over states with at least one shared member
        std::map<std::size_t, std::size_t> total;
        std::vector<double> rel;
        for (const auto& m : ctx.group_metrics)
            if (m.total_overlap > 0) {
                ++total[m.total_overlap];
                rel.push_back(m.relative_total_overlap);
            }
        auto out = table("figures/fig5c.tsv");
        out << "total_overlap\tcount\n";
        for (const auto& [t, n] : total) out << t << '\t' << n << '\n';
        auto out2 = table("figures/fig5d.tsv");
        out2 << "relative_overlap_bin_low\tcount\n";
        for (const auto& [lo, n] : linear_histogram(rel, 0.0, 1.0, 10))
            out2 << io::fmt_double(lo) << '\t' << n << '\n';
    }
    {  // efficiency and cohesion histograms
        auto out = table("figures/fig6a.tsv");
        out << "efficiency_bin_low\tcount\n";
        for (const auto& [b, n] : ctx.lifecycle.efficiency_histogram)
            out << b << '\t' << n << '\n';
        auto out2 = table("figures/fig6b.tsv");
        out2 << "cohesion_bin_low\tcount\n";
        std::vector<std::pair<std::string, double>> bars;
        for (const auto& [lo, n] : ctx.lifecycle.cohesion_histogram) {
            out2 << io::fmt_double(lo) << '\t' << n << '\n';
            bars.emplace_back(io::fmt_double(lo), static_cast<double>(n));
        }
        svg::bar_chart(bars, "Group cohesion", ctx.out("figures/fig6b.svg"));
    }
    {  // size vs lifespan / cohesion curves
        auto save = [&](const BinnedCurve& c, const std::string& rel, const std::string& title,
                        const std::string& svg_rel) {
            auto out = table(rel);
            out << "size_bin_low\tsize_bin_high\tmean\tstddev\tcount\n";
            svg::Series s{"mean", {}};
            for (std::size_t i = 0; i < c.mean.size(); ++i) {
                out << io::fmt_double(c.bin_low[i]) << '\t' << io::fmt_double(c.bin_high[i])
                    << '\t' << io::fmt_double(c.mean[i]) << '\t' << io::fmt_double(c.stddev[i])
                    << '\t' << c.count[i] << '\n';
                s.points.emplace_back(c.bin_low[i], c.mean[i]);
            }
            svg::line_chart({s}, title, ctx.out(svg_rel));
        };
        save(ctx.lifecycle.size_vs_lifespan, "figures/fig6c.tsv", "Lifespan vs group size",
             "figures/fig6c.svg");
        save(ctx.lifecycle.size_vs_cohesion, "figures/fig6d.tsv", "Cohesion vs group size",
             "figures/fig6d.svg");
    }
    {  // category presence among groups
        auto out = table("figures/fig8.tsv");
        out << "year\tcategory\tgroup_ratio\n";
        std::map<std::string, std::map<int, double>> ratios;
        for (const auto& [year, comms] : ctx.communities) {
            if (comms.communities.empty()) continue;
            std::map<std::string, std::size_t> groups_with;
            for (const auto& c : comms.communities) {
                std::map<std::string, std::size_t> counts;
                for (DenseId m : c)
                    for (const auto& cat : ctx.store.record(m).categories) ++counts[cat];
                for (const auto& [cat, n] : counts)
                    if (static_cast<double>(n) > 0.1 * static_cast<double>(c.size()))
                        ++groups_with[cat];
            }
            for (const auto& [cat, n] : groups_with)
                ratios[cat][year] =
                    static_cast<double>(n) / static_cast<double>(comms.communities.size());
        }
        for (auto it = ratios.begin(); it != ratios.end();) {
            bool keep = false;
            for (const auto& [year, r] : it->second)
                if (r > 0.1) keep = true;
            it = keep ? std::next(it) : ratios.erase(it);
        }
        for (const auto& [cat, years] : ratios)
            for (const auto& [year, r] : years)
                out << year << '\t' << cat << '\t' << io::fmt_double(r) << '\n';
    }
    {  // multidisciplinarity ratio per selector (pass-through of the metrics table)
        auto out = table("figures/fig9.tsv");
        out << "year\tall_published\tco_cited\tgrouped\n";
        svg::Series sa{"all_published", {}}, sc{"co_cited", {}}, sg{"grouped", {}};
        for (const auto& [year, comms] : ctx.communities) {
            double all = multi_ratio_published_up_to(ctx.store, year,
                                                     ctx.cfg.multidisciplinary_category);
            auto bit = ctx.binary.find(year);
            double coc = bit == ctx.binary.end()
                             ? 0.0
                             : multi_ratio_of_nodes(bit->second.node_list(), ctx.store,
                                                    ctx.cfg.multidisciplinary_category);
            double grp = multi_ratio_of_nodes(community_members_union(comms), ctx.store,
                                              ctx.cfg.multidisciplinary_category);
            out << year << '\t' << io::fmt_double(all) << '\t' << io::fmt_double(coc) << '\t'
                << io::fmt_double(grp) << '\n';
            sa.points.emplace_back(year, all);
            sc.points.emplace_back(year, coc);
            sg.points.emplace_back(year, grp);
        }
        svg::line_chart({sa, sc, sg}, "Multidisciplinarity ratio per selector",
                        ctx.out("figures/fig9.svg"));
    }
    {  // multidisciplinarity vs threshold
        auto out = table("figures/fig10.tsv");
        out << "year\tw\tratio\n";
        std::vector<svg::Series> series;
        for (const auto& [year, net] : ctx.networks) {
            svg::Series s;
            s.label = std::to_string(year);
            for (const auto& [w, r] :
                 multidisciplinarity_vs_threshold(net, ctx.store,
                                                  ctx.cfg.multidisciplinary_category)) {
                out << year << '\t' << w << '\t' << io::fmt_double(r) << '\n';
                s.points.emplace_back(w, r);
            }
            if (!s.points.empty() && series.size() < 8) series.push_back(std::move(s));
        }
        svg::line_chart(series, "Multidisciplinarity ratio vs weight threshold",
                        ctx.out("figures/fig10.svg"));
    }
}

inline void stage_map(PipelineContext& ctx) {
    emit_map(ctx);
    emit_figures(ctx);
}

// -- driver ------------------------------------------------------------------

inline void run_pipeline(const PipelineConfig& cfg) {
    PipelineContext ctx;
    ctx.cfg = cfg;
    ctx.cfg.validate();

    struct Stage {
        const char* name;
        void (*fn)(PipelineContext&);
        std::vector<const char*> dirs;
    };
    const std::vector<Stage> stages = {
        {"ingest", stage_ingest, {"corpus"}},
        {"build", stage_build, {"networks"}},
        {"threshold", stage_threshold, {"thresholds"}},
        {"cluster", stage_cluster, {"communities"}},
        {"match", stage_match, {"timelines"}},
        {"metrics", stage_metrics, {"metrics"}},
        {"tags", stage_tags, {"tags"}},
        {"map", stage_map, {"map", "figures"}},
    };

    nlohmann::ordered_json manifest;
    manifest["schema_version"] = 1;
    manifest["config"] = cfg.to_json();
    manifest["stages"] = nlohmann::ordered_json::array();
    for (const auto& stage : stages) {
        try {
            stage.fn(ctx);
        } catch (const std::exception& e) {
            throw std::runtime_error(std::string("stage ") + stage.name + ": " + e.what());
        }
        nlohmann::ordered_json sj;
        sj["name"] = stage.name;
        sj["outputs"] = nlohmann::ordered_json::array();
        for (const char* dir : stage.dirs) {
            fs::path d = ctx.out(dir);
            if (!fs::exists(d)) continue;
            std::vector<fs::path> files;
            for (const auto& entry : fs::recursive_directory_iterator(d))
                if (entry.is_regular_file()) files.push_back(entry.path());
            std::sort(files.begin(), files.end());
            for (const auto& f : files) {
                nlohmann::ordered_json fj;
                fj["path"] = fs::relative(f, ctx.cfg.output).generic_string();
                char buf[32];
                std::snprintf(buf, sizeof(buf), "fnv64:%016llx",
                              static_cast<unsigned long long>(io::fnv1a64_file(f)));
                fj["checksum"] = buf;
                sj["outputs"].push_back(fj);
            }
        }
        manifest["stages"].push_back(sj);
    }
    auto out = io::open_out(ctx.out("manifest.json"));
    out << manifest.dump(2) << '\n';
}

}  // namespace cocimap
