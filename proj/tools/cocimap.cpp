#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cocimap/pipeline.hpp"
#include "cocimap/synthetic.hpp"

namespace {

using namespace cocimap;

// Flags shared by the standalone stage subcommands. Each stage reloads its
// prerequisites from the workspace directory written by the earlier stages.
struct CommonArgs {
    std::string out = "out";
    std::string input;
    std::string range = "1975:2008";
    int k = 4;
    std::string criterion = "ratio2";
    double lambda = kDefaultDecayRate;
    int window = 4;
    int min_lifespan = 14;
    std::size_t min_display_size = 10;
    bool strict = false;
    bool strict_moves = false;
    std::uint64_t budget = 0;
    std::string timelines_file;  // metrics: timeline table override
    std::string citations_file;  // metrics: corpus override for the citation graph

    PipelineConfig to_config() const {
        PipelineConfig cfg;
        cfg.input = input;
        cfg.output = out;
        auto colon = range.find(':');
        if (colon == std::string::npos) throw CLI::ValidationError("--range must be FROM:TO");
        cfg.year_from = std::stoi(range.substr(0, colon));
        cfg.year_to = std::stoi(range.substr(colon + 1));
        cfg.k = k;
        cfg.criterion =
            criterion == "entropy" ? ThresholdCriterion::entropy : ThresholdCriterion::ratio2;
        cfg.lambda = lambda;
        cfg.window = window;
        cfg.min_lifespan = min_lifespan;
        cfg.min_display_size = min_display_size;
        cfg.strict = strict;
        cfg.strict_moves = strict_moves;
        cfg.clique_budget = budget;
        if (const char* p = std::getenv("COCIMAP_INPUT")) cfg.input = p;
        if (const char* p = std::getenv("COCIMAP_OUTPUT")) cfg.output = p;
        cfg.validate();
        return cfg;
    }
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--out", a.out, "workspace directory");
    cmd->add_option("--range", a.range, "analysis year range FROM:TO");
    cmd->add_option("--k", a.k, "clique size for percolation");
    cmd->add_option("--criterion", a.criterion, "threshold criterion: ratio2|entropy")
        ->check(CLI::IsMember({"ratio2", "entropy"}));
    cmd->add_option("--budget", a.budget, "clique enumeration work budget (0 = unlimited)");
}

// -- reload helpers for standalone stages ------------------------------------

void load_corpus(PipelineContext& ctx, const std::string& override_path = "") {
    fs::path path =
        override_path.empty() ? ctx.out("corpus/corpus.ndjson") : fs::path(override_path);
    ParseOptions opt{ctx.cfg.year_from, ctx.cfg.year_to, true};
    auto in = io::open_in(path);
    ctx.store = parse_corpus(in, opt);
}

void load_networks(PipelineContext& ctx) {
    for (int y = ctx.cfg.year_from; y <= ctx.cfg.year_to; ++y) {
        auto path = ctx.out("networks/net_" + std::to_string(y) + ".tsv");
        if (!fs::exists(path)) continue;
        ctx.networks[y] = io::load_network(path, ctx.store, y);
    }
    if (ctx.networks.empty()) throw std::runtime_error("no networks found; run build first");
}

void load_thresholded(PipelineContext& ctx) {
    ctx.selected_w = io::load_selected_thresholds(ctx.out("thresholds/selected.tsv"));
    for (const auto& [year, net] : ctx.networks)
        ctx.binary[year] = threshold(net, ctx.selected_w.at(year));
}

void load_clustered(PipelineContext& ctx) {
    ctx.communities = io::load_communities(ctx.out("communities/communities.tsv"), ctx.store,
                                           ctx.cfg.k);
    for (const auto& [year, net] : ctx.networks)
        if (!ctx.communities.count(year))
            ctx.communities[year] = CommunitySet{year, ctx.cfg.k, {}, false};
}

void load_matched(PipelineContext& ctx, const std::string& override_path = "") {
    fs::path path =
        override_path.empty() ? ctx.out("timelines/timelines.tsv") : fs::path(override_path);
    ctx.timelines = io::load_timelines(path, ctx.store);
    ctx.transitions = detect_transitions(ctx.timelines, ctx.cfg.strict_moves);
}

int run_stage(const CommonArgs& args, const std::string& stage) {
    PipelineContext ctx;
    ctx.cfg = args.to_config();
    if (stage == "ingest") {
        if (ctx.cfg.input.empty()) throw CLI::ValidationError("ingest requires --input");
        stage_ingest(ctx);
        return 0;
    }
    load_corpus(ctx, args.citations_file);
    if (stage == "build") {
        stage_build(ctx);
        return 0;
    }
    load_networks(ctx);
    if (stage == "threshold") {
        // preload earlier selections so a single-year rerun merges instead of
        // clobbering the table
        auto sel_path = ctx.out("thresholds/selected.tsv");
        if (fs::exists(sel_path)) ctx.selected_w = io::load_selected_thresholds(sel_path);
        stage_threshold(ctx);
        return 0;
    }
    load_thresholded(ctx);
    if (stage == "cluster") {
        auto comm_path = ctx.out("communities/communities.tsv");
        if (fs::exists(comm_path))
            ctx.communities = io::load_communities(comm_path, ctx.store, ctx.cfg.k);
        stage_cluster(ctx);
        return 0;
    }
    load_clustered(ctx);
    if (stage == "match") {
        stage_match(ctx);
        return 0;
    }
    load_matched(ctx, args.timelines_file);
    if (stage == "metrics") {
        stage_metrics(ctx);
        return 0;
    }
    if (stage == "tags") {
        stage_tags(ctx);
        return 0;
    }
    // map and figures both need metrics and tags in memory
    ctx.citations = build_citation_graph(ctx.store);
    ctx.group_metrics =
        compute_group_metrics(ctx.timelines, ctx.communities, ctx.citations, ctx.cfg.lambda);
    ctx.lifecycle = lifecycle_stats(ctx.timelines, ctx.group_metrics);
    stage_tags(ctx);
    if (stage == "figures") {
        emit_figures(ctx);
        return 0;
    }
    stage_map(ctx);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"co-citation community timeline toolkit"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string config_path;
    int year = 0;
    bool all_years = false;

    auto* ingest = app.add_subcommand("ingest", "parse the publication corpus");
    ingest->add_option("--input", args.input, "line-delimited corpus file")->required();
    ingest->add_flag("--strict", args.strict, "abort on any malformed record");
    add_common(ingest, args);

    auto* build = app.add_subcommand("build", "build yearly co-citation networks");
    build->add_option("--year", year, "single year to build");
    build->add_flag("--all", all_years, "build every year in range");
    add_common(build, args);

    auto* thresholdc = app.add_subcommand("threshold", "scan and select edge-weight thresholds");
    thresholdc->add_option("--year", year, "single year to scan");
    thresholdc->add_flag("--all", all_years, "scan every year in range");
    add_common(thresholdc, args);

    auto* cluster = app.add_subcommand("cluster", "extract overlapping communities");
    cluster->add_option("--year", year, "single year to cluster");
    cluster->add_flag("--all", all_years, "cluster every year in range");
    add_common(cluster, args);

    auto* match = app.add_subcommand("match", "chain communities into timelines");
    int from_year = 0, to_year = 0;
    match->add_option("--from", from_year, "first year to match");
    match->add_option("--to", to_year, "last year to match");
    match->add_flag("--strict-moves", args.strict_moves,
                    "exclude movers still present in the source timeline");
    add_common(match, args);

    auto* metrics = app.add_subcommand("metrics", "per-state and lifecycle statistics");
    metrics->add_option("--timelines", args.timelines_file,
                        "timeline table (default from workspace)");
    metrics->add_option("--citations", args.citations_file,
                        "corpus file for the citation graph");
    metrics->add_option("--lambda", args.lambda, "citation age decay rate");
    add_common(metrics, args);

    auto* tags = app.add_subcommand("tags", "keyword tagging of timeline states");
    tags->add_option("--year", year, "single year to tag");
    tags->add_flag("--all", all_years, "tag every year in range");
    tags->add_option("--window", args.window, "window length for tag compression");
    tags->add_option("--min-lifespan", args.min_lifespan,
                     "minimum lifespan for windowed tag output");
    add_common(tags, args);

    auto* mapc = app.add_subcommand("map", "emit the timeline map document and rendering");
    mapc->add_option("--min-lifespan", args.min_lifespan, "minimum lifespan shown on the map");
    mapc->add_option("--min-display-size", args.min_display_size,
                     "smallest size labelled on the map");
    add_common(mapc, args);

    auto* figures = app.add_subcommand("figures", "emit report tables and chart renderings");
    add_common(figures, args);

    auto* runc = app.add_subcommand("run", "run the whole pipeline from a config file");
    runc->add_option("--config", config_path, "declarative pipeline configuration")->required();

    auto* synth = app.add_subcommand("synth", "write the bundled synthetic demo corpus");
    std::string synth_out = "demo_corpus.ndjson";
    std::uint64_t seed = 42;
    synth->add_option("--output", synth_out, "destination file");
    synth->add_option("--seed", seed, "generator seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (runc->parsed()) {
            run_pipeline(PipelineConfig::load(config_path));
            return 0;
        }
        if (synth->parsed()) {
            synthetic::DemoOptions opt;
            opt.seed = seed;
            auto out = io::open_out(synth_out);
            synthetic::write_demo_corpus(out, opt);
            return 0;
        }
        if (match->parsed() && from_year > 0 && to_year > 0)
            args.range = std::to_string(from_year) + ":" + std::to_string(to_year);
        bool single_year = !all_years && year > 0 &&
                           (build->parsed() || thresholdc->parsed() || cluster->parsed() ||
                            tags->parsed());
        if (single_year) args.range = std::to_string(year) + ":" + std::to_string(year);
        std::string stage;
        if (ingest->parsed()) stage = "ingest";
        else if (build->parsed()) stage = "build";
        else if (thresholdc->parsed()) stage = "threshold";
        else if (cluster->parsed()) stage = "cluster";
        else if (match->parsed()) stage = "match";
        else if (metrics->parsed()) stage = "metrics";
        else if (tags->parsed()) stage = "tags";
        else if (mapc->parsed()) stage = "map";
        else stage = "figures";
        return run_stage(args, stage);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
