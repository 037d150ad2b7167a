#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "otriage/corpus.hpp"
#include "otriage/errors.hpp"
#include "otriage/pipeline.hpp"
#include "otriage/simulator.hpp"

namespace {

using namespace otriage;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitStage = 3;

namespace fs = std::filesystem;

Corpus load_side(const std::string& data_dir, const std::string& side) {
    fs::path root(data_dir);
    return load_corpus_dir((root / side / "incidents.jsonl").string(),
                           (root / side / "outages.jsonl").string(),
                           (root / side / "labels.jsonl").string(),
                           (root / "catalog.tsv").string());
}

LocationLexicon load_lexicon(const std::string& data_dir) {
    return LocationLexicon::load((fs::path(data_dir) / "lexicon.txt").string());
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open for writing: " + path);
    out << body;
    if (!out) throw ValidationError("write failed: " + path);
}

struct WindowArgs {
    std::string preset = "third";
    std::string start;
    std::string end;
    std::int64_t t_minutes = 60;

    WindowSpec resolve() const {
        WindowSpec w = WindowSpec::preset(preset, t_minutes * 60'000);
        if (!start.empty()) w.start = Rational::parse(start);
        if (!end.empty()) w.end = Rational::parse(end);
        w.resolve();  // validate eagerly
        return w;
    }
};

void add_window_flags(CLI::App* cmd, WindowArgs& w) {
    cmd->add_option("--window", w.preset, "Window preset: third, two-thirds, full")
        ->default_val("third");
    cmd->add_option("--window-start", w.start,
                    "Window start as a multiple of T (e.g. -2, -3/2); overrides the preset");
    cmd->add_option("--window-end", w.end,
                    "Window end as a multiple of T (e.g. 1/3, 1); overrides the preset");
    cmd->add_option("--t-minutes", w.t_minutes, "Window scale T in minutes")->default_val(60);
}

int cmd_simulate(const ScenarioConfig& cfg, const std::string& out_dir) {
    Scenario s = generate_scenario(cfg);
    write_scenario(s, out_dir);
    std::printf("wrote %s: %zu train incidents / %zu outages, %zu test incidents / %zu outages\n",
                out_dir.c_str(), s.train.incidents.size(), s.train.outages.size(),
                s.test.incidents.size(), s.test.outages.size());
    return kExitOk;
}

int cmd_mine_templates(const std::string& incidents_path, const std::string& lexicon_path,
                       int support, const std::string& registry_out,
                       const std::string& vocab_out) {
    std::vector<Incident> incidents = load_incidents(incidents_path);
    LocationLexicon lexicon = LocationLexicon::load(lexicon_path);
    std::sort(incidents.begin(), incidents.end(), [](const Incident& a, const Incident& b) {
        if (a.created_at != b.created_at) return a.created_at < b.created_at;
        return a.incident_id < b.incident_id;
    });
    std::vector<std::string> titles;
    titles.reserve(incidents.size());
    for (const auto& inc : incidents) titles.push_back(inc.title);
    Vocabulary vocab = build_vocabulary(titles, support, lexicon);
    TemplateRegistry registry;
    TemplateResolver miner(registry, vocab, lexicon);
    for (const auto& inc : incidents) miner.resolve(inc);
    registry.save(registry_out);
    if (!vocab_out.empty()) vocab.save(vocab_out);
    std::printf("mined %zu templates from %zu incidents (vocabulary %zu words)\n",
                registry.size(), incidents.size(), vocab.size());
    return kExitOk;
}

int cmd_build_gm(const std::string& incidents_path, const std::string& labels_path,
                 const std::string& lexicon_path, int support, const std::string& gm_out,
                 const std::string& registry_out, const std::string& vocab_out) {
    Corpus corpus;
    corpus.incidents = load_incidents(incidents_path);
    corpus.correlations = load_correlations(labels_path);
    corpus.rebuild_index();
    LocationLexicon lexicon = LocationLexicon::load(lexicon_path);

    std::vector<const Incident*> order;
    for (const auto& inc : corpus.incidents) order.push_back(&inc);
    std::sort(order.begin(), order.end(), [](const Incident* a, const Incident* b) {
        if (a->created_at != b->created_at) return a->created_at < b->created_at;
        return a->incident_id < b->incident_id;
    });
    std::vector<std::string> titles;
    for (const Incident* inc : order) titles.push_back(inc->title);
    Vocabulary vocab = build_vocabulary(titles, support, lexicon);
    TemplateRegistry registry;
    TemplateResolver miner(registry, vocab, lexicon);
    for (const Incident* inc : order) miner.resolve(*inc);
    MetaGraph gm = build_gm(corpus.correlations, corpus, miner);
    gm.save(gm_out);
    if (!registry_out.empty()) registry.save(registry_out);
    if (!vocab_out.empty()) vocab.save(vocab_out);
    std::printf("built correlation graph: %zu nodes, %zu edges from %zu labels\n",
                gm.nodes.size(), gm.edges.size(), corpus.correlations.size());
    return kExitOk;
}

int cmd_train(const std::string& data_dir, const std::string& artifacts_dir,
              const std::string& model_name, const WindowArgs& window, int support,
              const TreeConfig& tree, const SvmConfig& svm, bool serial,
              const std::string& report_path) {
    Corpus train = load_side(data_dir, "train");
    LocationLexicon lexicon = load_lexicon(data_dir);

    PipelineConfig cfg;
    cfg.window = window.resolve();
    cfg.support_threshold = support;
    cfg.kind = model_name == "svm" ? ModelKind::Svm : ModelKind::Tree;
    cfg.tree = tree;
    cfg.svm = svm;
    cfg.mode = serial ? ExecMode::Serial : ExecMode::Parallel;

    TrainReport rep;
    TrainedArtifacts art = train_pipeline(train, lexicon, cfg, &rep);
    save_artifacts(art, artifacts_dir);
    std::string body = format_train_report(rep, art);
    if (!report_path.empty()) write_text(report_path, body);
    std::fputs(body.c_str(), stdout);
    for (const auto& t : rep.timings) std::printf("stage %s %.1fms\n", t.stage.c_str(), t.ms);
    return kExitOk;
}

int cmd_predict(const std::string& artifacts_dir, const std::string& data_dir,
                const std::string& side, const std::string& outage_id, int top) {
    TrainedArtifacts art = load_artifacts(artifacts_dir);
    Corpus corpus = load_side(data_dir, side);
    const Outage* outage = corpus.find_outage(outage_id);
    if (!outage) throw ValidationError("unknown outage: " + outage_id);
    WindowIndex index(corpus.incidents);
    OutagePrediction p = predict_outage(art, corpus, index, *outage);

    std::printf("outage %s\n", p.outage_id.c_str());
    std::printf("graph nodes %zu edges %zu services %zu\n", p.gi_nodes, p.gi_edges,
                p.gs_services);
    int shown = 0;
    for (const auto& [name, score] : p.prediction.ranking) {
        if (shown >= top) break;
        std::printf("rank %d %s %.6f\n", ++shown, name.c_str(), score);
    }
    if (p.low_confidence) std::printf("low-confidence\n");
    for (const auto& w : p.warnings) std::printf("warning %s\n", w.c_str());
    std::printf("latency_ms %.3f\n", p.latency_ms);
    return kExitOk;
}

int cmd_evaluate(const std::string& artifacts_dir, const std::string& data_dir,
                 const std::string& side, bool serial, const std::string& report_path) {
    TrainedArtifacts art = load_artifacts(artifacts_dir);
    Corpus corpus = load_side(data_dir, side);
    EvalReport rep =
        evaluate_corpus(art, corpus, serial ? ExecMode::Serial : ExecMode::Parallel);
    std::string body = format_eval_report(rep, corpus);
    if (!report_path.empty()) write_text(report_path, body);
    std::fputs(body.c_str(), stdout);
    std::printf("mean_latency_ms %.3f\n", rep.mean_latency_ms);
    return kExitOk;
}

int cmd_graph(const std::string& artifacts_dir, const std::string& data_dir,
              const std::string& side, const std::string& outage_id, const std::string& level,
              const std::string& out_path) {
    TrainedArtifacts art = load_artifacts(artifacts_dir);
    std::string body;
    if (level == "meta") {
        body = export_records(art.gm);
    } else {
        if (outage_id.empty())
            throw ValidationError("--outage is required for incident and service graphs");
        Corpus corpus = load_side(data_dir, side);
        const Outage* outage = corpus.find_outage(outage_id);
        if (!outage) throw ValidationError("unknown outage: " + outage_id);
        const Incident* origin = corpus.find_incident(outage->origin_incident_id);
        if (!origin)
            throw ValidationError("outage origin not found: " + outage->origin_incident_id);
        WindowSpec ws{Rational::parse(art.model.window_start),
                      Rational::parse(art.model.window_end), art.model.t_ms};
        WindowIndex index(corpus.incidents);
        std::vector<const Incident*> win = index.query(*outage, ws.resolve());
        std::vector<ResolvedIncident> cand;
        for (const Incident* p : win) {
            Template t = parse_title(p->title, art.vocab, art.lexicon, p->owning_service);
            cand.push_back({p, art.registry.lookup(t)});
        }
        Template ot = parse_title(origin->title, art.vocab, art.lexicon, origin->owning_service);
        IncidentGraph gi = build_gi(art.gm, cand, *origin, art.registry.lookup(ot));
        body = level == "incident" ? export_records(gi) : export_records(build_gs(gi));
    }
    if (out_path.empty())
        std::fputs(body.c_str(), stdout);
    else
        write_text(out_path, body);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Root-cause triage over correlated incident graphs"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "Generate a synthetic labeled scenario");
    ScenarioConfig scfg;
    std::string sim_out;
    sim->add_option("--out", sim_out, "Output directory")->required();
    sim->add_option("--seed", scfg.seed, "Generator seed")->default_val(42);
    sim->add_option("--services", scfg.n_services, "Catalog size")->default_val(60);
    sim->add_option("--patterns", scfg.n_patterns, "Cascade pattern count")->default_val(10);
    sim->add_option("--outages-per-pattern", scfg.outages_per_pattern,
                    "Outages generated per pattern")
        ->default_val(50);
    sim->add_option("--noise-ratio", scfg.noise_ratio, "Noise share of incidents")
        ->default_val(0.97);
    std::int64_t sim_t_minutes = 60;
    sim->add_option("--t-minutes", sim_t_minutes, "Window scale T in minutes")->default_val(60);
    sim->add_option("--train-fraction", scfg.train_fraction, "Chronological split point")
        ->default_val(0.8);
    sim->add_option("--step-drop", scfg.step_drop, "Interior step drop probability")
        ->default_val(0.1);
    sim->add_option("--region", scfg.regions, "Region names (repeatable)");
    sim->add_flag("--single-root", scfg.single_root,
                  "Degenerate corpus where every cascade shares one root");

    // mine-templates
    auto* mine = app.add_subcommand("mine-templates", "Mine title templates from incidents");
    std::string mine_incidents, mine_lexicon, mine_registry_out, mine_vocab_out;
    int mine_support = 2;
    mine->add_option("--incidents", mine_incidents, "Incident JSONL file")->required();
    mine->add_option("--lexicon", mine_lexicon, "Location lexicon file")->required();
    mine->add_option("--support", mine_support, "Vocabulary support threshold")->default_val(2);
    mine->add_option("--registry-out", mine_registry_out, "Registry output path")->required();
    mine->add_option("--vocab-out", mine_vocab_out, "Vocabulary output path");

    // build-gm
    auto* gmc = app.add_subcommand("build-gm", "Build the historical correlation graph");
    std::string gm_incidents, gm_labels, gm_lexicon, gm_out, gm_registry_out, gm_vocab_out;
    int gm_support = 2;
    gmc->add_option("--incidents", gm_incidents, "Incident JSONL file")->required();
    gmc->add_option("--labels", gm_labels, "Correlation label JSONL file")->required();
    gmc->add_option("--lexicon", gm_lexicon, "Location lexicon file")->required();
    gmc->add_option("--support", gm_support, "Vocabulary support threshold")->default_val(2);
    gmc->add_option("--out", gm_out, "Graph output path")->required();
    gmc->add_option("--registry-out", gm_registry_out, "Registry output path");
    gmc->add_option("--vocab-out", gm_vocab_out, "Vocabulary output path");

    // train
    auto* train = app.add_subcommand("train", "Train a triage model from a scenario directory");
    std::string train_data, train_artifacts, train_model = "tree", train_report;
    WindowArgs train_window;
    int train_support = 2;
    TreeConfig tree_cfg;
    SvmConfig svm_cfg;
    bool train_serial = false;
    train->add_option("--data", train_data, "Scenario directory")->required();
    train->add_option("--artifacts", train_artifacts, "Artifact output directory")->required();
    train->add_option("--model", train_model, "Classifier: tree or svm")
        ->check(CLI::IsMember({"tree", "svm"}))
        ->default_val("tree");
    add_window_flags(train, train_window);
    train->add_option("--support", train_support, "Vocabulary support threshold")
        ->default_val(2);
    train->add_option("--max-depth", tree_cfg.max_depth, "Tree depth limit")->default_val(20);
    train->add_option("--min-samples-leaf", tree_cfg.min_samples_leaf,
                      "Minimum rows per tree leaf")
        ->default_val(1);
    train->add_option("--l2", svm_cfg.l2, "SVM L2 strength")->default_val(1e-2);
    train->add_option("--epochs", svm_cfg.epochs, "SVM epochs")->default_val(200);
    train->add_option("--lr", svm_cfg.lr, "SVM base learning rate")->default_val(0.1);
    train->add_option("--svm-seed", svm_cfg.seed, "SVM shuffle seed")->default_val(42);
    train->add_flag("--serial", train_serial, "Disable parallel execution");
    train->add_option("--report", train_report, "Write the training report here");

    // predict
    auto* predict = app.add_subcommand("predict", "Triage one outage");
    std::string pr_artifacts, pr_data, pr_side = "test", pr_outage;
    int pr_top = 5;
    predict->add_option("--artifacts", pr_artifacts, "Artifact directory")->required();
    predict->add_option("--data", pr_data, "Scenario directory")->required();
    predict->add_option("--side", pr_side, "Scenario side: train or test")
        ->check(CLI::IsMember({"train", "test"}))
        ->default_val("test");
    predict->add_option("--outage", pr_outage, "Outage id")->required();
    predict->add_option("--top", pr_top, "Ranked candidates to print")->default_val(5);

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "Evaluate a model over a scenario side");
    std::string ev_artifacts, ev_data, ev_side = "test", ev_report;
    bool ev_serial = false;
    eval->add_option("--artifacts", ev_artifacts, "Artifact directory")->required();
    eval->add_option("--data", ev_data, "Scenario directory")->required();
    eval->add_option("--side", ev_side, "Scenario side: train or test")
        ->check(CLI::IsMember({"train", "test"}))
        ->default_val("test");
    eval->add_flag("--serial", ev_serial, "Disable parallel execution");
    eval->add_option("--report", ev_report, "Write the evaluation report here");

    // graph
    auto* graph = app.add_subcommand("graph", "Export a graph as JSON lines");
    std::string gr_artifacts, gr_data, gr_side = "test", gr_outage, gr_level = "service",
                gr_out;
    graph->add_option("--artifacts", gr_artifacts, "Artifact directory")->required();
    graph->add_option("--data", gr_data, "Scenario directory");
    graph->add_option("--side", gr_side, "Scenario side: train or test")
        ->check(CLI::IsMember({"train", "test"}))
        ->default_val("test");
    graph->add_option("--outage", gr_outage, "Outage id");
    graph->add_option("--level", gr_level, "Graph level: meta, incident, service")
        ->check(CLI::IsMember({"meta", "incident", "service"}))
        ->default_val("service");
    graph->add_option("--out", gr_out, "Output path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (sim->parsed()) {
            if (sim_t_minutes <= 0) throw ValidationError("window scale must be positive");
            scfg.t_ms = sim_t_minutes * 60'000;
            return cmd_simulate(scfg, sim_out);
        }
        if (mine->parsed())
            return cmd_mine_templates(mine_incidents, mine_lexicon, mine_support,
                                      mine_registry_out, mine_vocab_out);
        if (gmc->parsed())
            return cmd_build_gm(gm_incidents, gm_labels, gm_lexicon, gm_support, gm_out,
                                gm_registry_out, gm_vocab_out);
        if (train->parsed())
            return cmd_train(train_data, train_artifacts, train_model, train_window,
                             train_support, tree_cfg, svm_cfg, train_serial, train_report);
        if (predict->parsed())
            return cmd_predict(pr_artifacts, pr_data, pr_side, pr_outage, pr_top);
        if (eval->parsed())
            return cmd_evaluate(ev_artifacts, ev_data, ev_side, ev_serial, ev_report);
        if (graph->parsed())
            return cmd_graph(gr_artifacts, gr_data, gr_side, gr_outage, gr_level, gr_out);
        std::fprintf(stderr, "no subcommand\n");
        return kExitUsage;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    } catch (const StageError& e) {
        std::fprintf(stderr, "stage %s failed: %s\n", e.stage_name.c_str(), e.what());
        return kExitStage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitStage;
    }
}
