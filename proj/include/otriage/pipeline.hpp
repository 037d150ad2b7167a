#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "otriage/corpus.hpp"
#include "otriage/exec.hpp"
#include "otriage/features.hpp"
#include "otriage/graphs.hpp"
#include "otriage/model.hpp"
#include "otriage/records.hpp"
#include "otriage/templates.hpp"

namespace otriage {

// Exact rational multiple of the window scale, as written on the command
// line: "-2", "1/3", "-3/2", "0.5".
struct Rational {
    long long num = 0;
    long long den = 1;

    static Rational parse(const std::string& s);
    std::string str() const;  // canonical "p" or "p/q"
    DurationMs scaled(std::int64_t t_ms) const;

    bool operator==(const Rational&) const = default;
};

// Fetch interval relative to declaration time, in units of T.
struct WindowSpec {
    Rational start{-2, 1};
    Rational end{1, 3};
    std::int64_t t_ms = 3'600'000;

    TimeWindow resolve() const;  // throws ValidationError on an empty interval
    // Presets: third [-2, 1/3], two-thirds [-2, 2/3], full [-2, 1].
    static WindowSpec preset(const std::string& name, std::int64_t t_ms);
};

struct PipelineConfig {
    WindowSpec window;
    int support_threshold = 2;
    ModelKind kind = ModelKind::Tree;
    TreeConfig tree;
    SvmConfig svm;
    ExecMode mode = ExecMode::Parallel;
};

// Everything training produces; enough to triage fresh outages.
struct TrainedArtifacts {
    LocationLexicon lexicon;
    Vocabulary vocab;
    TemplateRegistry registry;  // frozen
    MetaGraph gm;
    FeatureSchema schema;
    TriageModel model;
};

struct StageTiming {
    std::string stage;
    double ms = 0.0;
};

struct TrainReport {
    std::size_t outages = 0;
    std::size_t incidents = 0;
    std::size_t templates = 0;
    std::size_t gm_nodes = 0;
    std::size_t gm_edges = 0;
    std::size_t schema_columns = 0;
    double train_accuracy = 0.0;
    std::vector<StageTiming> timings;  // stdout only, never in report files
};

// Stages: mine templates over all training incidents in (created_at, id)
// order, build the historical correlation graph from labels, freeze the
// registry, build per-outage graphs, featurize, fit the classifier. The
// result is a pure function of the corpus, lexicon, and config; incident
// file order never matters.
TrainedArtifacts train_pipeline(const Corpus& train, const LocationLexicon& lexicon,
                                const PipelineConfig& cfg, TrainReport* report = nullptr);

// Meta IDs for corpus.incidents, index-aligned; nullopt for templates the
// registry does not know. The registry must be frozen (lookups are const and
// thread-safe); a mining registry is rejected.
std::vector<std::optional<MetaIncidentId>> resolve_all(const Corpus& corpus,
                                                       const TemplateRegistry& registry,
                                                       const Vocabulary& vocab,
                                                       const LocationLexicon& lexicon,
                                                       ExecMode mode);

// Per-outage service graphs, index-aligned with corpus.outages. Outages are
// independent, so Parallel fans them out and merges by slot.
std::vector<ServiceGraph> build_service_graphs(
    const MetaGraph& gm, const Corpus& corpus,
    const std::vector<std::optional<MetaIncidentId>>& metas, const WindowIndex& index,
    const TimeWindow& window, ExecMode mode);

struct OutagePrediction {
    std::string outage_id;
    Prediction prediction;
    bool low_confidence = false;  // feature vector was all zeros
    std::size_t gi_nodes = 0;
    std::size_t gi_edges = 0;
    std::size_t gs_services = 0;
    double latency_ms = 0.0;
    std::vector<std::string> warnings;
};

// Runs the full per-outage path (fetch, graphs, featurize, classify) against
// preloaded data. The window comes from the model's own metadata.
OutagePrediction predict_outage(const TrainedArtifacts& art, const Corpus& corpus,
                                const WindowIndex& index, const Outage& outage);

struct EvalReport {
    int total = 0;
    int correct = 0;
    double accuracy = 0.0;
    // category name -> (correct, total); only categories that occur.
    std::map<std::string, std::pair<int, int>> per_category;
    std::map<std::pair<std::string, std::string>, int> confusion;  // (truth, predicted)
    double mean_latency_ms = 0.0;  // stdout only, never in report files
    std::vector<OutagePrediction> rows;  // sorted by outage_id
};

// Every evaluated outage must carry ground truth. Parallel over outages with
// a deterministic merge; accuracy and report text never depend on mode.
EvalReport evaluate_corpus(const TrainedArtifacts& art, const Corpus& test, ExecMode mode);

// Deterministic report bodies: byte-identical across reruns on equal inputs
// (timings and latencies are deliberately absent).
std::string format_train_report(const TrainReport& r, const TrainedArtifacts& art);
std::string format_eval_report(const EvalReport& r, const Corpus& test);

// Artifact directory layout: lexicon.txt, vocab.txt, registry.tsv, gm.txt,
// schema.txt, model.txt.
void save_artifacts(const TrainedArtifacts& art, const std::string& dir);
TrainedArtifacts load_artifacts(const std::string& dir);

}  // namespace otriage
