#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <unistd.h>
#include <vector>

#include "otriage/errors.hpp"
#include "otriage/pipeline.hpp"
#include "otriage/simulator.hpp"

using namespace otriage;
namespace fs = std::filesystem;

TEST_SUITE_BEGIN("pipeline");

namespace {

fs::path temp_dir() {
    static int counter = 0;
    fs::path dir = fs::temp_directory_path() /
                   ("otriage-pipe-" + std::to_string(::getpid()) + "-" +
                    std::to_string(counter++));
    fs::create_directories(dir);
    return dir;
}

ScenarioConfig small_config() {
    ScenarioConfig cfg;
    cfg.seed = 11;
    cfg.n_services = 20;
    cfg.n_patterns = 4;
    cfg.outages_per_pattern = 8;
    cfg.noise_ratio = 0.85;
    return cfg;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("rational parsing accepts integers, fractions and decimals") {
    CHECK(Rational::parse("-2") == Rational{-2, 1});
    CHECK(Rational::parse("1/3") == Rational{1, 3});
    CHECK(Rational::parse("-3/2") == Rational{-3, 2});
    CHECK(Rational::parse("0.5") == Rational{1, 2});
    CHECK(Rational::parse("2") == Rational{2, 1});
    CHECK(Rational::parse("-0.25") == Rational{-1, 4});
    CHECK(Rational::parse("2/4") == Rational{1, 2});  // reduced
    CHECK(Rational::parse("0") == Rational{0, 1});

    CHECK_THROWS_AS(Rational::parse(""), ValidationError);
    CHECK_THROWS_AS(Rational::parse("1/0"), ValidationError);
    CHECK_THROWS_AS(Rational::parse("abc"), ValidationError);
    CHECK_THROWS_AS(Rational::parse("1/," ), ValidationError);
    CHECK_THROWS_AS(Rational::parse("1.2.3"), ValidationError);
    CHECK_THROWS_AS(Rational::parse("0.1234567890123"), ValidationError);
}

TEST_CASE("rational formatting is canonical and scaling exact") {
    CHECK(Rational::parse("-2").str() == "-2");
    CHECK(Rational::parse("1/3").str() == "1/3");
    CHECK(Rational::parse("0.5").str() == "1/2");
    CHECK(Rational::parse("-3/2").str() == "-3/2");

    CHECK(Rational{1, 3}.scaled(3'600'000) == 1'200'000);
    CHECK(Rational{-2, 1}.scaled(3'600'000) == -7'200'000);
    CHECK(Rational{2, 3}.scaled(3'600'000) == 2'400'000);
    CHECK(Rational{1, 2}.scaled(3'600'001) == 1'800'000);  // floor division
}

TEST_CASE("window presets resolve to the documented intervals") {
    WindowSpec third = WindowSpec::preset("third", 3'600'000);
    TimeWindow w = third.resolve();
    CHECK(w.start_offset == -7'200'000);
    CHECK(w.end_offset == 1'200'000);

    WindowSpec two = WindowSpec::preset("two-thirds", 3'600'000);
    CHECK(two.resolve().end_offset == 2'400'000);

    WindowSpec full = WindowSpec::preset("full", 3'600'000);
    CHECK(full.resolve().end_offset == 3'600'000);

    CHECK_THROWS_AS(WindowSpec::preset("half", 3'600'000), ValidationError);

    WindowSpec bad;
    bad.start = Rational{1, 1};
    bad.end = Rational{0, 1};
    CHECK_THROWS_AS(bad.resolve(), ValidationError);

    WindowSpec zero_t;
    zero_t.t_ms = 0;
    CHECK_THROWS_AS(zero_t.resolve(), ValidationError);
}

TEST_CASE("bulk template resolution requires a frozen registry") {
    Scenario s = generate_scenario(small_config());
    TemplateRegistry mining;  // default mode
    Vocabulary vocab(1);
    CHECK_THROWS_AS(
        resolve_all(s.train, mining, vocab, s.lexicon, ExecMode::Serial),
        ValidationError);
}

TEST_CASE("training produces coherent artifacts") {
    Scenario s = generate_scenario(small_config());
    PipelineConfig cfg;
    TrainReport rep;
    TrainedArtifacts art = train_pipeline(s.train, s.lexicon, cfg, &rep);

    CHECK(art.registry.mode() == TemplateRegistry::Mode::Frozen);
    CHECK(art.registry.size() > 0);
    CHECK(art.gm.nodes.size() > 0);
    CHECK(art.gm.edges.size() > 0);
    CHECK(art.schema.service_count() == 20);
    CHECK(art.schema.dim() == art.schema.service_count() + art.schema.link_count());
    CHECK(art.model.kind == ModelKind::Tree);
    CHECK(art.model.schema_hash == art.schema.hash());
    CHECK(art.model.window_start == "-2");
    CHECK(art.model.window_end == "1/3");

    CHECK(rep.outages == 25);  // floor(32 * 0.8)
    CHECK(rep.incidents == s.train.incidents.size());
    CHECK(rep.templates == art.registry.size());
    CHECK(rep.schema_columns == art.schema.dim());
    CHECK(rep.train_accuracy > 0.5);
    CHECK(!rep.timings.empty());

    // Meta graph nodes all resolve to registry entries.
    for (MetaIncidentId n : art.gm.nodes) {
        CHECK(n >= 0);
        CHECK(static_cast<std::size_t>(n) < art.registry.size());
    }
}

TEST_CASE("a clean full-window run recovers each cascade exactly") {
    ScenarioConfig cfg = small_config();
    cfg.noise_ratio = 0.0;
    cfg.step_drop = 0.0;
    Scenario s = generate_scenario(cfg);

    PipelineConfig pcfg;
    pcfg.window = WindowSpec::preset("full", cfg.t_ms);
    TrainedArtifacts art = train_pipeline(s.train, s.lexicon, pcfg);

    auto metas = resolve_all(s.test, art.registry, art.vocab, art.lexicon,
                             ExecMode::Serial);
    WindowIndex index(s.test.incidents);

    for (const auto& outage : s.test.outages) {
        // The generator spaces outages so far apart that the fetch window
        // around one declaration sees exactly that outage's cascade.
        std::vector<const Incident*> expect;
        for (const auto& inc : s.test.incidents)
            if (std::llabs(inc.created_at - outage.declaration_time) <= 2 * cfg.t_ms)
                expect.push_back(&inc);

        const Incident* origin = s.test.find_incident(outage.origin_incident_id);
        REQUIRE(origin != nullptr);
        auto window = WindowSpec::preset("full", cfg.t_ms).resolve();
        auto cands = index.query(outage, window);
        TemplateRegistry reg_copy = art.registry;
        TemplateResolver resolver(reg_copy, art.vocab, art.lexicon);
        IncidentGraph gi = build_gi(art.gm, cands, *origin, resolver);

        std::set<std::string> got;
        for (const auto* n : gi.nodes) got.insert(n->incident_id);
        std::set<std::string> want;
        for (const auto* n : expect) want.insert(n->incident_id);
        CHECK(got == want);
        CHECK(gi.edges.size() >= gi.nodes.size() - 1);  // connected
    }
}

TEST_CASE("serial and parallel pipelines agree byte for byte") {
    Scenario s = generate_scenario(small_config());
    for (ModelKind kind : {ModelKind::Tree, ModelKind::Svm}) {
        PipelineConfig cfg;
        cfg.kind = kind;

        cfg.mode = ExecMode::Serial;
        TrainedArtifacts a = train_pipeline(s.train, s.lexicon, cfg);
        cfg.mode = ExecMode::Parallel;
        TrainedArtifacts b = train_pipeline(s.train, s.lexicon, cfg);

        CHECK(serialize_model(a.model) == serialize_model(b.model));
        CHECK(a.schema.serialize() == b.schema.serialize());
        CHECK(a.gm == b.gm);
        CHECK(a.registry == b.registry);

        EvalReport ea = evaluate_corpus(a, s.test, ExecMode::Serial);
        EvalReport eb = evaluate_corpus(b, s.test, ExecMode::Parallel);
        CHECK(format_eval_report(ea, s.test) == format_eval_report(eb, s.test));
        CHECK(ea.accuracy == eb.accuracy);
    }
}

TEST_CASE("trained models triage most held-out outages") {
    Scenario s = generate_scenario(small_config());
    PipelineConfig cfg;
    TrainedArtifacts art = train_pipeline(s.train, s.lexicon, cfg);
    EvalReport rep = evaluate_corpus(art, s.test, ExecMode::Parallel);
    CHECK(rep.total == 7);  // 32 - 25
    CHECK(rep.accuracy > 0.5);
    CHECK(rep.rows.size() == 7);
    CHECK(std::is_sorted(rep.rows.begin(), rep.rows.end(),
                         [](const OutagePrediction& a, const OutagePrediction& b) {
                             return a.outage_id < b.outage_id;
                         }));
    int cat_total = 0;
    for (const auto& [cat, ct] : rep.per_category) cat_total += ct.second;
    CHECK(cat_total == rep.total);
    CHECK(rep.mean_latency_ms >= 0.0);
}

TEST_CASE("predict_outage reports graph shape and ranking") {
    Scenario s = generate_scenario(small_config());
    PipelineConfig cfg;
    TrainedArtifacts art = train_pipeline(s.train, s.lexicon, cfg);
    WindowIndex index(s.test.incidents);
    const Outage& outage = s.test.outages.front();

    OutagePrediction p = predict_outage(art, s.test, index, outage);
    CHECK(p.outage_id == outage.outage_id);
    CHECK(p.gi_nodes >= 1);
    CHECK(p.gs_services >= 1);
    CHECK(!p.prediction.ranking.empty());
    CHECK(p.prediction.label == p.prediction.ranking.front().first);
    CHECK_FALSE(p.low_confidence);
}

TEST_CASE("artifact directories round-trip") {
    Scenario s = generate_scenario(small_config());
    PipelineConfig cfg;
    TrainedArtifacts art = train_pipeline(s.train, s.lexicon, cfg);

    fs::path dir = temp_dir();
    save_artifacts(art, dir.string());
    for (const char* f : {"lexicon.txt", "vocab.txt", "registry.tsv", "gm.txt",
                          "schema.txt", "model.txt"})
        CHECK(fs::exists(dir / f));

    TrainedArtifacts back = load_artifacts(dir.string());
    CHECK(back.registry == art.registry);
    CHECK(back.gm == art.gm);
    CHECK(back.schema == art.schema);
    CHECK(back.vocab.counts() == art.vocab.counts());
    CHECK(serialize_model(back.model) == serialize_model(art.model));

    EvalReport ra = evaluate_corpus(art, s.test, ExecMode::Serial);
    EvalReport rb = evaluate_corpus(back, s.test, ExecMode::Serial);
    CHECK(format_eval_report(ra, s.test) == format_eval_report(rb, s.test));

    // A model trained against a different schema must be refused.
    fs::path dir2 = temp_dir();
    save_artifacts(art, dir2.string());
    TriageModel tampered = art.model;
    tampered.schema_hash ^= 1;
    save_model(tampered, (dir2 / "model.txt").string());
    CHECK_THROWS_AS(load_artifacts(dir2.string()), ValidationError);
}

TEST_CASE("report bodies are stable across reruns") {
    Scenario s = generate_scenario(small_config());
    PipelineConfig cfg;
    TrainReport r1, r2;
    TrainedArtifacts a1 = train_pipeline(s.train, s.lexicon, cfg, &r1);
    TrainedArtifacts a2 = train_pipeline(s.train, s.lexicon, cfg, &r2);
    CHECK(format_train_report(r1, a1) == format_train_report(r2, a2));

    std::string topline = format_train_report(r1, a1);
    CHECK(topline.rfind("training report", 0) == 0);
    CHECK(topline.find("ms") == std::string::npos);  // timings stay off the report

    EvalReport e1 = evaluate_corpus(a1, s.test, ExecMode::Parallel);
    EvalReport e2 = evaluate_corpus(a2, s.test, ExecMode::Parallel);
    std::string body = format_eval_report(e1, s.test);
    CHECK(body == format_eval_report(e2, s.test));
    CHECK(body.rfind("evaluation report", 0) == 0);
    CHECK(body.find("latency") == std::string::npos);
}

TEST_CASE("evaluation refuses outages without ground truth") {
    Scenario s = generate_scenario(small_config());
    PipelineConfig cfg;
    TrainedArtifacts art = train_pipeline(s.train, s.lexicon, cfg);
    Corpus broken = s.test;
    broken.outages.front().root_cause_service.reset();
    broken.rebuild_index();
    CHECK_THROWS_AS(evaluate_corpus(art, broken, ExecMode::Serial), ValidationError);
}

TEST_CASE("training rejects an empty or unlabeled corpus") {
    Corpus empty;
    LocationLexicon lex;
    PipelineConfig cfg;
    CHECK_THROWS_AS(train_pipeline(empty, lex, cfg), ValidationError);

    Scenario s = generate_scenario(small_config());
    Corpus no_truth = s.train;
    no_truth.outages.front().root_cause_service.reset();
    no_truth.rebuild_index();
    CHECK_THROWS_AS(train_pipeline(no_truth, s.lexicon, cfg), ValidationError);
}

TEST_SUITE_END();
