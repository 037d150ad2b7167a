#include "otriage/pipeline.hpp"

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <numeric>

#include "otriage/errors.hpp"

namespace otriage {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

long long to_ll_strict(const std::string& s, const char* what) {
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE)
        throw ValidationError(std::string("bad ") + what + ": " + s);
    return v;
}

std::string fmt4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

}  // namespace

Rational Rational::parse(const std::string& s) {
    if (s.empty()) throw ValidationError("empty window offset");
    Rational r;
    size_t slash = s.find('/');
    if (slash != std::string::npos) {
        r.num = to_ll_strict(s.substr(0, slash), "window offset numerator");
        r.den = to_ll_strict(s.substr(slash + 1), "window offset denominator");
        if (r.den == 0) throw ValidationError("window offset denominator is zero: " + s);
    } else if (s.find('.') != std::string::npos) {
        size_t dot = s.find('.');
        std::string head = s.substr(0, dot);
        std::string frac = s.substr(dot + 1);
        if (frac.empty() || frac.size() > 9)
            throw ValidationError("bad decimal window offset: " + s);
        bool neg = !head.empty() && head[0] == '-';
        std::string ip = neg ? head.substr(1) : (!head.empty() && head[0] == '+')
                                                     ? head.substr(1)
                                                     : head;
        if (ip.empty()) ip = "0";
        for (char c : ip + frac)
            if (c < '0' || c > '9') throw ValidationError("bad decimal window offset: " + s);
        long long scale = 1;
        for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
        r.num = to_ll_strict(ip, "window offset") * scale + to_ll_strict(frac, "window offset");
        if (neg) r.num = -r.num;
        r.den = scale;
    } else {
        r.num = to_ll_strict(s, "window offset");
        r.den = 1;
    }
    if (r.den < 0) {
        r.num = -r.num;
        r.den = -r.den;
    }
    long long g = std::gcd(r.num < 0 ? -r.num : r.num, r.den);
    if (g > 1) {
        r.num /= g;
        r.den /= g;
    }
    return r;
}

std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

DurationMs Rational::scaled(std::int64_t t_ms) const {
    __int128 v = static_cast<__int128>(t_ms) * num / den;
    return static_cast<DurationMs>(v);
}

TimeWindow WindowSpec::resolve() const {
    if (t_ms <= 0) throw ValidationError("window scale must be positive");
    TimeWindow w{start.scaled(t_ms), end.scaled(t_ms)};
    if (!w.valid()) throw ValidationError("window is empty: [" + start.str() + ", " +
                                          end.str() + "] of " + std::to_string(t_ms) + "ms");
    return w;
}

WindowSpec WindowSpec::preset(const std::string& name, std::int64_t t_ms) {
    WindowSpec w;
    w.t_ms = t_ms;
    w.start = {-2, 1};
    if (name == "third")
        w.end = {1, 3};
    else if (name == "two-thirds")
        w.end = {2, 3};
    else if (name == "full")
        w.end = {1, 1};
    else
        throw ValidationError("unknown window preset: " + name);
    return w;
}

std::vector<std::optional<MetaIncidentId>> resolve_all(const Corpus& corpus,
                                                       const TemplateRegistry& registry,
                                                       const Vocabulary& vocab,
                                                       const LocationLexicon& lexicon,
                                                       ExecMode mode) {
    if (registry.mode() != TemplateRegistry::Mode::Frozen)
        throw ValidationError("bulk template resolution requires a frozen registry");
    const int n = static_cast<int>(corpus.incidents.size());
    std::vector<std::optional<MetaIncidentId>> out(n);
    auto one = [&](int i) {
        const Incident& inc = corpus.incidents[i];
        out[i] = registry.lookup(parse_title(inc.title, vocab, lexicon, inc.owning_service));
    };
    if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) one(i);
    } else {
        for (int i = 0; i < n; ++i) one(i);
    }
    return out;
}

std::vector<ServiceGraph> build_service_graphs(
    const MetaGraph& gm, const Corpus& corpus,
    const std::vector<std::optional<MetaIncidentId>>& metas, const WindowIndex& index,
    const TimeWindow& window, ExecMode mode) {
    if (metas.size() != corpus.incidents.size())
        throw ValidationError("meta ids not aligned with corpus incidents");
    const int n = static_cast<int>(corpus.outages.size());
    std::vector<const Incident*> origins(n);
    for (int i = 0; i < n; ++i) {
        origins[i] = corpus.find_incident(corpus.outages[i].origin_incident_id);
        if (!origins[i])
            throw ValidationError("outage origin not found: " +
                                  corpus.outages[i].origin_incident_id);
    }
    const Incident* base = corpus.incidents.data();
    std::vector<ServiceGraph> out(n);
    auto one = [&](int i) {
        const Outage& outage = corpus.outages[i];
        std::vector<const Incident*> win = index.query(outage, window);
        std::vector<ResolvedIncident> cand;
        cand.reserve(win.size());
        for (const Incident* p : win) cand.push_back({p, metas[p - base]});
        IncidentGraph gi = build_gi(gm, cand, *origins[i], metas[origins[i] - base]);
        out[i] = build_gs(gi);
    };
    if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n; ++i) one(i);
    } else {
        for (int i = 0; i < n; ++i) one(i);
    }
    return out;
}

TrainedArtifacts train_pipeline(const Corpus& train, const LocationLexicon& lexicon,
                                const PipelineConfig& cfg, TrainReport* report) {
    if (train.incidents.empty()) throw ValidationError("training corpus has no incidents");
    if (train.outages.empty()) throw ValidationError("training corpus has no outages");
    if (train.catalog.empty()) throw ValidationError("training corpus has no service catalog");
    const TimeWindow window = cfg.window.resolve();

    TrainedArtifacts art;
    art.lexicon = lexicon;
    TrainReport rep;
    auto stage = [&](const char* name, Clock::time_point t0) {
        rep.timings.push_back({name, ms_since(t0)});
    };

    // Mining order is (created_at, incident_id), so registry IDs and bytes
    // replay identically however the corpus file was ordered.
    auto t0 = Clock::now();
    std::vector<const Incident*> order;
    order.reserve(train.incidents.size());
    for (const Incident& inc : train.incidents) order.push_back(&inc);
    std::sort(order.begin(), order.end(), [](const Incident* a, const Incident* b) {
        if (a->created_at != b->created_at) return a->created_at < b->created_at;
        return a->incident_id < b->incident_id;
    });
    std::vector<std::string> titles;
    titles.reserve(order.size());
    for (const Incident* inc : order) titles.push_back(inc->title);
    art.vocab = build_vocabulary(titles, cfg.support_threshold, art.lexicon);
    stage("vocabulary", t0);

    t0 = Clock::now();
    TemplateResolver miner(art.registry, art.vocab, art.lexicon);
    for (const Incident* inc : order) miner.resolve(*inc);
    stage("mine-templates", t0);

    t0 = Clock::now();
    art.gm = build_gm(train.correlations, train, miner);
    art.registry.freeze();
    stage("correlation-graph", t0);

    t0 = Clock::now();
    auto metas = resolve_all(train, art.registry, art.vocab, art.lexicon, cfg.mode);
    WindowIndex index(train.incidents);
    auto graphs = build_service_graphs(art.gm, train, metas, index, window, cfg.mode);
    stage("outage-graphs", t0);

    t0 = Clock::now();
    art.schema = build_schema(train.catalog, graphs);
    TrainingSet data;
    data.x.reserve(graphs.size());
    for (size_t i = 0; i < graphs.size(); ++i) {
        const Outage& outage = train.outages[i];
        if (!outage.root_cause_service)
            throw ValidationError("training outage missing root cause: " + outage.outage_id);
        data.x.push_back(featurize(graphs[i], art.schema, nullptr));
        data.y.push_back(*outage.root_cause_service);
        data.ids.push_back(outage.outage_id);
    }
    stage("featurize", t0);

    t0 = Clock::now();
    art.model.kind = cfg.kind;
    if (cfg.kind == ModelKind::Tree)
        art.model.tree = train_tree(data, cfg.tree, cfg.mode);
    else
        art.model.svm = train_svm(data, cfg.svm, cfg.mode);
    art.model.schema_hash = art.schema.hash();
    art.model.window_start = cfg.window.start.str();
    art.model.window_end = cfg.window.end.str();
    art.model.t_ms = cfg.window.t_ms;
    stage("fit", t0);

    if (report) {
        rep.outages = train.outages.size();
        rep.incidents = train.incidents.size();
        rep.templates = art.registry.size();
        rep.gm_nodes = art.gm.nodes.size();
        rep.gm_edges = art.gm.edges.size();
        rep.schema_columns = art.schema.dim();
        rep.train_accuracy = cfg.kind == ModelKind::Tree
                                 ? training_accuracy(art.model.tree, data)
                                 : training_accuracy(art.model.svm, data);
        *report = std::move(rep);
    }
    return art;
}

OutagePrediction predict_outage(const TrainedArtifacts& art, const Corpus& corpus,
                                const WindowIndex& index, const Outage& outage) {
    auto t0 = Clock::now();
    const Incident* origin = corpus.find_incident(outage.origin_incident_id);
    if (!origin)
        throw ValidationError("outage origin not found: " + outage.origin_incident_id);
    WindowSpec ws{Rational::parse(art.model.window_start), Rational::parse(art.model.window_end),
                  art.model.t_ms};
    const TimeWindow window = ws.resolve();

    std::vector<const Incident*> win = index.query(outage, window);
    std::vector<ResolvedIncident> cand;
    cand.reserve(win.size());
    for (const Incident* p : win) {
        Template t = parse_title(p->title, art.vocab, art.lexicon, p->owning_service);
        cand.push_back({p, art.registry.lookup(t)});
    }
    Template origin_t =
        parse_title(origin->title, art.vocab, art.lexicon, origin->owning_service);
    IncidentGraph gi = build_gi(art.gm, cand, *origin, art.registry.lookup(origin_t));
    ServiceGraph gs = build_gs(gi);

    OutagePrediction out;
    out.outage_id = outage.outage_id;
    out.gi_nodes = gi.nodes.size();
    out.gi_edges = gi.edges.size();
    out.gs_services = gs.services.size();
    std::vector<double> x = featurize(gs, art.schema, &out.warnings);
    out.low_confidence = std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
    out.prediction = art.model.predict(x);
    out.latency_ms = ms_since(t0);
    return out;
}

EvalReport evaluate_corpus(const TrainedArtifacts& art, const Corpus& test, ExecMode mode) {
    if (test.outages.empty()) throw ValidationError("evaluation corpus has no outages");
    const int n = static_cast<int>(test.outages.size());
    for (const Outage& o : test.outages) {
        if (!o.root_cause_service)
            throw ValidationError("evaluation outage missing ground truth: " + o.outage_id);
        if (!test.find_incident(o.origin_incident_id))
            throw ValidationError("outage origin not found: " + o.origin_incident_id);
    }

    WindowIndex index(test.incidents);
    EvalReport rep;
    rep.rows.resize(n);
    OutagePrediction* rows = rep.rows.data();
    if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n; ++i) rows[i] = predict_outage(art, test, index, test.outages[i]);
    } else {
        for (int i = 0; i < n; ++i) rows[i] = predict_outage(art, test, index, test.outages[i]);
    }

    double latency_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const Outage& o = test.outages[i];
        const std::string& truth = *o.root_cause_service;
        const std::string& predicted = rep.rows[i].prediction.label;
        bool hit = truth == predicted;
        rep.total += 1;
        rep.correct += hit ? 1 : 0;
        rep.confusion[{truth, predicted}] += 1;
        auto cat = test.catalog.category_of(truth);
        std::string cat_name = cat ? to_string(*cat) : "uncatalogued";
        auto& [cat_correct, cat_total] = rep.per_category[cat_name];
        cat_total += 1;
        cat_correct += hit ? 1 : 0;
        latency_sum += rep.rows[i].latency_ms;
    }
    rep.accuracy = static_cast<double>(rep.correct) / rep.total;
    rep.mean_latency_ms = latency_sum / n;
    std::sort(rep.rows.begin(), rep.rows.end(),
              [](const OutagePrediction& a, const OutagePrediction& b) {
                  return a.outage_id < b.outage_id;
              });
    return rep;
}

std::string format_train_report(const TrainReport& r, const TrainedArtifacts& art) {
    std::string out = "training report\n";
    out += "outages\t" + std::to_string(r.outages) + "\n";
    out += "incidents\t" + std::to_string(r.incidents) + "\n";
    out += "templates\t" + std::to_string(r.templates) + "\n";
    out += "gm_nodes\t" + std::to_string(r.gm_nodes) + "\n";
    out += "gm_edges\t" + std::to_string(r.gm_edges) + "\n";
    out += "schema_columns\t" + std::to_string(r.schema_columns) + "\n";
    out += std::string("model\t") + (art.model.kind == ModelKind::Tree ? "tree" : "svm") + "\n";
    out += "window\t" + art.model.window_start + "\t" + art.model.window_end + "\t" +
           std::to_string(art.model.t_ms) + "\n";
    out += "classes\t" + std::to_string(art.model.classes().size()) + "\n";
    out += "train_accuracy\t" + fmt4(r.train_accuracy) + "\n";
    return out;
}

std::string format_eval_report(const EvalReport& r, const Corpus& test) {
    std::string out = "evaluation report\n";
    out += "total\t" + std::to_string(r.total) + "\n";
    out += "correct\t" + std::to_string(r.correct) + "\n";
    out += "accuracy\t" + fmt4(r.accuracy) + "\n";
    for (const auto& [cat, counts] : r.per_category) {
        out += "category\t" + cat + "\t" + std::to_string(counts.first) + "/" +
               std::to_string(counts.second) + "\t" +
               fmt4(static_cast<double>(counts.first) / counts.second) + "\n";
    }
    for (const auto& [pair, count] : r.confusion) {
        if (pair.first == pair.second) continue;
        out += "confused\t" + pair.first + "\t" + pair.second + "\t" + std::to_string(count) +
               "\n";
    }
    for (const OutagePrediction& row : r.rows) {
        const Outage* o = test.find_outage(row.outage_id);
        std::string truth = o && o->root_cause_service ? *o->root_cause_service : "?";
        bool hit = truth == row.prediction.label;
        out += "outage\t" + row.outage_id + "\t" + truth + "\t" + row.prediction.label + "\t" +
               (hit ? "hit" : "miss");
        if (row.low_confidence) out += "\tlow-confidence";
        for (const auto& w : row.warnings) out += "\t!" + w;
        out += "\n";
    }
    return out;
}

void save_artifacts(const TrainedArtifacts& art, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    auto at = [&](const char* rel) { return (fs::path(dir) / rel).string(); };
    art.lexicon.save(at("lexicon.txt"));
    art.vocab.save(at("vocab.txt"));
    art.registry.save(at("registry.tsv"));
    art.gm.save(at("gm.txt"));
    art.schema.save(at("schema.txt"));
    save_model(art.model, at("model.txt"));
}

TrainedArtifacts load_artifacts(const std::string& dir) {
    namespace fs = std::filesystem;
    auto at = [&](const char* rel) { return (fs::path(dir) / rel).string(); };
    TrainedArtifacts art;
    art.lexicon = LocationLexicon::load(at("lexicon.txt"));
    art.vocab = Vocabulary::load(at("vocab.txt"));
    art.registry = TemplateRegistry::load(at("registry.tsv"), TemplateRegistry::Mode::Frozen);
    art.gm = MetaGraph::load(at("gm.txt"));
    art.schema = FeatureSchema::load(at("schema.txt"));
    art.model = load_model(at("model.txt"));
    if (art.model.schema_hash != art.schema.hash())
        throw ValidationError("model was trained against a different feature schema");
    return art;
}

}  // namespace otriage
