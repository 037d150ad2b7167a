#include "otriage/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "otriage/errors.hpp"
#include "otriage/rng.hpp"

namespace otriage {

namespace {

// 2025-01-01T00:00:00Z; keeps generated corpora independent of the host clock.
constexpr TimestampMs kEpoch = 1735689600000LL;

constexpr const char* kPrefix[5] = {"infra", "net", "store", "compute", "app"};

constexpr const char* kSubjects[12] = {
    "gateway", "frontend", "scheduler", "replica",  "cache",   "queue",
    "router",  "balancer", "proxy",     "registry", "indexer", "monitor",
};
constexpr const char* kConditions[8] = {
    "latency degraded",     "timeouts rising",    "errors spiking",
    "connections dropped",  "throughput collapsed", "capacity exhausted",
    "heartbeats missing",   "writes failing",
};

// Noise vocabulary is disjoint from cascade vocabulary so noise titles can
// never mine to a cascade template.
constexpr const char* kNoiseSubjects[14] = {
    "telemetry", "billing",  "backup", "certificate", "quota", "autoscale", "patching",
    "migration", "dnsprobe", "audit",  "snapshot",    "mirror", "lease",    "webhook",
};
constexpr const char* kNoiseEvents[9] = {
    "alert raised",     "job delayed",   "retry scheduled", "warning emitted",
    "threshold crossed", "probe flapped", "sync lagging",    "rotation due",
    "drift detected",
};

struct Step {
    std::string service;
    std::string subject;
    std::string condition;
    TimestampMs base_offset = 0;  // relative to declaration; declared step is 0
};

struct Pattern {
    std::vector<Step> steps;  // root first, declared application step last
};

std::string service_name(int category, int index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s-%02d", kPrefix[category], index);
    return buf;
}

std::string format_id(const char* prefix, int width, long long n) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%s-%0*lld", prefix, width, n);
    return buf;
}

std::string hex_blob(Rng& rng) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%04x", static_cast<unsigned>(rng.uniform(65536)));
    return buf;
}

void check_config(const ScenarioConfig& c) {
    if (c.n_services < 5) throw ValidationError("need at least one service per category");
    if (c.n_patterns < 1) throw ValidationError("need at least one cascade pattern");
    if (c.outages_per_pattern < 1) throw ValidationError("need at least one outage per pattern");
    if (!(c.noise_ratio >= 0.0 && c.noise_ratio < 1.0))
        throw ValidationError("noise_ratio must lie in [0, 1)");
    if (c.t_ms <= 0) throw ValidationError("window scale must be positive");
    if (!(c.train_fraction > 0.0 && c.train_fraction < 1.0))
        throw ValidationError("train_fraction must lie in (0, 1)");
    if (!(c.step_drop >= 0.0 && c.step_drop < 1.0))
        throw ValidationError("step_drop must lie in [0, 1)");
    if (c.regions.empty()) throw ValidationError("need at least one region");
    // Root services are picked per category without reuse.
    int per_cat = c.n_services / 5;  // category 0 never has fewer than the rest
    int roots_in_busiest_cat = (c.n_patterns + 4) / 5;
    if (!c.single_root && roots_in_busiest_cat > per_cat)
        throw ValidationError("not enough services per category for distinct cascade roots");
}

}  // namespace

Scenario generate_scenario(const ScenarioConfig& config) {
    check_config(config);
    const std::int64_t t = config.t_ms;

    Scenario s;
    s.config = config;
    for (const auto& r : config.regions) s.lexicon.add_phrase(r);

    // Service i lands in category i % 5, so categories stay balanced.
    ServiceCatalog catalog;
    std::vector<std::vector<std::string>> by_cat(5);
    for (int i = 0; i < config.n_services; ++i) {
        int c = i % 5;
        std::string name = service_name(c, i / 5);
        catalog.add(name, kAllCategories[c]);
        by_cat[c].push_back(std::move(name));
    }

    // Cascade shapes: a root service in category c0 = pattern % 5, one hop per
    // category up to Application. Roots are distinct across patterns (unless
    // single_root collapses them); interior services may repeat.
    Rng master(Rng::mix(config.seed, 0));
    std::vector<Pattern> patterns;
    for (int p = 0; p < config.n_patterns; ++p) {
        int c0 = config.single_root ? 0 : p % 5;
        Pattern pat;
        for (int level = c0; level < 5; ++level) {
            Step step;
            if (level == c0) {
                step.service = config.single_root ? by_cat[0][0] : by_cat[c0][p / 5];
            } else {
                step.service = by_cat[level][master.uniform(by_cat[level].size())];
            }
            int symbol = p * 5 + (level - c0);
            step.subject = kSubjects[symbol % 12];
            step.condition = kConditions[(symbol / 12) % 8];
            if (level == 4) {
                step.base_offset = 0;
            } else if (level == c0) {
                step.base_offset = master.range(-14 * t / 10, -6 * t / 10);
            } else {
                step.base_offset = master.range(-12 * t / 10, 8 * t / 10);
            }
            pat.steps.push_back(std::move(step));
        }
        patterns.push_back(std::move(pat));
    }

    const int total = config.n_patterns * config.outages_per_pattern;
    const int n_train = static_cast<int>(std::floor(total * config.train_fraction));
    if (n_train < 1 || n_train >= total)
        throw ValidationError("train fraction leaves one side of the split empty");

    long long incident_counter = 0;
    for (int o = 0; o < total; ++o) {
        const Pattern& pat = patterns[o % config.n_patterns];
        Corpus& side = o < n_train ? s.train : s.test;
        Rng rng(Rng::mix(config.seed, 1000 + static_cast<std::uint64_t>(o)));

        Outage outage;
        outage.outage_id = format_id("out", 4, o);
        outage.declaration_time = kEpoch + static_cast<TimestampMs>(o + 1) * 6 * t;
        outage.region = config.regions[rng.uniform(config.regions.size())];
        outage.root_cause_service = pat.steps.front().service;

        // Interior steps may go unreported; the root and the declared
        // application step always exist.
        const size_t last = pat.steps.size() - 1;
        std::vector<size_t> reported;
        for (size_t i = 0; i < pat.steps.size(); ++i) {
            bool interior = i != 0 && i != last;
            if (interior && rng.chance(config.step_drop)) continue;
            reported.push_back(i);
        }

        std::vector<std::string> step_ids;
        for (size_t i : reported) {
            const Step& step = pat.steps[i];
            bool declared = i == last;
            Incident inc;
            inc.incident_id = format_id("inc", 8, incident_counter++);
            inc.owning_service = step.service;
            inc.region = outage.region;
            inc.severity = static_cast<int>(rng.uniform(3));
            TimestampMs jitter = declared ? 0 : rng.range(-t / 20, t / 20);
            inc.created_at = outage.declaration_time + step.base_offset + jitter;
            inc.title = step.subject + " " + step.condition + " code " + hex_blob(rng) +
                        " affecting " + std::to_string(rng.range(2, 40)) + " nodes in " +
                        outage.region;
            if (declared) outage.origin_incident_id = inc.incident_id;
            step_ids.push_back(inc.incident_id);
            side.incidents.push_back(std::move(inc));
        }
        // Correlation labels exist only for past (training) outages: each
        // consecutive reported pair was linked by the responders.
        if (o < n_train)
            for (size_t i = 1; i < step_ids.size(); ++i)
                side.correlations.push_back({step_ids[i - 1], step_ids[i], outage.outage_id});

        double ratio = config.noise_ratio;
        long long n_noise =
            std::llround(static_cast<double>(reported.size()) * ratio / (1.0 - ratio));
        for (long long k = 0; k < n_noise; ++k) {
            Incident inc;
            inc.incident_id = format_id("inc", 8, incident_counter++);
            inc.owning_service =
                catalog.entries()[rng.uniform(catalog.size())].first;
            inc.region = outage.region;
            inc.severity = static_cast<int>(1 + rng.uniform(4));
            inc.created_at = outage.declaration_time + rng.range(-2 * t, t);
            inc.title = std::string(kNoiseSubjects[rng.uniform(14)]) + " " +
                        kNoiseEvents[rng.uniform(9)] + " value " +
                        std::to_string(rng.range(0, 9999)) + " in " + outage.region;
            side.incidents.push_back(std::move(inc));
        }
        side.outages.push_back(std::move(outage));
    }

    for (Corpus* side : {&s.train, &s.test}) {
        std::sort(side->incidents.begin(), side->incidents.end(),
                  [](const Incident& a, const Incident& b) {
                      if (a.created_at != b.created_at) return a.created_at < b.created_at;
                      return a.incident_id < b.incident_id;
                  });
        side->catalog = catalog;
        side->rebuild_index();
        side->validate_references();
    }
    return s;
}

void write_scenario(const Scenario& s, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(dir) / "train");
    fs::create_directories(fs::path(dir) / "test");
    auto at = [&](const char* rel) { return (fs::path(dir) / rel).string(); };

    save_catalog(at("catalog.tsv"), s.train.catalog);
    s.lexicon.save(at("lexicon.txt"));
    save_incidents(at("train/incidents.jsonl"), s.train.incidents);
    save_outages(at("train/outages.jsonl"), s.train.outages);
    save_correlations(at("train/labels.jsonl"), s.train.correlations);
    save_incidents(at("test/incidents.jsonl"), s.test.incidents);
    save_outages(at("test/outages.jsonl"), s.test.outages);
    save_correlations(at("test/labels.jsonl"), s.test.correlations);

    nlohmann::ordered_json m;
    m["seed"] = s.config.seed;
    m["n_services"] = s.config.n_services;
    m["n_patterns"] = s.config.n_patterns;
    m["outages_per_pattern"] = s.config.outages_per_pattern;
    m["noise_ratio"] = s.config.noise_ratio;
    m["t_ms"] = s.config.t_ms;
    m["train_fraction"] = s.config.train_fraction;
    m["step_drop"] = s.config.step_drop;
    m["regions"] = s.config.regions;
    m["single_root"] = s.config.single_root;
    m["train_incidents"] = s.train.incidents.size();
    m["train_outages"] = s.train.outages.size();
    m["train_labels"] = s.train.correlations.size();
    m["test_incidents"] = s.test.incidents.size();
    m["test_outages"] = s.test.outages.size();
    std::ofstream out(at("manifest.json"), std::ios::binary);
    if (!out) throw ValidationError("cannot open for writing: " + at("manifest.json"));
    out << m.dump(2) << "\n";
    if (!out) throw ValidationError("write failed: " + at("manifest.json"));
}

}  // namespace otriage
