#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "otriage/corpus.hpp"
#include "otriage/records.hpp"
#include "otriage/templates.hpp"

namespace otriage {

// Knobs for the synthetic incident generator. Defaults give a five-layer
// topology, ten cascade shapes, and a heavily noise-dominated stream.
struct ScenarioConfig {
    std::uint64_t seed = 42;
    int n_services = 60;
    int n_patterns = 10;
    int outages_per_pattern = 50;
    double noise_ratio = 0.97;  // noise share of each outage's incident pool
    std::int64_t t_ms = 3'600'000;
    double train_fraction = 0.8;
    double step_drop = 0.1;  // chance an interior cascade step goes unreported
    std::vector<std::string> regions = {"west us 2", "east us", "north europe"};
    bool single_root = false;  // degenerate corpus: every cascade shares one root
};

// Generated corpora split chronologically by outage. Test correlations stay
// empty (nobody labels the future); test outages keep their ground truth.
struct Scenario {
    ScenarioConfig config;
    LocationLexicon lexicon;
    Corpus train;
    Corpus test;
};

// Fully deterministic in `config`. Each cascade follows its pattern's service
// path from a root service up to an application-level service; the
// application incident is the declared origin. The root step and the declared
// step are always reported, interior steps drop out with probability
// step_drop. Noise incidents are drawn across the whole fetch range with
// titles disjoint from cascade titles.
Scenario generate_scenario(const ScenarioConfig& config);

// Writes catalog.tsv, lexicon.txt, manifest.json and per-side
// {train,test}/{incidents,outages,labels}.jsonl under `dir`.
void write_scenario(const Scenario& s, const std::string& dir);

}  // namespace otriage
