// Compares serial and parallel execution of the data-parallel stages (bulk
// template resolution, per-outage graph building, classifier training,
// evaluation) on one generated scenario, and checks both modes agree.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>

#include "otriage/pipeline.hpp"
#include "otriage/simulator.hpp"

using namespace otriage;

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double time_ms(F&& f) {
    auto t0 = Clock::now();
    f();
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Row {
    const char* stage;
    double serial_ms;
    double parallel_ms;
    bool equal;
};

void print_row(const Row& r) {
    double speedup = r.parallel_ms > 0 ? r.serial_ms / r.parallel_ms : 0.0;
    std::printf("%-18s serial %9.1fms  parallel %9.1fms  speedup %5.2fx  results %s\n",
                r.stage, r.serial_ms, r.parallel_ms, speedup, r.equal ? "equal" : "DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
    ScenarioConfig cfg;
    int repeat = 3;
    for (int i = 1; i < argc; ++i) {
        auto want = [&](const char* flag) {
            if (std::strcmp(argv[i], flag) != 0) return false;
            if (i + 1 >= argc) {
                std::fprintf(stderr, "%s needs a value\n", flag);
                std::exit(1);
            }
            return true;
        };
        if (want("--outages-per-pattern"))
            cfg.outages_per_pattern = std::atoi(argv[++i]);
        else if (want("--services"))
            cfg.n_services = std::atoi(argv[++i]);
        else if (want("--seed"))
            cfg.seed = std::strtoull(argv[++i], nullptr, 10);
        else if (want("--repeat"))
            repeat = std::atoi(argv[++i]);
        else {
            std::fprintf(stderr, "usage: otriage_bench [--outages-per-pattern N] [--services N] "
                                 "[--seed N] [--repeat N]\n");
            return 1;
        }
    }
    if (repeat < 1) repeat = 1;

    std::printf("generating scenario: %d patterns x %d outages, %d services\n", cfg.n_patterns,
                cfg.outages_per_pattern, cfg.n_services);
    Scenario s = generate_scenario(cfg);
    std::printf("train %zu incidents / %zu outages, test %zu incidents / %zu outages\n",
                s.train.incidents.size(), s.train.outages.size(), s.test.incidents.size(),
                s.test.outages.size());

    PipelineConfig serial_cfg;
    serial_cfg.mode = ExecMode::Serial;
    PipelineConfig parallel_cfg;
    parallel_cfg.mode = ExecMode::Parallel;

    bool all_equal = true;
    auto run = [&](const char* stage, auto&& serial_fn, auto&& parallel_fn, auto&& compare) {
        double sm = 0.0, pm = 0.0;
        for (int r = 0; r < repeat; ++r) {
            sm += time_ms(serial_fn);
            pm += time_ms(parallel_fn);
        }
        Row row{stage, sm / repeat, pm / repeat, compare()};
        all_equal = all_equal && row.equal;
        print_row(row);
    };

    // Shared artifacts trained once, serially, for the stage-level comparisons.
    TrainedArtifacts art = train_pipeline(s.train, s.lexicon, serial_cfg, nullptr);
    WindowIndex train_index(s.train.incidents);
    const TimeWindow window = serial_cfg.window.resolve();

    std::vector<std::optional<MetaIncidentId>> metas_serial, metas_parallel;
    run(
        "resolve-templates",
        [&] {
            metas_serial =
                resolve_all(s.train, art.registry, art.vocab, art.lexicon, ExecMode::Serial);
        },
        [&] {
            metas_parallel =
                resolve_all(s.train, art.registry, art.vocab, art.lexicon, ExecMode::Parallel);
        },
        [&] { return metas_serial == metas_parallel; });

    std::vector<ServiceGraph> graphs_serial, graphs_parallel;
    run(
        "outage-graphs",
        [&] {
            graphs_serial = build_service_graphs(art.gm, s.train, metas_serial, train_index,
                                                 window, ExecMode::Serial);
        },
        [&] {
            graphs_parallel = build_service_graphs(art.gm, s.train, metas_parallel, train_index,
                                                   window, ExecMode::Parallel);
        },
        [&] { return graphs_serial == graphs_parallel; });

    TrainedArtifacts tree_serial, tree_parallel;
    run(
        "train-tree",
        [&] { tree_serial = train_pipeline(s.train, s.lexicon, serial_cfg, nullptr); },
        [&] { tree_parallel = train_pipeline(s.train, s.lexicon, parallel_cfg, nullptr); },
        [&] {
            return serialize_model(tree_serial.model) == serialize_model(tree_parallel.model);
        });

    PipelineConfig svm_serial_cfg = serial_cfg;
    svm_serial_cfg.kind = ModelKind::Svm;
    PipelineConfig svm_parallel_cfg = parallel_cfg;
    svm_parallel_cfg.kind = ModelKind::Svm;
    TrainedArtifacts svm_serial, svm_parallel;
    run(
        "train-svm",
        [&] { svm_serial = train_pipeline(s.train, s.lexicon, svm_serial_cfg, nullptr); },
        [&] { svm_parallel = train_pipeline(s.train, s.lexicon, svm_parallel_cfg, nullptr); },
        [&] {
            return serialize_model(svm_serial.model) == serialize_model(svm_parallel.model);
        });

    EvalReport eval_serial, eval_parallel;
    run(
        "evaluate",
        [&] { eval_serial = evaluate_corpus(art, s.test, ExecMode::Serial); },
        [&] { eval_parallel = evaluate_corpus(art, s.test, ExecMode::Parallel); },
        [&] {
            return format_eval_report(eval_serial, s.test) ==
                   format_eval_report(eval_parallel, s.test);
        });

    std::printf("%s\n", all_equal ? "all stages agree across modes"
                                  : "MODE MISMATCH: serial and parallel results differ");
    return all_equal ? 0 : 1;
}
