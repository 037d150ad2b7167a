#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

using namespace std::string_literals;
namespace fs = std::filesystem;

TEST_SUITE_BEGIN("cli");

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

fs::path temp_dir() {
    static int counter = 0;
    fs::path dir = fs::temp_directory_path() /
                   ("otriage-cli-" + std::to_string(::getpid()) + "-" +
                    std::to_string(counter++));
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return {};
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

CliResult run_cli(const std::string& args) {
    fs::path dir = temp_dir();
    fs::path out_p = dir / "stdout.txt";
    fs::path err_p = dir / "stderr.txt";
    std::string cmd = std::string(OTRIAGE_CLI_PATH) + " " + args + " >" + out_p.string() +
                      " 2>" + err_p.string();
    int raw = std::system(cmd.c_str());
    CliResult r;
    r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out_p);
    r.err = slurp(err_p);
    return r;
}

}  // namespace

TEST_CASE("usage errors exit with code 1") {
    CHECK(run_cli("").code == 1);
    CHECK(run_cli("train --bogus-flag x").code == 1);
    CHECK(run_cli("no-such-command").code == 1);
    CHECK(run_cli("train").code == 1);  // missing required options
    CHECK(run_cli("--help").code == 0);
    CHECK(run_cli("simulate --help").code == 0);
}

TEST_CASE("data errors exit with code 2") {
    CliResult r = run_cli(
        "mine-templates --incidents /nonexistent.jsonl --lexicon /nonexistent.txt "
        "--registry-out /tmp/otriage-never.tsv");
    CHECK(r.code == 2);
    CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("end to end flow over one scenario") {
    fs::path data = temp_dir();
    CliResult sim = run_cli("simulate --out " + data.string() +
                            " --seed 5 --services 20 --patterns 4 "
                            "--outages-per-pattern 6 --noise-ratio 0.9");
    REQUIRE(sim.code == 0);
    CHECK(sim.out.find("train incidents") != std::string::npos);
    REQUIRE(fs::exists(data / "manifest.json"));

    fs::path art1 = temp_dir();
    fs::path rep1 = art1 / "train-report.txt";
    CliResult t1 = run_cli("train --data " + data.string() + " --artifacts " +
                           art1.string() + " --report " + rep1.string());
    REQUIRE(t1.code == 0);
    for (const char* f : {"lexicon.txt", "vocab.txt", "registry.tsv", "gm.txt",
                          "schema.txt", "model.txt"})
        CHECK(fs::exists(art1 / f));
    std::string report1 = slurp(rep1);
    CHECK(report1.rfind("training report", 0) == 0);
    CHECK(t1.out.find("train_accuracy") != std::string::npos);
    CHECK(t1.out.find("stage ") != std::string::npos);   // timings on stdout
    CHECK(report1.find("stage ") == std::string::npos);  // never in the file

    // Re-training writes byte-identical artifacts.
    fs::path art2 = temp_dir();
    fs::path rep2 = art2 / "train-report.txt";
    CliResult t2 = run_cli("train --data " + data.string() + " --artifacts " +
                           art2.string() + " --report " + rep2.string());
    REQUIRE(t2.code == 0);
    CHECK(slurp(art1 / "model.txt") == slurp(art2 / "model.txt"));
    CHECK(slurp(art1 / "schema.txt") == slurp(art2 / "schema.txt"));
    CHECK(slurp(art1 / "registry.tsv") == slurp(art2 / "registry.tsv"));
    CHECK(report1 == slurp(rep2));

    // Serial and parallel evaluation produce the same report file.
    fs::path ev_par = temp_dir() / "eval-par.txt";
    fs::path ev_ser = temp_dir() / "eval-ser.txt";
    CliResult e1 = run_cli("evaluate --data " + data.string() + " --artifacts " +
                           art1.string() + " --report " + ev_par.string());
    REQUIRE(e1.code == 0);
    CliResult e2 = run_cli("evaluate --data " + data.string() + " --artifacts " +
                           art1.string() + " --serial --report " + ev_ser.string());
    REQUIRE(e2.code == 0);
    std::string eval_body = slurp(ev_par);
    CHECK(eval_body == slurp(ev_ser));
    CHECK(eval_body.rfind("evaluation report", 0) == 0);
    CHECK(e1.out.find("mean_latency_ms") != std::string::npos);
    CHECK(eval_body.find("mean_latency_ms") == std::string::npos);

    // 24 outages, floor(24 * 0.8) = 19 train, so test outages are 19..23.
    CliResult p = run_cli("predict --data " + data.string() + " --artifacts " +
                          art1.string() + " --outage out-0019");
    REQUIRE(p.code == 0);
    CHECK(p.out.find("outage out-0019") != std::string::npos);
    CHECK(p.out.find("rank 1 ") != std::string::npos);
    CHECK(p.out.find("latency_ms") != std::string::npos);

    CHECK(run_cli("predict --data " + data.string() + " --artifacts " + art1.string() +
                  " --outage out-9999")
              .code == 2);

    // Graph exports.
    CliResult gm = run_cli("graph --artifacts " + art1.string() + " --level meta");
    REQUIRE(gm.code == 0);
    CHECK(gm.out.find("\"kind\":\"meta\"") != std::string::npos);

    fs::path gs_out = temp_dir() / "gs.jsonl";
    CliResult gs = run_cli("graph --artifacts " + art1.string() + " --data " +
                           data.string() + " --outage out-0019 --out " + gs_out.string());
    REQUIRE(gs.code == 0);
    std::string gs_body = slurp(gs_out);
    REQUIRE(!gs_body.empty());
    std::size_t start = 0;
    while (start < gs_body.size()) {
        std::size_t end = gs_body.find('\n', start);
        auto j = nlohmann::json::parse(gs_body.substr(start, end - start));
        CHECK(j["kind"] == "service");
        start = end + 1;
    }

    CHECK(run_cli("graph --artifacts " + art1.string() + " --data " + data.string())
              .code == 2);  // incident/service level needs --outage

    // Window overrides are validated before any training happens.
    CHECK(run_cli("train --data " + data.string() + " --artifacts " +
                  (temp_dir() / "x").string() +
                  " --window-start 2 --window-end 1")
              .code == 2);
    CHECK(run_cli("train --data " + data.string() + " --artifacts " +
                  (temp_dir() / "x").string() + " --window half")
              .code == 2);
}

TEST_CASE("svm training refuses a single-class corpus") {
    fs::path data = temp_dir();
    CliResult sim = run_cli("simulate --out " + data.string() +
                            " --seed 3 --services 10 --patterns 2 "
                            "--outages-per-pattern 5 --noise-ratio 0.5 --single-root");
    REQUIRE(sim.code == 0);
    fs::path art = temp_dir();
    CliResult t = run_cli("train --data " + data.string() + " --artifacts " +
                          art.string() + " --model svm");
    CHECK(t.code == 2);
    CHECK(t.err.find("error:") != std::string::npos);

    // The tree path handles it.
    CliResult tt = run_cli("train --data " + data.string() + " --artifacts " +
                           art.string());
    CHECK(tt.code == 0);
}

TEST_SUITE_END();
