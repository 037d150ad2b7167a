#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <unistd.h>
#include <vector>

#include <json.hpp>

#include "otriage/errors.hpp"
#include "otriage/graphs.hpp"
#include "otriage/rng.hpp"

using namespace otriage;
namespace fs = std::filesystem;

TEST_SUITE_BEGIN("graphs");

namespace {

fs::path temp_file(const char* name) {
    static int counter = 0;
    fs::path dir = fs::temp_directory_path() /
                   ("otriage-graph-" + std::to_string(::getpid()) + "-" +
                    std::to_string(counter++));
    fs::create_directories(dir);
    return dir / name;
}

Incident make_incident(std::string id, TimestampMs created, std::string service = "svc") {
    Incident inc;
    inc.incident_id = std::move(id);
    inc.title = "t";
    inc.owning_service = std::move(service);
    inc.region = "west us 2";
    inc.severity = 2;
    inc.created_at = created;
    return inc;
}

std::vector<std::string> node_ids(const IncidentGraph& gi) {
    std::vector<std::string> out;
    for (const auto* inc : gi.nodes) out.push_back(inc->incident_id);
    return out;
}

// Reference construction: instantiate the full pairwise incident graph, walk
// the component of the origin, then keep in-component pairs backed by an edge.
struct OracleResult {
    std::vector<std::string> nodes;
    std::set<std::pair<std::string, std::string>> edges;
};

OracleResult oracle_gi(const MetaGraph& gm, const std::vector<ResolvedIncident>& candidates,
                       const Incident& origin, std::optional<MetaIncidentId> origin_meta) {
    struct Node {
        const Incident* inc;
        std::optional<MetaIncidentId> meta;
    };
    std::vector<Node> all;
    all.push_back({&origin, origin_meta});
    for (const auto& c : candidates) {
        if (c.incident->incident_id == origin.incident_id) continue;
        all.push_back({c.incident, c.meta_id});
    }

    auto linked = [&](const Node& a, const Node& b) {
        return a.meta && b.meta && gm.has_edge(*a.meta, *b.meta);
    };

    std::vector<char> in_comp(all.size(), 0);
    std::queue<std::size_t> q;
    in_comp[0] = 1;
    q.push(0);
    while (!q.empty()) {
        std::size_t u = q.front();
        q.pop();
        for (std::size_t v = 0; v < all.size(); ++v) {
            if (!in_comp[v] && linked(all[u], all[v])) {
                in_comp[v] = 1;
                q.push(v);
            }
        }
    }

    OracleResult res;
    std::vector<const Incident*> members;
    for (std::size_t i = 0; i < all.size(); ++i)
        if (in_comp[i]) members.push_back(all[i].inc);
    std::sort(members.begin(), members.end(), [](const Incident* a, const Incident* b) {
        if (a->created_at != b->created_at) return a->created_at < b->created_at;
        return a->incident_id < b->incident_id;
    });
    for (const auto* m : members) res.nodes.push_back(m->incident_id);

    for (std::size_t i = 0; i < all.size(); ++i) {
        if (!in_comp[i]) continue;
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            if (!in_comp[j] || !linked(all[i], all[j])) continue;
            auto a = all[i].inc->incident_id;
            auto b = all[j].inc->incident_id;
            if (b < a) std::swap(a, b);
            res.edges.insert({a, b});
        }
    }
    return res;
}

}  // namespace

TEST_CASE("meta graph stores edges canonically") {
    MetaGraph gm;
    gm.add_edge(7, 3);
    gm.add_edge(3, 7);
    gm.add_edge(5, 5);
    CHECK(gm.edges.size() == 2);
    CHECK(gm.edges.count({3, 7}) == 1);
    CHECK(gm.edges.count({5, 5}) == 1);
    CHECK(gm.has_edge(7, 3));
    CHECK(gm.has_edge(3, 7));
    CHECK(gm.has_edge(5, 5));
    CHECK_FALSE(gm.has_edge(3, 5));
    CHECK(gm.nodes == std::set<MetaIncidentId>{3, 5, 7});
}

TEST_CASE("meta graph save/load round-trip") {
    MetaGraph gm;
    gm.add_edge(0, 4);
    gm.add_edge(2, 2);
    gm.nodes.insert(9);  // isolated node survives the round-trip
    auto p = temp_file("gm.txt").string();
    gm.save(p);
    MetaGraph loaded = MetaGraph::load(p);
    CHECK(loaded == gm);
}

TEST_CASE("build_gm links labeled pairs by meta id") {
    Corpus corpus;
    corpus.incidents.push_back(make_incident("a", 100));
    corpus.incidents.push_back(make_incident("b", 200));
    corpus.incidents.push_back(make_incident("c", 300));
    corpus.incidents[0].title = "disk stall in node 4";
    corpus.incidents[1].title = "disk stall in node 9";
    corpus.incidents[2].title = "vm reboot storm";
    corpus.rebuild_index();

    LocationLexicon lex;
    std::vector<std::string> titles;
    for (const auto& inc : corpus.incidents) titles.push_back(inc.title);
    Vocabulary vocab = build_vocabulary(titles, 1, lex);
    TemplateRegistry reg;
    TemplateResolver resolver(reg, vocab, lex);

    std::vector<CorrelationLabel> labels = {
        {"a", "b", "out-1"},
        {"b", "c", "out-2"},
    };
    MetaGraph gm = build_gm(labels, corpus, resolver);
    // a and b share one template, so the first label is a self-pair.
    CHECK(gm.edges.size() == 2);
    CHECK(reg.size() == 2);

    std::vector<CorrelationLabel> bad = {{"a", "missing", "out-3"}};
    CHECK_THROWS_AS(build_gm(bad, corpus, resolver), ValidationError);
}

TEST_CASE("build_gi keeps the origin even when its template is unknown") {
    MetaGraph gm;
    gm.add_edge(0, 1);
    Incident origin = make_incident("origin", 50);
    std::vector<Incident> store = {make_incident("x", 10)};
    std::vector<ResolvedIncident> cands = {{&store[0], 0}};
    IncidentGraph gi = build_gi(gm, cands, origin, std::nullopt);
    CHECK(node_ids(gi) == std::vector<std::string>{"origin"});
    CHECK(gi.edges.empty());
    CHECK(gi.origin == &origin);
    CHECK(gi.contains("origin"));
    CHECK_FALSE(gi.contains("x"));
}

TEST_CASE("build_gi admits same-meta incidents through a self-pair edge") {
    MetaGraph gm;
    gm.add_edge(3, 3);
    Incident origin = make_incident("origin", 50);
    std::vector<Incident> store = {make_incident("p", 10), make_incident("q", 90),
                                   make_incident("r", 20)};
    std::vector<ResolvedIncident> cands = {
        {&store[0], 3}, {&store[1], 3}, {&store[2], 7}};
    IncidentGraph gi = build_gi(gm, cands, origin, 3);
    CHECK(node_ids(gi) == std::vector<std::string>{"p", "origin", "q"});
    CHECK(gi.edges == std::set<std::pair<std::string, std::string>>{
                          {"origin", "p"}, {"origin", "q"}, {"p", "q"}});
}

TEST_CASE("build_gi walks chains but not disconnected groups") {
    MetaGraph gm;
    gm.add_edge(0, 1);
    gm.add_edge(1, 2);
    gm.add_edge(4, 5);
    Incident origin = make_incident("origin", 0);
    std::vector<Incident> store = {
        make_incident("a", 10), make_incident("b", 20), make_incident("c", 30),
        make_incident("d", 40), make_incident("e", 50)};
    std::vector<ResolvedIncident> cands = {
        {&store[0], 1}, {&store[1], 2}, {&store[2], 4}, {&store[3], 5},
        {&store[4], std::nullopt}};
    IncidentGraph gi = build_gi(gm, cands, origin, 0);
    CHECK(node_ids(gi) == std::vector<std::string>{"origin", "a", "b"});
    CHECK(gi.edges == std::set<std::pair<std::string, std::string>>{
                          {"a", "origin"}, {"a", "b"}});
}

TEST_CASE("build_gi skips candidate rows that alias the origin id") {
    MetaGraph gm;
    gm.add_edge(0, 0);
    Incident origin = make_incident("origin", 50);
    std::vector<Incident> store = {make_incident("origin", 50), make_incident("z", 60)};
    std::vector<ResolvedIncident> cands = {{&store[0], 0}, {&store[1], 0}};
    IncidentGraph gi = build_gi(gm, cands, origin, 0);
    CHECK(node_ids(gi) == std::vector<std::string>{"origin", "z"});
    CHECK(gi.edges == std::set<std::pair<std::string, std::string>>{{"origin", "z"}});
    CHECK(gi.nodes[0] == &origin);  // the standalone origin record, not the alias
}

TEST_CASE("build_gi matches the component oracle on random instances") {
    Rng rng(20240817);
    for (int iter = 0; iter < 300; ++iter) {
        int n_meta = 1 + static_cast<int>(rng.uniform(10));
        MetaGraph gm;
        for (int i = 0; i < n_meta; ++i) gm.nodes.insert(i);
        int n_edges = static_cast<int>(rng.uniform(2 * n_meta + 1));
        for (int i = 0; i < n_edges; ++i)
            gm.add_edge(static_cast<int>(rng.uniform(n_meta)),
                        static_cast<int>(rng.uniform(n_meta)));

        // Meta space deliberately wider than the graph: some candidate IDs
        // have no edges at all.
        int meta_space = n_meta + 2;
        std::size_t n_cand = rng.uniform(50);
        std::vector<Incident> store;
        store.reserve(n_cand);
        char buf[32];
        for (std::size_t i = 0; i < n_cand; ++i) {
            std::snprintf(buf, sizeof buf, "inc-%04zu", i);
            store.push_back(make_incident(buf, static_cast<TimestampMs>(rng.uniform(40))));
        }
        std::vector<ResolvedIncident> cands;
        for (auto& inc : store) {
            std::optional<MetaIncidentId> meta;
            if (!rng.chance(0.1))
                meta = static_cast<int>(rng.uniform(meta_space));
            cands.push_back({&inc, meta});
        }
        Incident origin = make_incident("origin", static_cast<TimestampMs>(rng.uniform(40)));
        std::optional<MetaIncidentId> origin_meta;
        if (!rng.chance(0.1)) origin_meta = static_cast<int>(rng.uniform(meta_space));

        IncidentGraph gi = build_gi(gm, cands, origin, origin_meta);
        OracleResult want = oracle_gi(gm, cands, origin, origin_meta);
        REQUIRE(node_ids(gi) == want.nodes);
        REQUIRE(gi.edges == want.edges);
    }
}

TEST_CASE("service graph conserves incidents and backs every edge") {
    MetaGraph gm;
    gm.add_edge(0, 1);
    gm.add_edge(1, 1);
    Incident origin = make_incident("origin", 0, "svc-a");
    std::vector<Incident> store = {make_incident("a", 10, "svc-b"),
                                   make_incident("b", 20, "svc-b"),
                                   make_incident("c", 30, "svc-c")};
    std::vector<ResolvedIncident> cands = {
        {&store[0], 1}, {&store[1], 1}, {&store[2], 0}};
    // c (meta 0) cannot pair with the origin (0,0 is no edge); it joins
    // through a and b instead.
    IncidentGraph gi = build_gi(gm, cands, origin, 0);
    REQUIRE(node_ids(gi) == std::vector<std::string>{"origin", "a", "b", "c"});

    ServiceGraph gs = build_gs(gi);
    CHECK(gs.services == std::vector<std::string>{"svc-a", "svc-b", "svc-c"});
    int total = 0;
    for (const auto& [svc, n] : gs.incident_count) total += n;
    CHECK(total == static_cast<int>(gi.nodes.size()));
    CHECK(gs.incident_count.at("svc-b") == 2);

    // Every service edge must be the projection of some incident edge.
    for (const auto& [sa, sb] : gs.edges) {
        bool backed = false;
        for (const auto& [ia, ib] : gi.edges) {
            auto svc_of = [&](const std::string& id) {
                if (id == "origin") return std::string("svc-a");
                for (const auto& inc : store)
                    if (inc.incident_id == id) return inc.owning_service;
                return std::string();
            };
            auto x = svc_of(ia), y = svc_of(ib);
            if (y < x) std::swap(x, y);
            if (x == sa && y == sb) backed = true;
        }
        CHECK(backed);
    }
    // a-b share a service and have an incident edge (1,1 self-pair): loop.
    CHECK(gs.edges.count({"svc-b", "svc-b"}) == 1);
}

TEST_CASE("build_gs rejects edges naming unknown nodes") {
    Incident origin = make_incident("origin", 0);
    IncidentGraph gi;
    gi.origin = &origin;
    gi.nodes = {&origin};
    gi.edges.insert({"ghost", "origin"});
    CHECK_THROWS_AS(build_gs(gi), ValidationError);
}

TEST_CASE("export formats are line-delimited json with a kind field") {
    MetaGraph gm;
    gm.add_edge(0, 1);
    Incident origin = make_incident("origin", 0, "svc-a");
    std::vector<Incident> store = {make_incident("a", 10, "svc-b")};
    std::vector<ResolvedIncident> cands = {{&store[0], 1}};
    IncidentGraph gi = build_gi(gm, cands, origin, 0);
    ServiceGraph gs = build_gs(gi);

    for (const std::string& dump :
         {export_records(gm), export_records(gi), export_records(gs)}) {
        REQUIRE(!dump.empty());
        CHECK(dump.back() == '\n');
        std::size_t start = 0;
        while (start < dump.size()) {
            std::size_t end = dump.find('\n', start);
            auto j = nlohmann::json::parse(dump.substr(start, end - start));
            CHECK(j.contains("kind"));
            CHECK(j.contains("type"));
            start = end + 1;
        }
    }
    auto first = nlohmann::json::parse(
        export_records(gi).substr(0, export_records(gi).find('\n')));
    CHECK(first["kind"] == "incident");
    CHECK(first["type"] == "node");
    CHECK(first["id"] == "origin");
    CHECK(first["origin"] == true);
}

TEST_SUITE_END();
