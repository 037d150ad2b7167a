#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "otriage/corpus.hpp"
#include "otriage/records.hpp"
#include "otriage/templates.hpp"

namespace otriage {

// Historical correlation graph over meta-incident IDs. Undirected; self-pairs
// allowed. Edges stored canonically as (min, max).
struct MetaGraph {
    std::set<MetaIncidentId> nodes;
    std::set<std::pair<MetaIncidentId, MetaIncidentId>> edges;

    void add_edge(MetaIncidentId a, MetaIncidentId b);
    bool has_edge(MetaIncidentId a, MetaIncidentId b) const;

    void save(const std::string& path) const;
    static MetaGraph load(const std::string& path);

    bool operator==(const MetaGraph&) const = default;
};

// Parses an incident's title and resolves its meta-incident ID through the
// registry (registering it first when the registry is in mining mode).
class TemplateResolver {
public:
    TemplateResolver(TemplateRegistry& registry, const Vocabulary& vocab,
                     const LocationLexicon& lexicon)
        : registry_(registry), vocab_(vocab), lexicon_(lexicon) {}

    std::optional<MetaIncidentId> resolve(const Incident& incident) const;
    const TemplateRegistry& registry() const { return registry_; }

private:
    TemplateRegistry& registry_;
    const Vocabulary& vocab_;
    const LocationLexicon& lexicon_;
};

// One label per historical correlated-incident pair; both endpoints are parsed
// to meta-incident IDs and the unordered ID pair becomes an edge.
// Registry must be able to resolve every labeled incident (mining mode).
MetaGraph build_gm(std::span<const CorrelationLabel> labels, const Corpus& corpus,
                   const TemplateResolver& resolver);

// Per-outage incident correlation graph: the fixpoint closure of the origin
// incident under meta-ID links. Nodes are sorted by (created_at, incident_id);
// edges stored canonically by incident id.
struct IncidentGraph {
    const Incident* origin = nullptr;
    std::vector<const Incident*> nodes;  // includes origin
    std::set<std::pair<std::string, std::string>> edges;

    bool contains(const std::string& incident_id) const;
};

// Candidate incidents with their (possibly unknown) meta IDs; incidents whose
// template the frozen registry does not know never join the graph.
struct ResolvedIncident {
    const Incident* incident = nullptr;
    std::optional<MetaIncidentId> meta_id;
};

// Starts from the origin and repeatedly admits any candidate whose meta-ID
// pair with an already-admitted incident is a G_M edge, adding the incident
// edge for every such admitted incident, until a full pass admits nothing.
// The result is independent of candidate order: the node set is the connected
// component of the origin in the instantiated incident graph, and the edge
// set contains every in-component pair whose meta-ID pair is in G_M.
IncidentGraph build_gi(const MetaGraph& gm, std::span<const ResolvedIncident> candidates,
                       const Incident& origin, std::optional<MetaIncidentId> origin_meta);

// Convenience form that resolves templates itself.
IncidentGraph build_gi(const MetaGraph& gm, std::span<const Incident* const> window_incidents,
                       const Incident& origin, const TemplateResolver& resolver);

// Per-outage service correlation graph: G_I grouped by owning service.
struct ServiceGraph {
    std::vector<std::string> services;  // sorted ascending
    std::set<std::pair<std::string, std::string>> edges;  // canonical; self-loops allowed
    std::map<std::string, int> incident_count;

    bool operator==(const ServiceGraph&) const = default;
};

ServiceGraph build_gs(const IncidentGraph& gi);

// Line-delimited node/edge records with a kind field (meta|incident|service),
// the `graph` subcommand's output format.
std::string export_records(const MetaGraph& gm);
std::string export_records(const IncidentGraph& gi);
std::string export_records(const ServiceGraph& gs);

}  // namespace otriage
