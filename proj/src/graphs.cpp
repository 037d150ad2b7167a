#include "otriage/graphs.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "otriage/errors.hpp"
#include "otriage/time_iso.hpp"

namespace otriage {

namespace {

std::pair<MetaIncidentId, MetaIncidentId> canon(MetaIncidentId a, MetaIncidentId b) {
    return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
}

std::pair<std::string, std::string> canon_ids(const std::string& a, const std::string& b) {
    return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
}

std::string jstr(const std::string& s) { return nlohmann::json(s).dump(); }

}  // namespace

void MetaGraph::add_edge(MetaIncidentId a, MetaIncidentId b) {
    nodes.insert(a);
    nodes.insert(b);
    edges.insert(canon(a, b));
}

bool MetaGraph::has_edge(MetaIncidentId a, MetaIncidentId b) const {
    return edges.count(canon(a, b)) != 0;
}

void MetaGraph::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open for writing: " + path);
    out << "#otriage-gm v1\n";
    for (MetaIncidentId n : nodes) out << "n\t" << n << "\n";
    for (const auto& [a, b] : edges) out << "e\t" << a << "\t" << b << "\n";
    if (!out) throw ValidationError("write failed: " + path);
}

MetaGraph MetaGraph::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "#otriage-gm v1")
        throw ParseError(path + ": bad header");
    MetaGraph gm;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string tag;
        long long a = 0, b = 0;
        ss >> tag;
        if (tag == "n" && (ss >> a)) {
            gm.nodes.insert(static_cast<MetaIncidentId>(a));
        } else if (tag == "e" && (ss >> a >> b)) {
            gm.add_edge(static_cast<MetaIncidentId>(a), static_cast<MetaIncidentId>(b));
        } else {
            throw ParseError(path + ":" + std::to_string(lineno) + ": bad record");
        }
    }
    return gm;
}

std::optional<MetaIncidentId> TemplateResolver::resolve(const Incident& incident) const {
    Template t = parse_title(incident.title, vocab_, lexicon_, incident.owning_service);
    return registry_.assign(t);
}

MetaGraph build_gm(std::span<const CorrelationLabel> labels, const Corpus& corpus,
                   const TemplateResolver& resolver) {
    MetaGraph gm;
    for (const auto& label : labels) {
        const Incident* a = corpus.find_incident(label.incident_a);
        const Incident* b = corpus.find_incident(label.incident_b);
        if (!a)
            throw ValidationError("correlation label references unknown incident: " +
                                  label.incident_a);
        if (!b)
            throw ValidationError("correlation label references unknown incident: " +
                                  label.incident_b);
        auto ma = resolver.resolve(*a);
        auto mb = resolver.resolve(*b);
        if (!ma || !mb)
            throw ValidationError("cannot resolve template for labeled incident pair " +
                                  label.incident_a + "," + label.incident_b);
        gm.add_edge(*ma, *mb);
    }
    return gm;
}

bool IncidentGraph::contains(const std::string& incident_id) const {
    for (const Incident* n : nodes)
        if (n->incident_id == incident_id) return true;
    return false;
}

IncidentGraph build_gi(const MetaGraph& gm, std::span<const ResolvedIncident> candidates,
                       const Incident& origin, std::optional<MetaIncidentId> origin_meta) {
    // Candidates grouped by meta ID; incidents with unknown templates can
    // never satisfy a G_M edge, so they are dropped up front.
    std::map<MetaIncidentId, std::vector<const Incident*>> groups;
    for (const auto& c : candidates) {
        if (!c.incident || !c.meta_id) continue;
        if (c.incident->incident_id == origin.incident_id) continue;
        groups[*c.meta_id].push_back(c.incident);
    }

    // The admission loop stabilizes on the connected component of the origin,
    // and all incidents sharing a meta ID enter or stay out together. Walk the
    // quotient graph over occupied meta IDs instead of candidate pairs.
    std::set<MetaIncidentId> reached;
    std::deque<MetaIncidentId> frontier;
    if (origin_meta) {
        for (const auto& [m, _] : groups) {
            if (gm.has_edge(*origin_meta, m)) {
                reached.insert(m);
                frontier.push_back(m);
            }
        }
    }
    while (!frontier.empty()) {
        MetaIncidentId m = frontier.front();
        frontier.pop_front();
        for (const auto& [n, _] : groups) {
            if (!reached.count(n) && gm.has_edge(m, n)) {
                reached.insert(n);
                frontier.push_back(n);
            }
        }
    }

    IncidentGraph gi;
    gi.origin = &origin;
    gi.nodes.push_back(&origin);
    for (MetaIncidentId m : reached)
        for (const Incident* inc : groups[m]) gi.nodes.push_back(inc);
    std::sort(gi.nodes.begin(), gi.nodes.end(), [](const Incident* a, const Incident* b) {
        if (a->created_at != b->created_at) return a->created_at < b->created_at;
        return a->incident_id < b->incident_id;
    });

    // Component incidents carrying a given meta ID.
    auto members = [&](MetaIncidentId m) {
        std::vector<const Incident*> out;
        if (origin_meta && *origin_meta == m) out.push_back(&origin);
        if (reached.count(m)) {
            auto it = groups.find(m);
            if (it != groups.end())
                out.insert(out.end(), it->second.begin(), it->second.end());
        }
        return out;
    };

    for (const auto& [a, b] : gm.edges) {
        std::vector<const Incident*> as = members(a);
        if (as.empty()) continue;
        if (a == b) {
            for (size_t i = 0; i < as.size(); ++i)
                for (size_t j = i + 1; j < as.size(); ++j)
                    gi.edges.insert(canon_ids(as[i]->incident_id, as[j]->incident_id));
        } else {
            std::vector<const Incident*> bs = members(b);
            for (const Incident* u : as)
                for (const Incident* v : bs)
                    gi.edges.insert(canon_ids(u->incident_id, v->incident_id));
        }
    }
    return gi;
}

IncidentGraph build_gi(const MetaGraph& gm, std::span<const Incident* const> window_incidents,
                       const Incident& origin, const TemplateResolver& resolver) {
    std::vector<ResolvedIncident> resolved;
    resolved.reserve(window_incidents.size());
    for (const Incident* inc : window_incidents)
        resolved.push_back({inc, resolver.resolve(*inc)});
    return build_gi(gm, resolved, origin, resolver.resolve(origin));
}

ServiceGraph build_gs(const IncidentGraph& gi) {
    ServiceGraph gs;
    std::map<std::string, const std::string*> service_of;
    for (const Incident* inc : gi.nodes) {
        gs.incident_count[inc->owning_service] += 1;
        service_of[inc->incident_id] = &inc->owning_service;
    }
    for (const auto& [u, v] : gi.edges) {
        auto su = service_of.find(u);
        auto sv = service_of.find(v);
        if (su == service_of.end() || sv == service_of.end())
            throw ValidationError("incident edge endpoint missing from node set");
        gs.edges.insert(canon_ids(*su->second, *sv->second));
    }
    for (const auto& [svc, _] : gs.incident_count) gs.services.push_back(svc);
    return gs;
}

std::string export_records(const MetaGraph& gm) {
    std::string out;
    for (MetaIncidentId n : gm.nodes)
        out += "{\"kind\":\"meta\",\"type\":\"node\",\"id\":" + std::to_string(n) + "}\n";
    for (const auto& [a, b] : gm.edges)
        out += "{\"kind\":\"meta\",\"type\":\"edge\",\"a\":" + std::to_string(a) +
               ",\"b\":" + std::to_string(b) + "}\n";
    return out;
}

std::string export_records(const IncidentGraph& gi) {
    std::string out;
    for (const Incident* n : gi.nodes) {
        out += "{\"kind\":\"incident\",\"type\":\"node\",\"id\":" + jstr(n->incident_id) +
               ",\"service\":" + jstr(n->owning_service) +
               ",\"created_at\":" + jstr(format_iso8601(n->created_at)) +
               ",\"origin\":" + (gi.origin && n == gi.origin ? "true" : "false") + "}\n";
    }
    for (const auto& [a, b] : gi.edges)
        out += "{\"kind\":\"incident\",\"type\":\"edge\",\"a\":" + jstr(a) +
               ",\"b\":" + jstr(b) + "}\n";
    return out;
}

std::string export_records(const ServiceGraph& gs) {
    std::string out;
    for (const std::string& s : gs.services) {
        int count = gs.incident_count.at(s);
        out += "{\"kind\":\"service\",\"type\":\"node\",\"id\":" + jstr(s) +
               ",\"incident_count\":" + std::to_string(count) + "}\n";
    }
    for (const auto& [a, b] : gs.edges)
        out += "{\"kind\":\"service\",\"type\":\"edge\",\"a\":" + jstr(a) +
               ",\"b\":" + jstr(b) + "}\n";
    return out;
}

}  // namespace otriage
