#include "otriage/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "otriage/errors.hpp"

namespace otriage {

namespace {

using json = nlohmann::json;

[[noreturn]] void line_error(const std::string& path, std::size_t line, const std::string& why) {
    throw ParseError(path + ":" + std::to_string(line) + ": " + why);
}

json parse_line(const std::string& path, std::size_t line_no, const std::string& line) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) line_error(path, line_no, "not a JSON object");
    return j;
}

std::string require_string(const std::string& path, std::size_t line_no, const json& j,
                           const char* field) {
    auto it = j.find(field);
    if (it == j.end() || !it->is_string() || it->get<std::string>().empty())
        line_error(path, line_no, std::string("missing or empty field '") + field + "'");
    return it->get<std::string>();
}

TimestampMs require_timestamp(const std::string& path, std::size_t line_no, const json& j,
                              const char* field) {
    auto it = j.find(field);
    if (it == j.end() || !it->is_string())
        line_error(path, line_no, std::string("missing timestamp field '") + field + "'");
    try {
        return parse_iso8601(it->get<std::string>());
    } catch (const ParseError& e) {
        line_error(path, line_no, e.what());
    }
}

bool blank_trimmed(const std::string& s) {
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
}

template <typename Record, typename ParseFn>
std::vector<Record> load_lines(const std::string& path, ParseFn parse_record) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::vector<Record> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        out.push_back(parse_record(line_no, line));
    }
    return out;
}

std::string json_escape(const std::string& s) {
    return json(s).dump();
}

}  // namespace

std::vector<Incident> load_incidents(const std::string& path) {
    auto rows = load_lines<Incident>(path, [&](std::size_t n, const std::string& line) {
        json j = parse_line(path, n, line);
        Incident r;
        r.incident_id = require_string(path, n, j, "incident_id");
        r.title = require_string(path, n, j, "title");
        if (blank_trimmed(r.title)) line_error(path, n, "title is all whitespace");
        r.owning_service = require_string(path, n, j, "owning_service");
        r.region = require_string(path, n, j, "region");
        auto sev = j.find("severity");
        if (sev == j.end() || !sev->is_number_integer())
            line_error(path, n, "missing or non-integer field 'severity'");
        r.severity = sev->get<int>();
        if (r.severity < 0 || r.severity > 4)
            throw ValidationError(path + ":" + std::to_string(n) + ": severity " +
                                  std::to_string(r.severity) + " outside [0,4]");
        r.created_at = require_timestamp(path, n, j, "created_at");
        return r;
    });

    std::unordered_set<std::string> seen;
    for (const auto& r : rows) {
        if (!seen.insert(r.incident_id).second)
            throw ValidationError(path + ": duplicate incident_id '" + r.incident_id + "'");
    }
    return rows;
}

std::vector<Outage> load_outages(const std::string& path) {
    auto rows = load_lines<Outage>(path, [&](std::size_t n, const std::string& line) {
        json j = parse_line(path, n, line);
        Outage r;
        r.outage_id = require_string(path, n, j, "outage_id");
        r.origin_incident_id = require_string(path, n, j, "origin_incident_id");
        r.declaration_time = require_timestamp(path, n, j, "declaration_time");
        r.region = require_string(path, n, j, "region");
        auto rc = j.find("root_cause_service");
        if (rc != j.end() && !rc->is_null()) {
            if (!rc->is_string()) line_error(path, n, "field 'root_cause_service' must be a string");
            r.root_cause_service = rc->get<std::string>();
        }
        return r;
    });

    std::unordered_set<std::string> seen;
    for (const auto& r : rows) {
        if (!seen.insert(r.outage_id).second)
            throw ValidationError(path + ": duplicate outage_id '" + r.outage_id + "'");
    }
    return rows;
}

std::vector<CorrelationLabel> load_correlations(const std::string& path) {
    return load_lines<CorrelationLabel>(path, [&](std::size_t n, const std::string& line) {
        json j = parse_line(path, n, line);
        CorrelationLabel r;
        r.incident_a = require_string(path, n, j, "incident_a");
        r.incident_b = require_string(path, n, j, "incident_b");
        r.outage_id = require_string(path, n, j, "outage_id");
        if (r.incident_a == r.incident_b)
            throw ValidationError(path + ":" + std::to_string(n) +
                                  ": correlation pairs an incident with itself ('" + r.incident_a +
                                  "')");
        return r;
    });
}

ServiceCatalog load_catalog(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    ServiceCatalog catalog;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) line_error(path, line_no, "expected 'service<TAB>category'");
        std::string service = line.substr(0, tab);
        std::string category = line.substr(tab + 1);
        auto cat = category_from_string(category);
        if (!cat) line_error(path, line_no, "unknown category '" + category + "'");
        try {
            catalog.add(std::move(service), *cat);
        } catch (const ValidationError& e) {
            throw ValidationError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return catalog;
}

std::string serialize(const Incident& r) {
    std::string out = "{\"incident_id\":" + json_escape(r.incident_id);
    out += ",\"title\":" + json_escape(r.title);
    out += ",\"owning_service\":" + json_escape(r.owning_service);
    out += ",\"region\":" + json_escape(r.region);
    out += ",\"severity\":" + std::to_string(r.severity);
    out += ",\"created_at\":\"" + format_iso8601(r.created_at) + "\"}";
    return out;
}

std::string serialize(const Outage& r) {
    std::string out = "{\"outage_id\":" + json_escape(r.outage_id);
    out += ",\"origin_incident_id\":" + json_escape(r.origin_incident_id);
    out += ",\"declaration_time\":\"" + format_iso8601(r.declaration_time) + "\"";
    out += ",\"region\":" + json_escape(r.region);
    if (r.root_cause_service)
        out += ",\"root_cause_service\":" + json_escape(*r.root_cause_service);
    out += "}";
    return out;
}

std::string serialize(const CorrelationLabel& r) {
    std::string out = "{\"incident_a\":" + json_escape(r.incident_a);
    out += ",\"incident_b\":" + json_escape(r.incident_b);
    out += ",\"outage_id\":" + json_escape(r.outage_id) + "}";
    return out;
}

namespace {
template <typename Record>
void save_jsonl(const std::string& path, std::span<const Record> rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path + "'");
    for (const auto& r : rows) out << serialize(r) << '\n';
}
}  // namespace

void save_incidents(const std::string& path, std::span<const Incident> rows) {
    save_jsonl(path, rows);
}
void save_outages(const std::string& path, std::span<const Outage> rows) {
    save_jsonl(path, rows);
}
void save_correlations(const std::string& path, std::span<const CorrelationLabel> rows) {
    save_jsonl(path, rows);
}

void save_catalog(const std::string& path, const ServiceCatalog& catalog) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path + "'");
    for (const auto& [service, category] : catalog.entries())
        out << service << '\t' << to_string(category) << '\n';
}

void Corpus::rebuild_index() {
    incident_index.clear();
    outage_index.clear();
    incident_index.reserve(incidents.size());
    for (std::size_t i = 0; i < incidents.size(); ++i) {
        if (!incident_index.emplace(incidents[i].incident_id, i).second)
            throw ValidationError("duplicate incident_id '" + incidents[i].incident_id + "'");
    }
    for (std::size_t i = 0; i < outages.size(); ++i) {
        if (!outage_index.emplace(outages[i].outage_id, i).second)
            throw ValidationError("duplicate outage_id '" + outages[i].outage_id + "'");
    }
}

void Corpus::validate_references() const {
    for (const auto& o : outages) {
        if (!find_incident(o.origin_incident_id))
            throw ValidationError("outage '" + o.outage_id + "': origin incident '" +
                                  o.origin_incident_id + "' not found");
        if (o.root_cause_service && !catalog.empty() && !catalog.contains(*o.root_cause_service))
            throw ValidationError("outage '" + o.outage_id + "': root-cause service '" +
                                  *o.root_cause_service + "' not in catalog");
    }
    for (const auto& c : correlations) {
        if (c.incident_a == c.incident_b)
            throw ValidationError("correlation in outage '" + c.outage_id +
                                  "' pairs an incident with itself");
        if (!find_incident(c.incident_a))
            throw ValidationError("correlation references unknown incident '" + c.incident_a + "'");
        if (!find_incident(c.incident_b))
            throw ValidationError("correlation references unknown incident '" + c.incident_b + "'");
    }
}

const Incident* Corpus::find_incident(const std::string& id) const {
    auto it = incident_index.find(id);
    return it == incident_index.end() ? nullptr : &incidents[it->second];
}

const Outage* Corpus::find_outage(const std::string& id) const {
    auto it = outage_index.find(id);
    return it == outage_index.end() ? nullptr : &outages[it->second];
}

Corpus load_corpus_dir(const std::string& incidents_path, const std::string& outages_path,
                       const std::string& correlations_path, const std::string& catalog_path) {
    Corpus c;
    c.incidents = load_incidents(incidents_path);
    c.outages = load_outages(outages_path);
    c.correlations = load_correlations(correlations_path);
    c.catalog = load_catalog(catalog_path);
    c.rebuild_index();
    c.validate_references();
    return c;
}

namespace {
bool window_order(const Incident* a, const Incident* b) {
    if (a->created_at != b->created_at) return a->created_at < b->created_at;
    return a->incident_id < b->incident_id;
}
}  // namespace

std::vector<const Incident*> fetch_window(std::span<const Incident> incidents,
                                          const Outage& outage, const TimeWindow& window) {
    if (!window.valid()) throw ValidationError("time window start must precede end");
    const std::string region = normalize_region(outage.region);
    const TimestampMs lo = outage.declaration_time + window.start_offset;
    const TimestampMs hi = outage.declaration_time + window.end_offset;

    std::vector<const Incident*> out;
    for (const Incident& inc : incidents) {
        if (inc.created_at < lo || inc.created_at > hi) continue;
        if (normalize_region(inc.region) != region) continue;
        out.push_back(&inc);
    }
    std::sort(out.begin(), out.end(), window_order);
    return out;
}

WindowIndex::WindowIndex(std::span<const Incident> incidents) {
    for (const Incident& inc : incidents)
        by_region_[normalize_region(inc.region)].push_back(&inc);
    for (auto& [region, list] : by_region_) std::sort(list.begin(), list.end(), window_order);
}

std::vector<const Incident*> WindowIndex::query(const Outage& outage,
                                                const TimeWindow& window) const {
    if (!window.valid()) throw ValidationError("time window start must precede end");
    auto it = by_region_.find(normalize_region(outage.region));
    if (it == by_region_.end()) return {};
    const auto& list = it->second;
    const TimestampMs lo = outage.declaration_time + window.start_offset;
    const TimestampMs hi = outage.declaration_time + window.end_offset;

    auto first = std::partition_point(list.begin(), list.end(),
                                      [&](const Incident* p) { return p->created_at < lo; });
    std::vector<const Incident*> out;
    for (auto p = first; p != list.end() && (*p)->created_at <= hi; ++p) out.push_back(*p);
    return out;
}

}  // namespace otriage
