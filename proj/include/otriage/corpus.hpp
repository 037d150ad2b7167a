#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "otriage/records.hpp"

namespace otriage {

// Ingestion surface: line-delimited UTF-8, one JSON object per line for
// incidents / outages / correlation labels; `service<TAB>category` lines for
// the catalog. Timestamps are ISO-8601 strings with a zone.
//
// Loaders throw ParseError (naming the offending line) for malformed input and
// ValidationError for contract violations (duplicate ids, bad ranges).
std::vector<Incident> load_incidents(const std::string& path);
std::vector<Outage> load_outages(const std::string& path);
std::vector<CorrelationLabel> load_correlations(const std::string& path);
ServiceCatalog load_catalog(const std::string& path);

// Canonical serialized forms; load(serialize(x)) round-trips to an equal value.
std::string serialize(const Incident& r);
std::string serialize(const Outage& r);
std::string serialize(const CorrelationLabel& r);
void save_incidents(const std::string& path, std::span<const Incident> rows);
void save_outages(const std::string& path, std::span<const Outage> rows);
void save_correlations(const std::string& path, std::span<const CorrelationLabel> rows);
void save_catalog(const std::string& path, const ServiceCatalog& catalog);

// An immutable bundle of loaded records. Safe to share read-only across
// threads once constructed.
struct Corpus {
    std::vector<Incident> incidents;
    std::vector<Outage> outages;
    std::vector<CorrelationLabel> correlations;
    ServiceCatalog catalog;

    // Call after filling the vectors. Throws ValidationError on duplicate ids.
    void rebuild_index();

    // Cross-record checks: every outage origin resolves, every correlation
    // endpoint resolves and differs. Throws ValidationError.
    void validate_references() const;

    const Incident* find_incident(const std::string& id) const;
    const Outage* find_outage(const std::string& id) const;

    std::unordered_map<std::string, std::size_t> incident_index;
    std::unordered_map<std::string, std::size_t> outage_index;
};

Corpus load_corpus_dir(const std::string& incidents_path, const std::string& outages_path,
                       const std::string& correlations_path, const std::string& catalog_path);

// All incidents in the outage's region whose created_at lies in the closed
// interval [declaration_time + start_offset, declaration_time + end_offset].
// Output order is (created_at, incident_id) ascending. A pure filter.
std::vector<const Incident*> fetch_window(std::span<const Incident> incidents,
                                          const Outage& outage, const TimeWindow& window);

// Pre-sorted per-region index over a corpus; query() returns exactly what
// fetch_window returns but in O(log n + hits). Rebuilding per outage would
// dominate batch graph construction otherwise.
class WindowIndex {
public:
    explicit WindowIndex(std::span<const Incident> incidents);
    std::vector<const Incident*> query(const Outage& outage, const TimeWindow& window) const;

private:
    std::unordered_map<std::string, std::vector<const Incident*>> by_region_;
};

}  // namespace otriage
