#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "otriage/time_iso.hpp"

namespace otriage {

// An unplanned service interruption report.
struct Incident {
    std::string incident_id;
    std::string title;
    std::string owning_service;
    std::string region;
    int severity = 0;  // 0 (most urgent) .. 4
    TimestampMs created_at = 0;
};

// A severe incident declared as an outage; the classification unit.
struct Outage {
    std::string outage_id;
    std::string origin_incident_id;  // the incident the outage was declared from
    TimestampMs declaration_time = 0;
    std::string region;
    std::optional<std::string> root_cause_service;  // ground truth, present for training data
};

// A human-labeled "these two incidents were part of the same outage" pair.
struct CorrelationLabel {
    std::string incident_a;
    std::string incident_b;
    std::string outage_id;
};

// Closed interval relative to an outage's declaration time.
struct TimeWindow {
    DurationMs start_offset = 0;
    DurationMs end_offset = 0;

    bool valid() const { return start_offset < end_offset; }
};

enum class ServiceCategory { Infrastructure, Networking, Storage, Compute, Application };

inline constexpr ServiceCategory kAllCategories[] = {
    ServiceCategory::Infrastructure, ServiceCategory::Networking, ServiceCategory::Storage,
    ServiceCategory::Compute,        ServiceCategory::Application,
};

const char* to_string(ServiceCategory c);
std::optional<ServiceCategory> category_from_string(std::string_view s);

// Stack level of a category; Infrastructure lowest, Application highest.
int category_level(ServiceCategory c);

// Maps every known service to exactly one category. Preserves file order,
// which also fixes feature-column order downstream.
class ServiceCatalog {
public:
    // Throws ValidationError if the service is already present.
    void add(std::string service, ServiceCategory category);

    bool contains(const std::string& service) const { return index_.count(service) != 0; }
    std::optional<ServiceCategory> category_of(const std::string& service) const;

    const std::vector<std::pair<std::string, ServiceCategory>>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

private:
    std::vector<std::pair<std::string, ServiceCategory>> entries_;
    std::unordered_map<std::string, ServiceCategory> index_;
};

// Region comparison is exact string equality after trimming + ASCII lowercasing.
std::string normalize_region(std::string_view region);

}  // namespace otriage
