#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "otriage/graphs.hpp"
#include "otriage/records.hpp"

namespace otriage {

// Fixed feature layout shared by training and prediction: one count column
// per catalog service, then one binary column per service link seen while
// training. Column order never depends on input order at predict time.
class FeatureSchema {
public:
    FeatureSchema() = default;
    FeatureSchema(std::vector<std::string> services,
                  std::vector<std::pair<std::string, std::string>> links);

    size_t dim() const { return services_.size() + links_.size(); }
    size_t service_count() const { return services_.size(); }
    size_t link_count() const { return links_.size(); }
    const std::vector<std::string>& services() const { return services_; }
    const std::vector<std::pair<std::string, std::string>>& links() const { return links_; }

    // Human-readable column name: "count:<service>" or "link:<a>|<b>".
    std::string column_name(size_t column) const;

    std::string serialize() const;
    void save(const std::string& path) const;
    static FeatureSchema load(const std::string& path);
    static FeatureSchema parse(const std::string& text, const std::string& origin);

    // FNV-1a over the serialized form; stored in model files so a model is
    // never applied to vectors from a different layout.
    std::uint64_t hash() const;

    bool operator==(const FeatureSchema& other) const {
        return services_ == other.services_ && links_ == other.links_;
    }

    friend std::vector<double> featurize(const ServiceGraph&, const FeatureSchema&,
                                         std::vector<std::string>*);

private:
    std::vector<std::string> services_;
    std::vector<std::pair<std::string, std::string>> links_;
    std::map<std::string, size_t> service_pos_;
    std::map<std::pair<std::string, std::string>, size_t> link_pos_;
};

// Services come from the catalog in catalog order; links are collected from
// the training service graphs in first-seen order. A training graph naming a
// service outside the catalog is an error.
FeatureSchema build_schema(const ServiceCatalog& catalog,
                           std::span<const ServiceGraph> training_graphs);

// Counts for schema services, then 0/1 link indicators. Services unknown to
// the schema contribute nothing; each distinct one is reported through
// `warnings` when given. Links unseen at training time are silently ignored.
std::vector<double> featurize(const ServiceGraph& gs, const FeatureSchema& schema,
                              std::vector<std::string>* warnings = nullptr);

}  // namespace otriage
