#include "otriage/features.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "otriage/errors.hpp"

namespace otriage {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = kFnvOffset;
    for (unsigned char c : data) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

void check_name(const std::string& name, const char* what) {
    if (name.empty() || name.find('\t') != std::string::npos ||
        name.find('\n') != std::string::npos)
        throw ValidationError(std::string("invalid ") + what + " in schema: " + name);
}

}  // namespace

FeatureSchema::FeatureSchema(std::vector<std::string> services,
                             std::vector<std::pair<std::string, std::string>> links)
    : services_(std::move(services)), links_(std::move(links)) {
    for (size_t i = 0; i < services_.size(); ++i) {
        check_name(services_[i], "service");
        if (!service_pos_.emplace(services_[i], i).second)
            throw ValidationError("duplicate service in schema: " + services_[i]);
    }
    for (size_t i = 0; i < links_.size(); ++i) {
        check_name(links_[i].first, "link endpoint");
        check_name(links_[i].second, "link endpoint");
        if (links_[i].first > links_[i].second)
            throw ValidationError("schema link not in canonical order: " + links_[i].first +
                                  "," + links_[i].second);
        if (!link_pos_.emplace(links_[i], i).second)
            throw ValidationError("duplicate link in schema: " + links_[i].first + "," +
                                  links_[i].second);
    }
}

std::string FeatureSchema::column_name(size_t column) const {
    if (column < services_.size()) return "count:" + services_[column];
    size_t l = column - services_.size();
    if (l < links_.size()) return "link:" + links_[l].first + "|" + links_[l].second;
    throw ValidationError("column out of range: " + std::to_string(column));
}

std::string FeatureSchema::serialize() const {
    std::string out = "#otriage-schema v1\n";
    for (const auto& s : services_) out += "service\t" + s + "\n";
    for (const auto& [a, b] : links_) out += "link\t" + a + "\t" + b + "\n";
    return out;
}

void FeatureSchema::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open for writing: " + path);
    out << serialize();
    if (!out) throw ValidationError("write failed: " + path);
}

FeatureSchema FeatureSchema::parse(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "#otriage-schema v1")
        throw ParseError(origin + ": bad header");
    std::vector<std::string> services;
    std::vector<std::pair<std::string, std::string>> links;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        size_t t1 = line.find('\t');
        if (t1 == std::string::npos)
            throw ParseError(origin + ":" + std::to_string(lineno) + ": bad record");
        std::string tag = line.substr(0, t1);
        std::string rest = line.substr(t1 + 1);
        if (tag == "service") {
            services.push_back(rest);
        } else if (tag == "link") {
            size_t t2 = rest.find('\t');
            if (t2 == std::string::npos)
                throw ParseError(origin + ":" + std::to_string(lineno) + ": bad link record");
            links.emplace_back(rest.substr(0, t2), rest.substr(t2 + 1));
        } else {
            throw ParseError(origin + ":" + std::to_string(lineno) + ": unknown tag " + tag);
        }
    }
    return FeatureSchema(std::move(services), std::move(links));
}

FeatureSchema FeatureSchema::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

std::uint64_t FeatureSchema::hash() const { return fnv1a(serialize()); }

FeatureSchema build_schema(const ServiceCatalog& catalog,
                           std::span<const ServiceGraph> training_graphs) {
    std::vector<std::string> services;
    services.reserve(catalog.size());
    for (const auto& entry : catalog.entries()) services.push_back(entry.first);

    std::set<std::string> known(services.begin(), services.end());
    std::vector<std::pair<std::string, std::string>> links;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& gs : training_graphs) {
        for (const auto& s : gs.services)
            if (!known.count(s))
                throw ValidationError("training graph references service not in catalog: " + s);
        for (const auto& e : gs.edges)
            if (seen.insert(e).second) links.push_back(e);
    }
    return FeatureSchema(std::move(services), std::move(links));
}

std::vector<double> featurize(const ServiceGraph& gs, const FeatureSchema& schema,
                              std::vector<std::string>* warnings) {
    std::vector<double> x(schema.dim(), 0.0);
    for (const auto& [svc, count] : gs.incident_count) {
        auto it = schema.service_pos_.find(svc);
        if (it == schema.service_pos_.end()) {
            if (warnings) warnings->push_back("unknown service: " + svc);
            continue;
        }
        x[it->second] = static_cast<double>(count);
    }
    for (const auto& e : gs.edges) {
        auto it = schema.link_pos_.find(e);
        if (it != schema.link_pos_.end()) x[schema.services_.size() + it->second] = 1.0;
    }
    return x;
}

}  // namespace otriage
