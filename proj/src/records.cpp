#include "otriage/records.hpp"

#include <cctype>

#include "otriage/errors.hpp"

namespace otriage {

const char* to_string(ServiceCategory c) {
    switch (c) {
        case ServiceCategory::Infrastructure: return "Infrastructure";
        case ServiceCategory::Networking: return "Networking";
        case ServiceCategory::Storage: return "Storage";
        case ServiceCategory::Compute: return "Compute";
        case ServiceCategory::Application: return "Application";
    }
    return "?";
}

std::optional<ServiceCategory> category_from_string(std::string_view s) {
    for (ServiceCategory c : kAllCategories) {
        if (s == to_string(c)) return c;
    }
    return std::nullopt;
}

int category_level(ServiceCategory c) {
    switch (c) {
        case ServiceCategory::Infrastructure: return 0;
        case ServiceCategory::Networking: return 1;
        case ServiceCategory::Storage: return 2;
        case ServiceCategory::Compute: return 3;
        case ServiceCategory::Application: return 4;
    }
    return -1;
}

void ServiceCatalog::add(std::string service, ServiceCategory category) {
    if (service.empty()) throw ValidationError("catalog: empty service name");
    if (service.find('\t') != std::string::npos || service.find('\n') != std::string::npos)
        throw ValidationError("catalog: service name '" + service + "' contains tab or newline");
    auto [it, inserted] = index_.emplace(service, category);
    (void)it;
    if (!inserted)
        throw ValidationError("catalog: service '" + service + "' listed more than once");
    entries_.emplace_back(std::move(service), category);
}

std::optional<ServiceCategory> ServiceCatalog::category_of(const std::string& service) const {
    auto it = index_.find(service);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::string normalize_region(std::string_view region) {
    std::size_t b = 0, e = region.size();
    while (b < e && std::isspace(static_cast<unsigned char>(region[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(region[e - 1]))) --e;
    std::string out;
    out.reserve(e - b);
    for (std::size_t i = b; i < e; ++i) {
        char c = region[i];
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        out.push_back(c);
    }
    return out;
}

}  // namespace otriage
