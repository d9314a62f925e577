#include "ela/features/feature_vector.hpp"

#include <algorithm>
#include <cmath>

namespace ela {

FeatureValue FeatureVector::get(std::string_view name) const {
    for (const auto& e : entries)
        if (e.name == name) return e.value;
    throw InvalidArgument("feature '" + std::string(name) + "' not present");
}

bool FeatureVector::contains(std::string_view name) const {
    return std::any_of(entries.begin(), entries.end(), [&](const auto& e) { return e.name == name; });
}

void FeatureVector::append(const FeatureVector& other) {
    entries.insert(entries.end(), other.entries.begin(), other.entries.end());
    cost_evals += other.cost_evals;
    cost_seconds += other.cost_seconds;
}

void FeatureVector::add_prefix(std::string_view prefix) {
    for (auto& e : entries) e.name.insert(0, prefix);
}

GroupBuilder::GroupBuilder(std::string group, bool record_runtime)
    : group_(std::move(group)), record_runtime_(record_runtime), start_(std::chrono::steady_clock::now()) {}

void GroupBuilder::add(std::string_view name, FeatureValue value) {
    if (value && !std::isfinite(*value)) value.reset();
    out_.entries.push_back({group_ + "." + std::string(name), value});
}

void GroupBuilder::add_costs(std::string_view subgroup, double seconds) {
    const std::string stem = subgroup.empty() ? std::string() : std::string(subgroup) + ".";
    add(stem + "costs_fun_evals", 0.0);
    add(stem + "costs_runtime", record_runtime_ ? seconds : 0.0);
}

double GroupBuilder::elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
}

FeatureVector GroupBuilder::finish() {
    const double seconds = elapsed();
    // groups that already emitted per-subgroup costs skip the group-level pair
    const bool has_costs = std::any_of(out_.entries.begin(), out_.entries.end(), [](const auto& e) {
        return e.name.ends_with(".costs_runtime");
    });
    if (!has_costs) add_costs("", seconds);
    out_.cost_seconds = seconds;
    return std::move(out_);
}

}  // namespace ela
