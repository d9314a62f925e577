#pragma once

#include "ela/common.hpp"

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

namespace ela {

struct FeatureEntry {
    std::string name;
    FeatureValue value;
};

// Ordered, group-qualified feature values ("ela_meta.lin_simple.adj_r2").
struct FeatureVector {
    std::vector<FeatureEntry> entries;
    int cost_evals = 0;        // extra objective evaluations; always 0 here
    double cost_seconds = 0;   // wall time of the feature computation

    std::size_t size() const { return entries.size(); }
    // throws InvalidArgument when absent
    FeatureValue get(std::string_view name) const;
    bool contains(std::string_view name) const;
    void append(const FeatureVector& other);
    // prefix every name, e.g. "d_"
    void add_prefix(std::string_view prefix);
};

// Collects one group's entries. finish() appends <group>.costs_fun_evals and
// <group>.costs_runtime, the latter measured from construction on a monotonic clock.
class GroupBuilder {
public:
    explicit GroupBuilder(std::string group, bool record_runtime = true);

    void add(std::string_view name, FeatureValue value);
    void add_undefined(std::string_view name) { add(name, std::nullopt); }
    // per-subgroup cost pair, e.g. gcm.min.costs_runtime
    void add_costs(std::string_view subgroup, double seconds);
    double elapsed() const;
    FeatureVector finish();

private:
    std::string group_;
    bool record_runtime_;
    std::chrono::steady_clock::time_point start_;
    FeatureVector out_;
};

}  // namespace ela
