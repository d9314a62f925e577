#pragma once

#include "ela/features/config.hpp"
#include "ela/features/feature_vector.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace ela {

// the 13 group names accepted by compute_group
const std::vector<std::string>& group_names();
bool is_cellmap_group(std::string_view group);
// entry count per group including the two cost entries
int group_entry_count(std::string_view group);

// Computes one group on an original design or a reduced sample. Reduced inputs
// get the d_ prefix; cell-mapping groups on reduced inputs run on the sample
// normalised to [0, 1]^m. cost_seconds covers the feature computation only.
FeatureVector compute_group(std::string_view group, const FeatureInput& input, const FeatureConfig& config = {});

}  // namespace ela
