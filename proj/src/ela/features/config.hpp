#pragma once

#include "ela/common.hpp"
#include "ela/dimred.hpp"
#include "ela/sampling.hpp"

#include <cstdint>
#include <vector>

namespace ela {

inline constexpr long long kDefaultCellLimit = 10'000'000;

// Parameters shared by all feature groups.
struct FeatureConfig {
    std::uint64_t seed = 1;
    std::vector<double> level_quantiles{0.10, 0.25, 0.50};
    std::vector<double> disp_quantiles{0.02, 0.05, 0.10, 0.25};
    int level_folds = 10;
    int ic_grid_points = 1000;
    int blocks = 3;           // cell-mapping blocks per dimension (>= 3)
    int limo_blocks = 0;      // 0 = 3 when 3^dim <= 1e5, else 1
    long long cell_limit = kDefaultCellLimit;
    int conv_samples = 1000;
    bool record_runtime = true;  // false writes 0 into costs_runtime entries
    Deadline deadline;
};

// The (points, objectives) pair a feature group consumes: an original design
// or a reduced sample (whose feature names get the d_ prefix).
struct FeatureInput {
    RowMatrix points;
    Vector objectives;
    Bounds bounds;
    bool reduced = false;

    int size() const { return static_cast<int>(points.rows()); }
    int dim() const { return static_cast<int>(points.cols()); }

    static FeatureInput from(const DesignSample& design);
    // bounds of a reduced sample are its per-column min/max
    static FeatureInput from(const ReducedSample& reduced);
};

}  // namespace ela
