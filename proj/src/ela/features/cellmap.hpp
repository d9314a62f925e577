#pragma once

#include "ela/features/cell_grid.hpp"
#include "ela/features/config.hpp"
#include "ela/features/feature_vector.hpp"

#include <array>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ela::features {

enum class Scheme { min, mean, near };
inline constexpr std::array kAllSchemes{Scheme::min, Scheme::mean, Scheme::near};
const char* scheme_name(Scheme s);

struct CellSummary {
    long long cell = 0;
    Vector center;
    std::vector<int> members;  // sample row indices, ascending
    int best = -1;             // row of the smallest objective (lowest index on ties)
    int worst = -1;            // row of the largest objective (lowest index on ties)
    double best_value = 0;
    double worst_value = 0;
    double mean_value = 0;
    double near_value = 0;     // objective of the row closest to the centre
    Vector best_point;
    Vector worst_point;

    double representative(Scheme s) const;
};

// Non-empty cells of a grid, ascending by cell index.
struct CellMap {
    CellGrid grid;
    std::vector<CellSummary> cells;
    std::unordered_map<long long, int> lookup;  // cell index -> position in cells
    double global_best = 0;
    double global_worst = 0;

    // position of a cell in `cells`, or -1 when it is empty
    int find(long long cell) const;
};

// Assigns every row to its cell. Fails for blocks < 3 or blocks^dim > limit.
CellMap build_grid(const RowMatrix& X, const Vector& y, int blocks, const Bounds& bounds,
                   long long limit = kDefaultCellLimit);

// Markov chain on the non-empty cells: each cell moves uniformly to its strictly
// better non-empty axis neighbours; cells without one are absorbing (attractors).
struct AbsorbingChain {
    std::vector<long long> cells;
    std::vector<double> values;
    std::vector<std::vector<std::pair<int, double>>> transitions;  // state -> (state, probability)
    std::vector<int> attractors;                                   // absorbing states, ascending
    // absorption[s] lists (attractor position in `attractors`, probability), ascending
    std::vector<std::vector<std::pair<int, double>>> absorption;
};

AbsorbingChain absorbing_chain(const CellGrid& grid, const std::vector<long long>& cells,
                               const std::vector<double>& values);
AbsorbingChain absorbing_chain(const CellMap& map, Scheme scheme);

// dist_ctr2best, dist_ctr2worst, angle, y_ratio_best2worst: mean and sd (10 entries)
FeatureVector cm_angle(const CellMap& map, const FeatureConfig& config = {});
// hard/soft convexity frequencies over collinear cell triples (6 entries)
FeatureVector cm_conv(const CellMap& map, const FeatureConfig& config = {});
// gradient homogeneity per cell: mean and sd (4 entries)
FeatureVector cm_grad(const CellMap& map, const RowMatrix& X, const Vector& y, const FeatureConfig& config = {});
// absorbing-chain statistics for the min, mean and near schemes (3 x 25 entries)
FeatureVector gcm(const CellMap& map, const FeatureConfig& config = {});

}  // namespace ela::features
