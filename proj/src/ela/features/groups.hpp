#pragma once

#include "ela/features/cell_grid.hpp"
#include "ela/features/config.hpp"
#include "ela/features/feature_vector.hpp"

#include <cstdint>
#include <vector>

// The nine non-cell-mapping feature groups. Each returns its entries followed
// by <group>.costs_fun_evals and <group>.costs_runtime.
namespace ela::features {

// skewness, kurtosis, number_of_peaks (5 entries)
FeatureVector ela_distr(const Vector& y, const FeatureConfig& config = {});

// mmce of LDA/QDA/MDA for y <= quantile_q(y) and their pairwise ratios (20 entries)
FeatureVector ela_level(const RowMatrix& X, const Vector& y, const FeatureConfig& config = {});

// linear / quadratic regression fits with and without interactions (11 entries)
FeatureVector ela_meta(const RowMatrix& X, const Vector& y, const FeatureConfig& config = {});

// nearest-better clustering statistics (7 entries)
FeatureVector nbc(const RowMatrix& X, const Vector& y, const FeatureConfig& config = {});

// dispersion of the best-q subsets relative to the whole sample (18 entries)
FeatureVector disp(const RowMatrix& X, const Vector& y, const FeatureConfig& config = {});

// information content along a greedy nearest-neighbour tour (7 entries)
FeatureVector ic(const RowMatrix& X, const Vector& y, const FeatureConfig& config = {});

// sizes, bounds, objective range, default grid occupancy (15 entries)
FeatureVector basic(const FeatureInput& input, const FeatureConfig& config = {});

// per-cell linear model coefficient statistics (14 entries)
FeatureVector limo(const RowMatrix& X, const Vector& y, const CellGrid& grid, const FeatureConfig& config = {});
int default_limo_blocks(int dim);

// explained variance of covariance/correlation of X and [X|y] (10 entries)
FeatureVector pca_features(const RowMatrix& X, const Vector& y, const FeatureConfig& config = {});

// --- building blocks exposed for verification ---

struct NearestBetter {
    std::vector<double> nn;      // distance to nearest other point
    std::vector<double> nb;      // distance to nearest strictly better point (farthest point for the best)
    std::vector<int> nb_index;   // -1 where no better point exists
    bool defined = true;         // false when every objective value is equal
};
NearestBetter nearest_better(const RowMatrix& X, const Vector& y, const Deadline& deadline = {});

// greedy nearest-unvisited tour from a seeded random start
std::vector<int> ic_tour(const RowMatrix& X, std::uint64_t seed, const Deadline& deadline = {});
// dy/|dx| along the tour; zero-length steps skipped
std::vector<double> ic_slopes(const RowMatrix& X, const Vector& y, const std::vector<int>& tour);
std::vector<int> ic_symbols(const std::vector<double>& slopes, double eps);
double ic_entropy(const std::vector<int>& symbols);
double ic_partial_information(const std::vector<int>& symbols);

}  // namespace ela::features
