#pragma once

#include "ela/common.hpp"
#include "ela/sampling.hpp"

#include <span>
#include <vector>

namespace ela {

// Rank-based weights: raw_i = ln l - ln r_i, weights = raw / sum(raw).
struct RankWeights {
    std::vector<int> ranks;  // 1 = best (smallest) objective
    Vector raw_weights;
    Vector weights;
};

struct ReductionTransform {
    Vector mean;                 // length n, mean of the original points
    RankWeights weights;
    Matrix axes;                 // n x m, orthonormal columns
    Vector explained_variance;   // length m, non-increasing
};

// A design mapped to m dimensions. Objectives are carried over unchanged.
struct ReducedSample {
    RowMatrix points;  // l x m
    Vector objectives;
    ReductionTransform transform;

    int size() const { return static_cast<int>(points.rows()); }
    int dim() const { return static_cast<int>(points.cols()); }
};

// Minimisation ranks; equal values keep their index order.
std::vector<int> rank_objectives(std::span<const double> y);

RankWeights compute_weights(int l, std::span<const int> ranks);

// Weighted PCA:
//   1. centre the points on their mean,
//   2. scale row i by its rank weight w_i,
//   3. eigendecompose the sample covariance (divisor l-1) of the scaled rows,
//   4. keep the top-m eigenvectors, each with its largest-magnitude entry positive,
//   5. project the scaled rows onto them.
// The covariance is formed in R^{n x n} when n <= l and through the l x l Gram
// matrix otherwise. Requires 1 <= m < n and l >= 2.
ReducedSample reduce(const DesignSample& design, int m);
ReducedSample reduce(const RowMatrix& points, const Vector& objectives, int m);

// Per-column min-max map onto [0, 1]; zero-range columns become 0.5.
RowMatrix normalize_unit_box(const RowMatrix& points);

}  // namespace ela
