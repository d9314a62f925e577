#pragma once

#include "ela/common.hpp"
#include "ela/testbed.hpp"

namespace ela {

// The initial sample: l points (rows) with their objective values.
struct DesignSample {
    RowMatrix points;
    Vector objectives;
    Bounds bounds;
    std::uint64_t seed = 0;

    int size() const { return static_cast<int>(points.rows()); }
    int dim() const { return static_cast<int>(points.cols()); }
};

// Latin hypercube design: in every coordinate each of the l equal-width strata
// holds exactly one point. Strata are assigned by an independent seeded
// permutation per coordinate; the position inside a stratum is uniform.
RowMatrix lhs(int l, const Bounds& bounds, std::uint64_t seed);

inline int default_sample_size(int dim) { return 50 * dim; }

// l == 0 selects the default size 50 * dim. Evaluates the objective exactly l times.
DesignSample build_design(const Instance& instance, int l, std::uint64_t seed);

}  // namespace ela
