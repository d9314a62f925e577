#pragma once

#include "ela/common.hpp"

#include <span>
#include <vector>

namespace ela {

// Axis-aligned partition of a box into blocks^dim cells. Coordinate 0 varies
// fastest in the cell index. Points on an upper face belong to the last block;
// points outside the box are clamped to the nearest cell.
class CellGrid {
public:
    // cell-mapping grid: blocks >= 3 and blocks^dim <= limit
    static CellGrid make(int blocks, const Bounds& bounds, long long limit);
    // generic partition (blocks >= 1) as used by the linear-model group
    static CellGrid partition(int blocks, const Bounds& bounds);

    int blocks() const { return blocks_; }
    int dim() const { return bounds_.dim(); }
    long long cell_count() const { return cells_; }
    const Bounds& bounds() const { return bounds_; }

    long long cell_of(std::span<const double> x) const;
    std::vector<int> coords(long long cell) const;
    long long index(std::span<const int> coords) const;
    Vector center(long long cell) const;
    // axis neighbours (von Neumann), ordered by axis then -1/+1
    std::vector<long long> neighbors(long long cell) const;
    // neighbour of `cell` one step along `axis` in direction `step`, or -1 at the border
    long long step(long long cell, int axis, int step) const;

private:
    CellGrid(int blocks, Bounds bounds, long long cells) : blocks_(blocks), bounds_(std::move(bounds)), cells_(cells) {}
    int blocks_;
    Bounds bounds_;
    long long cells_;
};

// blocks^dim, or -1 if it exceeds `limit`
long long grid_size(int blocks, int dim, long long limit);

}  // namespace ela
