#include "ela/features/cell_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ela {

long long grid_size(int blocks, int dim, long long limit) {
    long long cells = 1;
    for (int j = 0; j < dim; ++j) {
        if (cells > limit / blocks) return -1;
        cells *= blocks;
    }
    return cells <= limit ? cells : -1;
}

CellGrid CellGrid::make(int blocks, const Bounds& bounds, long long limit) {
    bounds.validate();
    if (blocks < 3) throw InvalidArgument("cell grid: blocks per dimension must be >= 3, got " + std::to_string(blocks));
    const long long cells = grid_size(blocks, bounds.dim(), limit);
    if (cells < 0)
        throw InvalidArgument("cell grid: " + std::to_string(blocks) + "^" + std::to_string(bounds.dim()) +
                              " cells exceeds the limit of " + std::to_string(limit));
    return CellGrid(blocks, bounds, cells);
}

CellGrid CellGrid::partition(int blocks, const Bounds& bounds) {
    bounds.validate();
    if (blocks < 1) throw InvalidArgument("partition: blocks must be >= 1");
    const long long cells = grid_size(blocks, bounds.dim(), std::numeric_limits<long long>::max() / 4);
    if (cells < 0) throw InvalidArgument("partition: cell count overflows");
    return CellGrid(blocks, bounds, cells);
}

long long CellGrid::cell_of(std::span<const double> x) const {
    long long idx = 0, stride = 1;
    for (int j = 0; j < dim(); ++j) {
        const double u = (x[j] - bounds_.lower[j]) / (bounds_.upper[j] - bounds_.lower[j]);
        const int c = std::clamp(static_cast<int>(std::floor(u * blocks_)), 0, blocks_ - 1);
        idx += c * stride;
        stride *= blocks_;
    }
    return idx;
}

std::vector<int> CellGrid::coords(long long cell) const {
    std::vector<int> c(dim());
    for (int j = 0; j < dim(); ++j) {
        c[j] = static_cast<int>(cell % blocks_);
        cell /= blocks_;
    }
    return c;
}

long long CellGrid::index(std::span<const int> coords) const {
    long long idx = 0, stride = 1;
    for (int j = 0; j < dim(); ++j) {
        idx += coords[j] * stride;
        stride *= blocks_;
    }
    return idx;
}

Vector CellGrid::center(long long cell) const {
    const auto c = coords(cell);
    Vector out(dim());
    for (int j = 0; j < dim(); ++j)
        out[j] = bounds_.lower[j] + (c[j] + 0.5) * (bounds_.upper[j] - bounds_.lower[j]) / blocks_;
    return out;
}

long long CellGrid::step(long long cell, int axis, int step) const {
    long long stride = 1;
    for (int j = 0; j < axis; ++j) stride *= blocks_;
    const auto c = static_cast<int>((cell / stride) % blocks_) + step;
    if (c < 0 || c >= blocks_) return -1;
    return cell + step * stride;
}

std::vector<long long> CellGrid::neighbors(long long cell) const {
    std::vector<long long> out;
    out.reserve(2 * dim());
    for (int j = 0; j < dim(); ++j)
        for (int s : {-1, 1})
            if (const auto nb = step(cell, j, s); nb >= 0) out.push_back(nb);
    return out;
}

}  // namespace ela
