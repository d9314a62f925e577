#include "ela/sampling.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace ela {

RowMatrix lhs(int l, const Bounds& bounds, std::uint64_t seed) {
    bounds.validate();
    if (l < 1) throw InvalidArgument("lhs: sample size must be >= 1");
    const int n = bounds.dim();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    RowMatrix x(l, n);
    std::vector<int> perm(l);
    for (int j = 0; j < n; ++j) {
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        const double width = bounds.upper[j] - bounds.lower[j];
        for (int i = 0; i < l; ++i) {
            const double u = (perm[i] + unit(rng)) / l;
            x(i, j) = std::min(bounds.lower[j] + u * width, bounds.upper[j]);
        }
    }
    return x;
}

DesignSample build_design(const Instance& instance, int l, std::uint64_t seed) {
    if (l == 0) l = default_sample_size(instance.dimension());
    if (l < 2) throw InvalidArgument("design size must be >= 2");
    DesignSample d;
    d.bounds = instance.bounds();
    d.points = lhs(l, d.bounds, seed);
    d.seed = seed;
    d.objectives.resize(l);
    for (int i = 0; i < l; ++i)
        d.objectives[i] = instance.evaluate(std::span<const double>(d.points.row(i).data(), d.points.cols()));
    return d;
}

}  // namespace ela
