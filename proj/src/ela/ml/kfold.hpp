#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ela::ml {

// k disjoint folds of 0..l-1 whose sizes differ by at most one. With strata,
// each stratum is shuffled and dealt round-robin so every fold gets its share.
std::vector<std::vector<int>> kfold(int l, int k, std::uint64_t seed, std::span<const int> strata = {});

}  // namespace ela::ml
