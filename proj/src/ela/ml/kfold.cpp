#include "ela/ml/kfold.hpp"

#include "ela/common.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

namespace ela::ml {

std::vector<std::vector<int>> kfold(int l, int k, std::uint64_t seed, std::span<const int> strata) {
    if (k < 1) throw InvalidArgument("kfold: k must be >= 1");
    if (k > l) throw InvalidArgument("kfold: k=" + std::to_string(k) + " exceeds l=" + std::to_string(l));
    if (!strata.empty() && static_cast<int>(strata.size()) != l)
        throw InvalidArgument("kfold: strata length != l");

    std::mt19937_64 rng(seed);
    std::vector<int> order;
    order.reserve(l);
    if (strata.empty()) {
        order.resize(l);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
    } else {
        std::map<int, std::vector<int>> groups;
        for (int i = 0; i < l; ++i) groups[strata[i]].push_back(i);
        for (auto& [label, members] : groups) {
            std::shuffle(members.begin(), members.end(), rng);
            order.insert(order.end(), members.begin(), members.end());
        }
    }
    std::vector<std::vector<int>> folds(k);
    for (int j = 0; j < l; ++j) folds[j % k].push_back(order[j]);
    for (auto& f : folds) std::sort(f.begin(), f.end());
    return folds;
}

}  // namespace ela::ml
