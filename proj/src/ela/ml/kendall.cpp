#include "ela/ml/kendall.hpp"

#include <algorithm>
#include <cmath>

namespace ela::ml {

FeatureValue kendall_tau(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2) throw InvalidArgument("kendall_tau: need equal lengths >= 2");
    const std::size_t n = a.size();
    long long concordant = 0, discordant = 0, ties_a = 0, ties_b = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double da = a[j] - a[i];
            const double db = b[j] - b[i];
            if (da == 0 && db == 0) continue;
            if (da == 0) {
                ++ties_a;
            } else if (db == 0) {
                ++ties_b;
            } else if ((da > 0) == (db > 0)) {
                ++concordant;
            } else {
                ++discordant;
            }
        }
    }
    const double na = static_cast<double>(concordant + discordant + ties_b);  // pairs untied in a
    const double nb = static_cast<double>(concordant + discordant + ties_a);  // pairs untied in b
    if (na == 0 || nb == 0) return std::nullopt;
    return std::clamp(static_cast<double>(concordant - discordant) / std::sqrt(na * nb), -1.0, 1.0);
}

}  // namespace ela::ml
