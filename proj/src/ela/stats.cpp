#include "ela/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ela::stats {

double mean(std::span<const double> v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

FeatureValue sd(std::span<const double> v) {
    if (v.size() < 2) return std::nullopt;
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

double quantile(std::vector<double> v, double q) {
    if (v.empty()) throw InvalidArgument("quantile of empty vector");
    std::sort(v.begin(), v.end());
    const double h = (static_cast<double>(v.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

FeatureValue pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2) return std::nullopt;
    const double ma = mean(a), mb = mean(b);
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa <= 0 || sbb <= 0) return std::nullopt;
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

namespace {

// central moments m2, m3, m4 (divisor n)
struct Moments {
    double m2 = 0, m3 = 0, m4 = 0;
};

Moments central_moments(std::span<const double> v) {
    const double m = mean(v);
    Moments out;
    for (double x : v) {
        const double d = x - m;
        out.m2 += d * d;
        out.m3 += d * d * d;
        out.m4 += d * d * d * d;
    }
    const auto n = static_cast<double>(v.size());
    out.m2 /= n;
    out.m3 /= n;
    out.m4 /= n;
    return out;
}

}  // namespace

FeatureValue skewness(std::span<const double> v) {
    const auto n = static_cast<double>(v.size());
    if (v.size() < 3) return std::nullopt;
    const auto mo = central_moments(v);
    if (!(mo.m2 > 0)) return std::nullopt;
    const double g1 = mo.m3 / std::pow(mo.m2, 1.5);
    return g1 * std::sqrt(n * (n - 1)) / (n - 2);
}

FeatureValue kurtosis(std::span<const double> v) {
    const auto n = static_cast<double>(v.size());
    if (v.size() < 4) return std::nullopt;
    const auto mo = central_moments(v);
    if (!(mo.m2 > 0)) return std::nullopt;
    const double g2 = mo.m4 / (mo.m2 * mo.m2) - 3.0;
    return ((n + 1) * g2 + 6) * (n - 1) / ((n - 2) * (n - 3));
}

FeatureValue ratio(double a, double b) {
    if (b == 0) return std::nullopt;
    const double r = a / b;
    if (!std::isfinite(r)) return std::nullopt;
    return r;
}

FeatureValue ratio(FeatureValue a, FeatureValue b) {
    if (!a || !b) return std::nullopt;
    return ratio(*a, *b);
}

std::vector<int> stable_order(std::span<const double> v) {
    std::vector<int> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
    return idx;
}

}  // namespace ela::stats
