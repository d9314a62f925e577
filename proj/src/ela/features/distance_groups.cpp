// nbc, disp and ic: groups built on Euclidean distances between sample points.

#include "ela/features/groups.hpp"
#include "ela/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

namespace ela::features {

namespace {

inline double distance(const RowMatrix& X, Eigen::Index i, Eigen::Index j) {
    return (X.row(i) - X.row(j)).norm();
}

std::string percent_suffix(double q) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02d", static_cast<int>(std::lround(q * 100)));
    return buf;
}

struct MeanMedian {
    double mean;
    double median;
};

MeanMedian pairwise_summary(const RowMatrix& X, std::span<const int> idx, const Deadline& deadline) {
    const auto k = idx.size();
    std::vector<double> d;
    d.reserve(k * (k - 1) / 2);
    for (std::size_t a = 0; a < k; ++a) {
        if ((a & 63) == 0) deadline.check("disp");
        for (std::size_t b = a + 1; b < k; ++b) d.push_back(distance(X, idx[a], idx[b]));
    }
    double sum = 0;
    for (double v : d) sum += v;
    const double mean = sum / static_cast<double>(d.size());
    const auto mid = d.size() / 2;
    std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid), d.end());
    double median = d[mid];
    if (d.size() % 2 == 0) median = 0.5 * (median + *std::max_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid)));
    return {mean, median};
}

}  // namespace

NearestBetter nearest_better(const RowMatrix& X, const Vector& y, const Deadline& deadline) {
    const auto l = X.rows();
    constexpr double inf = std::numeric_limits<double>::infinity();
    NearestBetter r;
    r.nn.assign(l, inf);
    r.nb.assign(l, inf);
    r.nb_index.assign(l, -1);
    std::vector<double> farthest(l, 0.0);
    for (Eigen::Index i = 0; i < l; ++i) {
        if ((i & 63) == 0) deadline.check("nearest-better distances");
        for (Eigen::Index j = i + 1; j < l; ++j) {
            const double d = distance(X, i, j);
            r.nn[i] = std::min(r.nn[i], d);
            r.nn[j] = std::min(r.nn[j], d);
            farthest[i] = std::max(farthest[i], d);
            farthest[j] = std::max(farthest[j], d);
            // strict comparisons keep the lowest index among equidistant candidates
            if (y[j] < y[i] && d < r.nb[i]) {
                r.nb[i] = d;
                r.nb_index[i] = static_cast<int>(j);
            }
            if (y[i] < y[j] && d < r.nb[j]) {
                r.nb[j] = d;
                r.nb_index[j] = static_cast<int>(i);
            }
        }
    }
    r.defined = y.maxCoeff() > y.minCoeff();
    for (Eigen::Index i = 0; i < l; ++i)
        if (r.nb_index[i] < 0) r.nb[i] = farthest[i];
    return r;
}

FeatureVector nbc(const RowMatrix& X, const Vector& y, const FeatureConfig& config) {
    if (X.rows() < 5) throw InvalidArgument("nbc: need at least 5 points");
    GroupBuilder g("nbc", config.record_runtime);
    const auto r = nearest_better(X, y, config.deadline);
    constexpr std::array names{"nn_nb.sd_ratio", "nn_nb.mean_ratio", "nn_nb.cor", "dist_ratio.coeff_var",
                               "nb_fitness.cor"};
    if (!r.defined) {
        for (const char* n : names) g.add_undefined(n);
        return g.finish();
    }
    std::vector<double> quotient;
    for (std::size_t i = 0; i < r.nn.size(); ++i)
        if (r.nb[i] > 0) quotient.push_back(r.nn[i] / r.nb[i]);
    std::vector<double> indegree(r.nn.size(), 0.0);
    for (int t : r.nb_index)
        if (t >= 0) indegree[t] += 1;
    const std::vector<double> yv(y.data(), y.data() + y.size());

    g.add(names[0], stats::ratio(stats::sd(r.nn), stats::sd(r.nb)));
    g.add(names[1], stats::ratio(stats::mean(r.nn), stats::mean(r.nb)));
    g.add(names[2], stats::pearson(r.nn, r.nb));
    g.add(names[3], quotient.empty() ? FeatureValue{} : stats::ratio(stats::sd(quotient), stats::mean(quotient)));
    g.add(names[4], stats::pearson(yv, indegree));
    return g.finish();
}

FeatureVector disp(const RowMatrix& X, const Vector& y, const FeatureConfig& config) {
    const auto l = static_cast<int>(X.rows());
    if (l < 2) throw InvalidArgument("disp: need at least 2 points");
    GroupBuilder g("disp", config.record_runtime);

    std::vector<int> all(l);
    for (int i = 0; i < l; ++i) all[i] = i;
    const auto full = pairwise_summary(X, all, config.deadline);
    const auto order = stats::stable_order(stats::as_span(y));

    std::vector<FeatureValue> rmean, rmed, dmean, dmed;
    for (double q : config.disp_quantiles) {
        const auto k = static_cast<std::size_t>(std::ceil(q * l - 1e-9));
        if (k < 2) {
            rmean.emplace_back();
            rmed.emplace_back();
            dmean.emplace_back();
            dmed.emplace_back();
            continue;
        }
        const auto sub = pairwise_summary(X, std::span<const int>(order.data(), k), config.deadline);
        rmean.push_back(stats::ratio(sub.mean, full.mean));
        rmed.push_back(stats::ratio(sub.median, full.median));
        dmean.push_back(sub.mean - full.mean);
        dmed.push_back(sub.median - full.median);
    }
    const auto emit = [&](const char* stem, const std::vector<FeatureValue>& v) {
        for (std::size_t i = 0; i < v.size(); ++i) g.add(stem + percent_suffix(config.disp_quantiles[i]), v[i]);
    };
    emit("ratio_mean_", rmean);
    emit("ratio_median_", rmed);
    emit("diff_mean_", dmean);
    emit("diff_median_", dmed);
    return g.finish();
}

std::vector<int> ic_tour(const RowMatrix& X, std::uint64_t seed, const Deadline& deadline) {
    const auto l = static_cast<int>(X.rows());
    std::mt19937_64 rng(seed);
    int current = std::uniform_int_distribution<int>(0, l - 1)(rng);
    std::vector<char> visited(l, 0);
    std::vector<int> tour;
    tour.reserve(l);
    for (int step = 0; step < l; ++step) {
        if ((step & 63) == 0) deadline.check("ic tour");
        tour.push_back(current);
        visited[current] = 1;
        int next = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < l; ++j) {
            if (visited[j]) continue;
            const double d = (X.row(current) - X.row(j)).squaredNorm();
            if (d < best) {
                best = d;
                next = j;
            }
        }
        if (next < 0) break;
        current = next;
    }
    return tour;
}

std::vector<double> ic_slopes(const RowMatrix& X, const Vector& y, const std::vector<int>& tour) {
    std::vector<double> out;
    out.reserve(tour.size());
    for (std::size_t k = 0; k + 1 < tour.size(); ++k) {
        const double dx = distance(X, tour[k], tour[k + 1]);
        if (dx == 0) continue;
        out.push_back((y[tour[k + 1]] - y[tour[k]]) / dx);
    }
    return out;
}

std::vector<int> ic_symbols(const std::vector<double>& slopes, double eps) {
    std::vector<int> s(slopes.size());
    for (std::size_t i = 0; i < slopes.size(); ++i) s[i] = slopes[i] > eps ? 1 : (slopes[i] < -eps ? -1 : 0);
    return s;
}

double ic_entropy(const std::vector<int>& symbols) {
    if (symbols.size() < 2) return 0.0;
    std::array<int, 9> counts{};
    for (std::size_t i = 0; i + 1 < symbols.size(); ++i) ++counts[(symbols[i] + 1) * 3 + (symbols[i + 1] + 1)];
    const auto pairs = static_cast<double>(symbols.size() - 1);
    double h = 0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            if (a == b || counts[a * 3 + b] == 0) continue;
            const double p = counts[a * 3 + b] / pairs;
            h -= p * std::log(p) / std::log(6.0);
        }
    return h;
}

double ic_partial_information(const std::vector<int>& symbols) {
    if (symbols.empty()) return 0.0;
    int runs = 0, last = 0;
    for (int s : symbols) {
        if (s == 0 || s == last) continue;
        ++runs;
        last = s;
    }
    return static_cast<double>(runs) / static_cast<double>(symbols.size());
}

FeatureVector ic(const RowMatrix& X, const Vector& y, const FeatureConfig& config) {
    if (X.rows() < 10) throw InvalidArgument("ic: need at least 10 points");
    GroupBuilder g("ic", config.record_runtime);
    const auto tour = ic_tour(X, derive_seed(config.seed, 0x1c), config.deadline);
    const auto slopes = ic_slopes(X, y, tour);

    double scale = 0;
    for (double s : slopes) scale = std::max(scale, std::abs(s));
    if (scale == 0) scale = 1;
    std::vector<double> grid{0.0};
    const int points = config.ic_grid_points;
    for (int i = 0; i < points; ++i)
        grid.push_back(scale * std::pow(10.0, -5.0 + 20.0 * i / std::max(points - 1, 1)));

    std::vector<double> H(grid.size()), M(grid.size());
    for (std::size_t e = 0; e < grid.size(); ++e) {
        const auto sym = ic_symbols(slopes, grid[e]);
        H[e] = ic_entropy(sym);
        M[e] = ic_partial_information(sym);
    }
    const auto log_eps = [&](std::size_t e) -> FeatureValue {
        if (e >= grid.size() || grid[e] <= 0) return std::nullopt;
        return std::log10(grid[e]);
    };
    const auto argmax = static_cast<std::size_t>(std::max_element(H.begin(), H.end()) - H.begin());
    std::size_t settle = grid.size(), half = grid.size();
    for (std::size_t e = 0; e < grid.size() && settle == grid.size(); ++e)
        if (H[e] < 0.05) settle = e;
    for (std::size_t e = 0; e < grid.size() && half == grid.size(); ++e)
        if (M[e] <= 0.5 * M[0]) half = e;

    g.add("h.max", H[argmax]);
    g.add("eps.s", log_eps(settle));
    g.add("eps.max", log_eps(argmax));
    g.add("eps.ratio", log_eps(half));
    g.add("m0", M[0]);
    return g.finish();
}

}  // namespace ela::features
