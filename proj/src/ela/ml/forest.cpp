#include "ela/ml/forest.hpp"

#include "ela/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace ela::ml {

namespace {

double gini(std::span<const int> counts, int total) {
    if (total == 0) return 0.0;
    double s = 0;
    for (int c : counts) {
        const double p = static_cast<double>(c) / total;
        s += p * p;
    }
    return 1.0 - s;
}

int majority(std::span<const int> counts) {
    return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

struct Split {
    int feature = -1;
    double threshold = 0;
    double decrease = -1;
};

class TreeBuilder {
public:
    TreeBuilder(const Matrix& X, std::span<const int> y, int n_classes, int mtry, int min_leaf, std::uint64_t seed)
        : X_(X), y_(y), k_(n_classes), mtry_(mtry), min_leaf_(min_leaf), rng_(seed), importance_(Vector::Zero(X.cols())) {}

    Tree build(std::vector<int> sample) {
        total_ = static_cast<int>(sample.size());
        std::vector<Tree::Node> nodes;
        grow(nodes, std::move(sample));
        return Tree(std::move(nodes));
    }

    const Vector& importance() const { return importance_; }

private:
    int grow(std::vector<Tree::Node>& nodes, std::vector<int> idx) {
        const int id = static_cast<int>(nodes.size());
        nodes.emplace_back();
        std::vector<int> counts(k_, 0);
        for (int i : idx) ++counts[y_[i]];
        const int n = static_cast<int>(idx.size());
        nodes[id].label = majority(counts);

        const double impurity = gini(counts, n);
        if (impurity <= 0 || n < 2 * min_leaf_) return id;

        const Split s = best_split(idx, counts, impurity);
        if (s.feature < 0) return id;

        std::vector<int> left, right;
        for (int i : idx) (X_(i, s.feature) <= s.threshold ? left : right).push_back(i);
        importance_[s.feature] += static_cast<double>(n) / total_ * s.decrease;

        nodes[id].feature = s.feature;
        nodes[id].threshold = s.threshold;
        idx.clear();
        idx.shrink_to_fit();
        const int l = grow(nodes, std::move(left));
        const int r = grow(nodes, std::move(right));
        nodes[id].left = l;
        nodes[id].right = r;
        return id;
    }

    // Visits features in random order until mtry of them admitted a split.
    Split best_split(const std::vector<int>& idx, const std::vector<int>& counts, double impurity) {
        const int p = static_cast<int>(X_.cols());
        const int n = static_cast<int>(idx.size());
        std::vector<int> features(p);
        std::iota(features.begin(), features.end(), 0);
        std::shuffle(features.begin(), features.end(), rng_);

        Split best;
        std::vector<std::pair<double, int>> column(n);
        std::vector<int> left(k_);
        int usable = 0;
        for (int f : features) {
            if (usable >= mtry_) break;
            for (int j = 0; j < n; ++j) column[j] = {X_(idx[j], f), y_[idx[j]]};
            std::sort(column.begin(), column.end());
            if (column.front().first == column.back().first) continue;
            ++usable;
            std::fill(left.begin(), left.end(), 0);
            for (int j = 0; j + 1 < n; ++j) {
                ++left[column[j].second];
                if (column[j].first == column[j + 1].first) continue;
                const int nl = j + 1, nr = n - nl;
                if (nl < min_leaf_ || nr < min_leaf_) continue;
                double gl = 1.0, gr = 1.0;
                for (int c = 0; c < k_; ++c) {
                    const double pl = static_cast<double>(left[c]) / nl;
                    const double pr = static_cast<double>(counts[c] - left[c]) / nr;
                    gl -= pl * pl;
                    gr -= pr * pr;
                }
                const double decrease = impurity - (nl * gl + nr * gr) / n;
                if (decrease > best.decrease) {
                    best.decrease = decrease;
                    best.feature = f;
                    best.threshold = 0.5 * (column[j].first + column[j + 1].first);
                    // midpoint can round onto the upper value for adjacent doubles
                    if (best.threshold >= column[j + 1].first) best.threshold = column[j].first;
                }
            }
        }
        return best;
    }

    const Matrix& X_;
    std::span<const int> y_;
    int k_;
    int mtry_;
    int min_leaf_;
    std::mt19937_64 rng_;
    Vector importance_;
    int total_ = 0;
};

}  // namespace

int Tree::predict(const double* row) const {
    int node = 0;
    while (nodes_[node].feature >= 0)
        node = row[nodes_[node].feature] <= nodes_[node].threshold ? nodes_[node].left : nodes_[node].right;
    return nodes_[node].label;
}

Forest Forest::train(const Matrix& X, std::span<const int> labels, const ForestOptions& options) {
    const auto n = static_cast<int>(X.rows());
    const auto p = static_cast<int>(X.cols());
    if (n == 0) throw InvalidArgument("forest: empty training set");
    if (static_cast<int>(labels.size()) != n) throw InvalidArgument("forest: label length mismatch");
    if (options.n_trees < 1) throw InvalidArgument("forest: n_trees must be >= 1");
    for (int v : labels)
        if (v < 0) throw InvalidArgument("forest: labels must be non-negative");

    Forest forest;
    forest.n_classes_ = *std::max_element(labels.begin(), labels.end()) + 1;
    const int mtry = options.max_features > 0 ? std::min(options.max_features, p)
                                              : std::max(1, static_cast<int>(std::ceil(std::sqrt(p))));
    forest.trees_.resize(options.n_trees);
    std::vector<Vector> tree_importance(options.n_trees);

    parallel_for(options.n_trees, options.jobs, [&](int t) {
        const auto seed = derive_seed(options.seed, t);
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> pick(0, n - 1);
        std::vector<int> sample(n);
        for (int& s : sample) s = pick(rng);
        TreeBuilder builder(X, labels, forest.n_classes_, mtry, options.min_leaf, derive_seed(seed, 1));
        forest.trees_[t] = builder.build(std::move(sample));
        tree_importance[t] = builder.importance();
    });

    forest.importances_ = Vector::Zero(p);
    for (auto& imp : tree_importance) {
        const double s = imp.sum();
        if (s > 0) forest.importances_ += imp / s;
    }
    const double total = forest.importances_.sum();
    if (total > 0) forest.importances_ /= total;
    return forest;
}

std::vector<int> Forest::predict(const Matrix& X) const {
    if (X.cols() > 0 && trees_.empty()) throw InvalidArgument("forest: untrained model");
    const RowMatrix rows = X;
    std::vector<int> out(X.rows());
    std::vector<int> votes(n_classes_);
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        std::fill(votes.begin(), votes.end(), 0);
        for (const auto& t : trees_) ++votes[t.predict(rows.row(i).data())];
        out[i] = majority(votes);
    }
    return out;
}

}  // namespace ela::ml
