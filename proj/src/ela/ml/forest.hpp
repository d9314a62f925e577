#pragma once

#include "ela/common.hpp"

#include <span>
#include <vector>

namespace ela::ml {

struct ForestOptions {
    int n_trees = 100;
    std::uint64_t seed = 1;
    int min_leaf = 1;
    int max_features = 0;  // 0 = ceil(sqrt(p))
    int jobs = 1;
};

// CART classification tree (Gini impurity), grown until pure or no valid split.
class Tree {
public:
    struct Node {
        int feature = -1;  // -1 for leaves
        double threshold = 0;
        int left = -1;
        int right = -1;
        int label = 0;
    };

    Tree() = default;
    explicit Tree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

    int predict(const double* row) const;
    const std::vector<Node>& nodes() const { return nodes_; }

private:
    std::vector<Node> nodes_;
};

// Bagged CART ensemble. Labels are 0..K-1; majority vote with ties to the lower label.
class Forest {
public:
    static Forest train(const Matrix& X, std::span<const int> labels, const ForestOptions& options);

    std::vector<int> predict(const Matrix& X) const;
    // mean impurity decrease per feature; sums to 1 when any split happened
    const Vector& importances() const { return importances_; }
    int n_trees() const { return static_cast<int>(trees_.size()); }
    int n_classes() const { return n_classes_; }

private:
    std::vector<Tree> trees_;
    Vector importances_;
    int n_classes_ = 0;
};

}  // namespace ela::ml
