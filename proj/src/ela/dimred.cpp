#include "ela/dimred.hpp"

#include "ela/stats.hpp"

#include <cmath>

namespace ela {

std::vector<int> rank_objectives(std::span<const double> y) {
    if (y.size() < 2) throw InvalidArgument("rank_objectives: need at least 2 values");
    for (double v : y)
        if (!std::isfinite(v)) throw InvalidArgument("rank_objectives: non-finite objective value");
    const auto order = stats::stable_order(y);
    std::vector<int> ranks(y.size());
    for (std::size_t r = 0; r < order.size(); ++r) ranks[order[r]] = static_cast<int>(r) + 1;
    return ranks;
}

RankWeights compute_weights(int l, std::span<const int> ranks) {
    if (l < 2) throw InvalidArgument("compute_weights: l must be >= 2");
    if (static_cast<int>(ranks.size()) != l) throw InvalidArgument("compute_weights: ranks length != l");
    std::vector<char> seen(l + 1, 0);
    for (int r : ranks) {
        if (r < 1 || r > l || seen[r]) throw InvalidArgument("compute_weights: ranks must be a permutation of 1..l");
        seen[r] = 1;
    }
    RankWeights w;
    w.ranks.assign(ranks.begin(), ranks.end());
    w.raw_weights.resize(l);
    const double log_l = std::log(static_cast<double>(l));
    for (int i = 0; i < l; ++i) w.raw_weights[i] = log_l - std::log(static_cast<double>(ranks[i]));
    w.weights = w.raw_weights / w.raw_weights.sum();
    return w;
}

namespace {

// top-m eigenpairs of a symmetric matrix, descending; pairs beyond its size are zero
void top_eigenpairs(const Matrix& sym, int m, Matrix& vectors, Vector& values) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
    if (es.info() != Eigen::Success) throw NumericalError("reduce: covariance eigensolve failed");
    const auto k = sym.rows();
    vectors = Matrix::Zero(k, m);
    values = Vector::Zero(m);
    for (int c = 0; c < std::min<int>(m, static_cast<int>(k)); ++c) {
        vectors.col(c) = es.eigenvectors().col(k - 1 - c);
        values[c] = es.eigenvalues()[k - 1 - c];
    }
}

// Fill columns whose norm vanished (null directions of a rank-deficient Gram
// route) with unit vectors orthogonal to the rest.
void complete_basis(Matrix& axes, std::vector<bool> valid) {
    const auto n = axes.rows();
    Eigen::Index probe = 0;
    for (Eigen::Index c = 0; c < axes.cols(); ++c) {
        if (valid[c]) continue;
        while (probe < n) {
            Vector v = Vector::Unit(n, probe++);
            for (Eigen::Index o = 0; o < axes.cols(); ++o)
                if (valid[o]) v -= axes.col(o).dot(v) * axes.col(o);
            if (v.norm() > 1e-6) {
                axes.col(c) = v.normalized();
                valid[c] = true;
                break;
            }
        }
        if (!valid[c]) throw NumericalError("reduce: could not complete orthonormal basis");
    }
}

}  // namespace

ReducedSample reduce(const RowMatrix& points, const Vector& objectives, int m) {
    const auto l = static_cast<int>(points.rows());
    const auto n = static_cast<int>(points.cols());
    if (l < 2) throw InvalidArgument("reduce: need at least 2 points");
    if (objectives.size() != l) throw InvalidArgument("reduce: objectives length != number of points");
    if (m < 1) throw InvalidArgument("reduce: m must be >= 1");
    if (m >= n)
        throw InvalidArgument("reduce: reduced dimension m=" + std::to_string(m) +
                              " must be smaller than the design dimension n=" + std::to_string(n));

    ReducedSample out;
    auto& t = out.transform;
    t.weights = compute_weights(l, rank_objectives(stats::as_span(objectives)));
    t.mean = points.colwise().mean().transpose();

    Matrix scaled = (points.rowwise() - t.mean.transpose());
    scaled.array().colwise() *= t.weights.weights.array();

    const Vector scaled_mean = scaled.colwise().mean().transpose();
    const Matrix centred = scaled.rowwise() - scaled_mean.transpose();

    if (n <= l) {
        const Matrix cov = (centred.transpose() * centred) / (l - 1);
        top_eigenpairs(cov, m, t.axes, t.explained_variance);
    } else {
        const Matrix gram = (centred * centred.transpose()) / (l - 1);
        Matrix u;
        top_eigenpairs(gram, m, u, t.explained_variance);
        t.axes = centred.transpose() * u;
        std::vector<bool> valid(m);
        const double scale = std::max(t.explained_variance[0], 0.0);
        for (int c = 0; c < m; ++c) {
            const double norm = t.axes.col(c).norm();
            valid[c] = t.explained_variance[c] > 1e-12 * scale && norm > 0;
            if (valid[c]) t.axes.col(c) /= norm;
            else t.explained_variance[c] = 0;
        }
        complete_basis(t.axes, valid);
    }
    for (int c = 0; c < m; ++c) {
        t.explained_variance[c] = std::max(t.explained_variance[c], 0.0);
        Eigen::Index arg = 0;
        t.axes.col(c).cwiseAbs().maxCoeff(&arg);
        if (t.axes(arg, c) < 0) t.axes.col(c) = -t.axes.col(c);
    }

    out.points = scaled * t.axes;
    out.objectives = objectives;
    return out;
}

ReducedSample reduce(const DesignSample& design, int m) { return reduce(design.points, design.objectives, m); }

RowMatrix normalize_unit_box(const RowMatrix& points) {
    if (points.rows() < 2) throw InvalidArgument("normalize_unit_box: need at least 2 points");
    RowMatrix out(points.rows(), points.cols());
    for (Eigen::Index j = 0; j < points.cols(); ++j) {
        const double lo = points.col(j).minCoeff();
        const double hi = points.col(j).maxCoeff();
        if (hi > lo)
            out.col(j) = ((points.col(j).array() - lo) / (hi - lo)).min(1.0).max(0.0).matrix();
        else
            out.col(j).setConstant(0.5);
    }
    return out;
}

}  // namespace ela
