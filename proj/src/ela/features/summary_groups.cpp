// basic, limo and pca: summary statistics of the sample and of linear models.

#include "ela/features/groups.hpp"
#include "ela/ml/ols.hpp"
#include "ela/stats.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <map>
#include <unordered_set>

namespace ela {

FeatureInput FeatureInput::from(const DesignSample& design) {
    return {design.points, design.objectives, design.bounds, false};
}

FeatureInput FeatureInput::from(const ReducedSample& reduced) {
    const auto m = reduced.points.cols();
    Bounds b{reduced.points.colwise().minCoeff().transpose(), reduced.points.colwise().maxCoeff().transpose()};
    for (Eigen::Index j = 0; j < m; ++j)
        if (!(b.lower[j] < b.upper[j])) {
            b.lower[j] -= 0.5;
            b.upper[j] += 0.5;
        }
    return {reduced.points, reduced.objectives, std::move(b), true};
}

namespace features {

namespace {

struct VectorHash {
    std::size_t operator()(const std::vector<int>& v) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (int x : v) h = mix_seed(h ^ static_cast<std::uint32_t>(x));
        return static_cast<std::size_t>(h);
    }
};

std::vector<double> column(const Matrix& M, Eigen::Index j) {
    return {M.col(j).data(), M.col(j).data() + M.rows()};
}

// mean pairwise Pearson correlation between the rows of C
FeatureValue mean_row_correlation(const Matrix& C) {
    if (C.rows() < 2 || C.cols() < 2) return std::nullopt;
    double sum = 0;
    int count = 0;
    for (Eigen::Index a = 0; a < C.rows(); ++a)
        for (Eigen::Index b = a + 1; b < C.rows(); ++b) {
            const Vector ra = C.row(a).transpose(), rb = C.row(b).transpose();
            const auto r = stats::pearson(stats::as_span(ra), stats::as_span(rb));
            if (!r) return std::nullopt;
            sum += *r;
            ++count;
        }
    return sum / count;
}

struct Spread {
    FeatureValue ratio;
    FeatureValue mean;
};

// sd of each coordinate across rows; max/min ratio and mean of those sds
Spread coordinate_spread(const Matrix& C) {
    if (C.rows() < 2) return {};
    std::vector<double> sds;
    for (Eigen::Index j = 0; j < C.cols(); ++j) sds.push_back(*stats::sd(column(C, j)));
    const auto [lo, hi] = std::minmax_element(sds.begin(), sds.end());
    return {stats::ratio(*hi, *lo), stats::mean(sds)};
}

struct Explained {
    FeatureValue share90;
    FeatureValue pc1;
};

Explained explained(const Matrix& S) {
    if (!S.allFinite()) return {};
    Eigen::SelfAdjointEigenSolver<Matrix> es(S, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("pca: eigensolver failed");
    Vector ev = es.eigenvalues().reverse().cwiseMax(0.0);
    const double total = ev.sum();
    if (!(total > 0)) return {};
    double cum = 0;
    Eigen::Index k = 0;
    while (k < ev.size()) {
        cum += ev[k++];
        if (cum / total >= 0.9 - 1e-12) break;
    }
    return {static_cast<double>(k) / static_cast<double>(ev.size()), ev[0] / total};
}

Matrix covariance(const Matrix& A) {
    const Matrix c = A.rowwise() - A.colwise().mean();
    return c.transpose() * c / static_cast<double>(A.rows() - 1);
}

// correlation matrix, or a non-finite matrix when a column is constant
Matrix correlation(const Matrix& A) {
    Matrix c = covariance(A);
    const Vector s = c.diagonal().cwiseSqrt();
    if ((s.array() <= 0).any()) return Matrix::Constant(c.rows(), c.cols(), std::nan(""));
    return s.cwiseInverse().asDiagonal() * c * s.cwiseInverse().asDiagonal();
}

}  // namespace

FeatureVector basic(const FeatureInput& input, const FeatureConfig& config) {
    GroupBuilder g("basic", config.record_runtime);
    const int d = input.dim();
    input.bounds.validate();
    if (config.blocks < 1) throw InvalidArgument("basic: blocks must be >= 1");
    std::unordered_set<std::vector<int>, VectorHash> filled;
    for (int i = 0; i < input.size(); ++i) {
        std::vector<int> key(d);
        for (int j = 0; j < d; ++j) {
            const double span = input.bounds.upper[j] - input.bounds.lower[j];
            const double t = (input.points(i, j) - input.bounds.lower[j]) / span;
            key[j] = std::clamp(static_cast<int>(std::floor(t * config.blocks)), 0, config.blocks - 1);
        }
        filled.insert(std::move(key));
    }
    g.add("dim", d);
    g.add("observations", input.size());
    g.add("lower_min", input.bounds.lower.minCoeff());
    g.add("lower_max", input.bounds.lower.maxCoeff());
    g.add("upper_min", input.bounds.upper.minCoeff());
    g.add("upper_max", input.bounds.upper.maxCoeff());
    g.add("objective_min", input.objectives.minCoeff());
    g.add("objective_max", input.objectives.maxCoeff());
    g.add("blocks_min", config.blocks);
    g.add("blocks_max", config.blocks);
    g.add("cells_total", std::pow(static_cast<double>(config.blocks), d));
    g.add("cells_filled", static_cast<double>(filled.size()));
    g.add("minimize_fun", 1.0);
    return g.finish();
}

int default_limo_blocks(int dim) { return grid_size(3, dim, 100'000) > 0 ? 3 : 1; }

FeatureVector limo(const RowMatrix& X, const Vector& y, const CellGrid& grid, const FeatureConfig& config) {
    GroupBuilder g("limo", config.record_runtime);
    const auto d = X.cols();
    std::map<long long, std::vector<int>> cells;
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        cells[grid.cell_of({X.row(i).data(), static_cast<std::size_t>(d)})].push_back(static_cast<int>(i));

    std::vector<Vector> coefs;
    for (const auto& [cell, idx] : cells) {
        config.deadline.check("limo");
        if (static_cast<Eigen::Index>(idx.size()) < d + 2) continue;
        Matrix Xc(idx.size(), d);
        Vector yc(idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) {
            Xc.row(k) = X.row(idx[k]);
            yc[k] = y[idx[k]];
        }
        coefs.push_back(ml::ols_fit(Xc, yc).coefficients.tail(d));
    }

    const auto k = static_cast<Eigen::Index>(coefs.size());
    constexpr std::array names{"avg_length.reg", "avg_length.norm", "length.mean", "length.sd",
                               "cor.reg",        "cor.norm",        "ratio.mean",  "ratio.sd",
                               "sd_ratio.reg",   "sd_ratio.norm",   "sd_mean.reg", "sd_mean.norm"};
    if (k == 0) {
        for (const char* n : names) g.add_undefined(n);
        return g.finish();
    }
    Matrix reg(k, d), norm(k, d);
    std::vector<double> lengths, ratios;
    for (Eigen::Index c = 0; c < k; ++c) {
        reg.row(c) = coefs[c].transpose();
        const double len = coefs[c].norm();
        lengths.push_back(len);
        norm.row(c) = (len > 0 ? Vector(coefs[c] / len) : Vector(Vector::Zero(d))).transpose();
        const Vector a = coefs[c].cwiseAbs();
        if (const auto r = stats::ratio(a.maxCoeff(), a.minCoeff())) ratios.push_back(*r);
    }
    const auto sreg = coordinate_spread(reg), snorm = coordinate_spread(norm);

    g.add("avg_length.reg", reg.colwise().mean().norm());
    g.add("avg_length.norm", norm.colwise().mean().norm());
    g.add("length.mean", stats::mean(lengths));
    g.add("length.sd", stats::sd(lengths));
    g.add("cor.reg", mean_row_correlation(reg));
    g.add("cor.norm", mean_row_correlation(norm));
    g.add("ratio.mean", ratios.empty() ? FeatureValue{} : stats::mean(ratios));
    g.add("ratio.sd", stats::sd(ratios));
    g.add("sd_ratio.reg", sreg.ratio);
    g.add("sd_ratio.norm", snorm.ratio);
    g.add("sd_mean.reg", sreg.mean);
    g.add("sd_mean.norm", snorm.mean);
    return g.finish();
}

FeatureVector pca_features(const RowMatrix& X, const Vector& y, const FeatureConfig& config) {
    if (X.rows() < 3) throw InvalidArgument("pca: need at least 3 points");
    GroupBuilder g("pca", config.record_runtime);
    const Matrix x = X;
    Matrix xy(x.rows(), x.cols() + 1);
    xy << x, y;
    const auto cov_x = explained(covariance(x));
    const auto cor_x = explained(correlation(x));
    config.deadline.check("pca");
    const auto cov_init = explained(covariance(xy));
    const auto cor_init = explained(correlation(xy));

    g.add("expl_var.cov_x", cov_x.share90);
    g.add("expl_var.cor_x", cor_x.share90);
    g.add("expl_var.cov_init", cov_init.share90);
    g.add("expl_var.cor_init", cor_init.share90);
    g.add("expl_var_PC1.cov_x", cov_x.pc1);
    g.add("expl_var_PC1.cor_x", cor_x.pc1);
    g.add("expl_var_PC1.cov_init", cov_init.pc1);
    g.add("expl_var_PC1.cor_init", cor_init.pc1);
    return g.finish();
}

}  // namespace features
}  // namespace ela
