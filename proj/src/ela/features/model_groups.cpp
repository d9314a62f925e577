// ela_distr, ela_level and ela_meta: groups built on the objective
// distribution and on fitted models.

#include "ela/features/groups.hpp"
#include "ela/ml/discriminant.hpp"
#include "ela/ml/ols.hpp"
#include "ela/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace ela::features {

namespace {

constexpr int kDensityGrid = 512;
constexpr double kPeakMass = 0.1;

// R's bw.nrd0
double silverman_bandwidth(const std::vector<double>& y, double sd) {
    const double iqr = stats::quantile(y, 0.75) - stats::quantile(y, 0.25);
    double lo = std::min(sd, iqr / 1.34);
    if (!(lo > 0)) lo = sd;
    return 0.9 * lo * std::pow(static_cast<double>(y.size()), -0.2);
}

// modes of a Gaussian KDE; segments between density minima holding less
// than kPeakMass of the total mass are merged away
int count_peaks(const std::vector<double>& y, double bandwidth) {
    const auto [lo_it, hi_it] = std::minmax_element(y.begin(), y.end());
    const double lo = *lo_it - 3 * bandwidth, hi = *hi_it + 3 * bandwidth;
    const double dx = (hi - lo) / (kDensityGrid - 1);
    std::vector<double> dens(kDensityGrid, 0.0);
    const double norm = 1.0 / (static_cast<double>(y.size()) * bandwidth * std::sqrt(2 * std::numbers::pi));
    for (int k = 0; k < kDensityGrid; ++k) {
        const double g = lo + k * dx;
        double s = 0;
        for (double v : y) {
            const double u = (g - v) / bandwidth;
            s += std::exp(-0.5 * u * u);
        }
        dens[k] = s * norm;
    }
    std::vector<int> cuts{0};
    for (int k = 1; k + 1 < kDensityGrid; ++k)
        if (dens[k] < dens[k - 1] && dens[k] < dens[k + 1]) cuts.push_back(k);
    cuts.push_back(kDensityGrid);
    double total = 0;
    for (double d : dens) total += d;
    int peaks = 0;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        double mass = 0;
        for (int k = cuts[s]; k < cuts[s + 1]; ++k) mass += dens[k];
        peaks += mass > kPeakMass * total;
    }
    return std::max(peaks, 1);
}

std::string percent_suffix(double q) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02d", static_cast<int>(std::lround(q * 100)));
    return buf;
}

Matrix pairwise_products(const RowMatrix& X, bool with_squares) {
    const auto n = X.cols();
    const auto extra = with_squares ? n * (n + 1) / 2 : n * (n - 1) / 2;
    Matrix out(X.rows(), n + extra);
    out.leftCols(n) = X;
    Eigen::Index col = n;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = with_squares ? i : i + 1; j < n; ++j) out.col(col++) = X.col(i).cwiseProduct(X.col(j));
    return out;
}

}  // namespace

FeatureVector ela_distr(const Vector& y, const FeatureConfig& config) {
    if (y.size() < 4) throw InvalidArgument("ela_distr: need at least 4 objective values");
    GroupBuilder g("ela_distr", config.record_runtime);
    const std::vector<double> v(y.data(), y.data() + y.size());
    const auto sd = stats::sd(v);
    if (!sd || *sd == 0) {
        g.add_undefined("skewness");
        g.add_undefined("kurtosis");
        g.add("number_of_peaks", 1.0);
    } else {
        g.add("skewness", stats::skewness(v));
        g.add("kurtosis", stats::kurtosis(v));
        g.add("number_of_peaks", count_peaks(v, silverman_bandwidth(v, *sd)));
    }
    return g.finish();
}

FeatureVector ela_level(const RowMatrix& X, const Vector& y, const FeatureConfig& config) {
    const auto l = X.rows();
    if (l < 4 * config.level_folds)
        throw InvalidArgument("ela_level: need at least " + std::to_string(4 * config.level_folds) + " points");
    GroupBuilder g("ela_level", config.record_runtime);
    const Matrix Xc = X;
    const std::vector<double> yv(y.data(), y.data() + l);
    for (std::size_t qi = 0; qi < config.level_quantiles.size(); ++qi) {
        const double q = config.level_quantiles[qi];
        const auto sfx = percent_suffix(q);
        const double threshold = stats::quantile(yv, q);
        std::vector<int> labels(l);
        int below = 0;
        for (Eigen::Index i = 0; i < l; ++i) below += labels[i] = y[i] <= threshold ? 1 : 0;
        if (below == 0 || below == l) {
            for (const char* name : {"mmce_lda_", "mmce_qda_", "mmce_mda_", "lda_qda_", "lda_mda_", "qda_mda_"})
                g.add_undefined(name + sfx);
            continue;
        }
        const auto r = ml::lda_qda_mda_mmce(Xc, labels, config.level_folds, derive_seed(config.seed, 0x1e7e1, qi),
                                            config.deadline);
        g.add("mmce_lda_" + sfx, r.lda);
        g.add("mmce_qda_" + sfx, r.qda);
        g.add("mmce_mda_" + sfx, r.mda);
        g.add("lda_qda_" + sfx, stats::ratio(r.lda, r.qda));
        g.add("lda_mda_" + sfx, stats::ratio(r.lda, r.mda));
        g.add("qda_mda_" + sfx, stats::ratio(r.qda, r.mda));
    }
    return g.finish();
}

FeatureVector ela_meta(const RowMatrix& X, const Vector& y, const FeatureConfig& config) {
    const auto n = X.cols();
    if (X.rows() < n + 2) throw InvalidArgument("ela_meta: need at least dim + 2 points");
    GroupBuilder g("ela_meta", config.record_runtime);

    const auto lin = ml::ols_fit(X, y);
    const Vector coef = lin.coefficients.tail(n).cwiseAbs();
    g.add("lin_simple.adj_r2", lin.adj_r2);
    g.add("lin_simple.intercept", lin.coefficients[0]);
    g.add("lin_simple.coef.min", coef.minCoeff());
    g.add("lin_simple.coef.max", coef.maxCoeff());
    g.add("lin_simple.coef.max_by_min", stats::ratio(coef.maxCoeff(), coef.minCoeff()));
    config.deadline.check("ela_meta");

    g.add("lin_w_interact.adj_r2", ml::ols_fit(pairwise_products(X, false), y).adj_r2);
    config.deadline.check("ela_meta");

    Matrix quad(X.rows(), 2 * n);
    quad.leftCols(n) = X;
    quad.rightCols(n) = X.array().square().matrix();
    const auto qs = ml::ols_fit(quad, y);
    const Vector qcoef = qs.coefficients.tail(n).cwiseAbs();
    g.add("quad_simple.adj_r2", qs.adj_r2);
    g.add("quad_simple.cond", stats::ratio(qcoef.maxCoeff(), qcoef.minCoeff()));
    config.deadline.check("ela_meta");

    g.add("quad_w_interact.adj_r2", ml::ols_fit(pairwise_products(X, true), y).adj_r2);
    return g.finish();
}

}  // namespace ela::features
