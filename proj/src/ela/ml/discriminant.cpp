#include "ela/ml/discriminant.hpp"

#include "ela/ml/kfold.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <cmath>
#include <limits>
#include <numbers>

namespace ela::ml {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool well_conditioned(const Eigen::LLT<Matrix>& llt) {
    if (llt.info() != Eigen::Success) return false;
    const Vector d = llt.matrixLLT().diagonal();
    const double hi = d.maxCoeff();
    return hi > 0 && d.minCoeff() * d.minCoeff() > 1e-12 * hi * hi;
}

double logsumexp(std::span<const double> v) {
    double hi = kNegInf;
    for (double x : v) hi = std::max(hi, x);
    if (!std::isfinite(hi)) return hi;
    double s = 0;
    for (double x : v) s += std::exp(x - hi);
    return hi + std::log(s);
}

Matrix rows_of(const Matrix& X, std::span<const int> idx) {
    Matrix out(idx.size(), X.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) out.row(i) = X.row(idx[i]);
    return out;
}

Matrix scatter(const Matrix& X, const Vector& mean) {
    const Matrix c = X.rowwise() - mean.transpose();
    return c.transpose() * c;
}

// Two-component mixture by EM. Starts from a median split along the class's
// principal axis.
ClassDensity fit_mixture(const Matrix& X, const Deadline& deadline) {
    const auto n = X.rows();
    const auto d = X.cols();
    const Vector mu = X.colwise().mean().transpose();

    ClassDensity cd;
    if (n < 2 * kMdaComponents) {
        const Matrix cov = n > 1 ? Matrix(scatter(X, mu) / static_cast<double>(n)) : Matrix::Zero(d, d);
        cd.components.emplace_back(mu, cov);
        cd.log_weights.push_back(0.0);
        return cd;
    }

    Matrix resp = Matrix::Zero(n, kMdaComponents);
    {
        Eigen::SelfAdjointEigenSolver<Matrix> es(scatter(X, mu));
        const Vector axis = es.eigenvectors().col(d - 1);
        const Vector proj = (X.rowwise() - mu.transpose()) * axis;
        std::vector<double> sorted(proj.data(), proj.data() + n);
        std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
        const double cut = sorted[n / 2];
        int upper = 0;
        for (Eigen::Index i = 0; i < n; ++i) upper += proj[i] >= cut;
        for (Eigen::Index i = 0; i < n; ++i) {
            // ties at the cut would otherwise leave one side empty
            const bool hi = upper < n ? proj[i] >= cut : proj[i] > cut || i % 2 == 0;
            resp(i, hi ? 1 : 0) = 1.0;
        }
    }

    std::vector<Gaussian> comps(kMdaComponents);
    std::vector<double> logw(kMdaComponents);
    double prev_ll = kNegInf;
    Matrix logp(n, kMdaComponents);
    for (int iter = 0; iter < kMdaMaxIterations; ++iter) {
        deadline.check("mda em");
        // M-step
        for (int k = 0; k < kMdaComponents; ++k) {
            const double nk = resp.col(k).sum();
            if (nk <= 1e-10 * static_cast<double>(n)) {
                logw[k] = kNegInf;
                comps[k] = Gaussian(mu, scatter(X, mu) / static_cast<double>(n));
                continue;
            }
            const Vector mk = (X.transpose() * resp.col(k)) / nk;
            Matrix c = X.rowwise() - mk.transpose();
            c.array().colwise() *= resp.col(k).array().sqrt();
            comps[k] = Gaussian(mk, c.transpose() * c / nk);
            logw[k] = std::log(nk / static_cast<double>(n));
        }
        // E-step
        for (int k = 0; k < kMdaComponents; ++k)
            logp.col(k) = std::isfinite(logw[k]) ? Vector(comps[k].log_density(X).array() + logw[k])
                                                 : Vector::Constant(n, kNegInf);
        double ll = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const std::array<double, kMdaComponents> row{logp(i, 0), logp(i, 1)};
            const double lse = logsumexp(row);
            ll += lse;
            for (int k = 0; k < kMdaComponents; ++k) resp(i, k) = std::exp(row[k] - lse);
        }
        if (std::isfinite(prev_ll) && std::abs(ll - prev_ll) <= kMdaTolerance * std::max(1.0, std::abs(ll))) break;
        prev_ll = ll;
    }
    for (int k = 0; k < kMdaComponents; ++k) {
        if (!std::isfinite(logw[k])) continue;
        cd.components.push_back(comps[k]);
        cd.log_weights.push_back(logw[k]);
    }
    return cd;
}

}  // namespace

Gaussian::Gaussian(Vector mean, const Matrix& cov) : mean_(std::move(mean)) {
    const auto d = cov.rows();
    Eigen::LLT<Matrix> llt(cov);
    if (!well_conditioned(llt)) {
        regularized_ = true;
        const double trace = cov.trace();
        double lambda = trace > 0 ? 1e-8 * trace / static_cast<double>(d) : 1e-8;
        for (int attempt = 0; attempt < 12; ++attempt, lambda *= 10) {
            llt.compute(cov + lambda * Matrix::Identity(d, d));
            if (llt.info() == Eigen::Success) break;
        }
        if (llt.info() != Eigen::Success) throw NumericalError("gaussian: covariance factorisation failed");
    }
    chol_ = llt.matrixL();
    log_norm_ = -0.5 * static_cast<double>(d) * std::log(2 * std::numbers::pi) -
                chol_.diagonal().array().log().sum();
}

Vector Gaussian::log_density(const Matrix& X) const {
    Matrix centred = (X.rowwise() - mean_.transpose()).transpose();
    chol_.triangularView<Eigen::Lower>().solveInPlace(centred);
    return (log_norm_ - 0.5 * centred.colwise().squaredNorm().array()).transpose();
}

DiscriminantModel DiscriminantModel::fit(DiscriminantKind kind, const Matrix& X, std::span<const int> labels,
                                         const Deadline& deadline) {
    const auto n = X.rows();
    if (n == 0 || static_cast<Eigen::Index>(labels.size()) != n)
        throw InvalidArgument("discriminant: empty data or label length mismatch");
    const int k = *std::max_element(labels.begin(), labels.end()) + 1;
    std::vector<std::vector<int>> members(k);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (labels[i] < 0) throw InvalidArgument("discriminant: labels must be non-negative");
        members[labels[i]].push_back(static_cast<int>(i));
    }

    DiscriminantModel model;
    model.classes_.resize(k);
    model.present_.assign(k, false);

    std::vector<Matrix> class_rows(k);
    std::vector<Vector> means(k);
    Matrix pooled = Matrix::Zero(X.cols(), X.cols());
    int present = 0;
    for (int c = 0; c < k; ++c) {
        if (members[c].empty()) continue;
        model.present_[c] = true;
        ++present;
        class_rows[c] = rows_of(X, members[c]);
        means[c] = class_rows[c].colwise().mean().transpose();
        model.classes_[c].log_prior = std::log(static_cast<double>(members[c].size()) / static_cast<double>(n));
        if (kind == DiscriminantKind::lda) pooled += scatter(class_rows[c], means[c]);
    }
    if (kind == DiscriminantKind::lda) pooled /= static_cast<double>(std::max<Eigen::Index>(n - present, 1));

    for (int c = 0; c < k; ++c) {
        if (!model.present_[c]) continue;
        auto& cd = model.classes_[c];
        const auto nc = static_cast<double>(members[c].size());
        switch (kind) {
            case DiscriminantKind::lda:
                cd.components.emplace_back(means[c], pooled);
                cd.log_weights.push_back(0.0);
                break;
            case DiscriminantKind::qda: {
                const Matrix cov = nc > 1 ? Matrix(scatter(class_rows[c], means[c]) / (nc - 1))
                                          : Matrix::Zero(X.cols(), X.cols());
                cd.components.emplace_back(means[c], cov);
                cd.log_weights.push_back(0.0);
                break;
            }
            case DiscriminantKind::mda: {
                const double prior = cd.log_prior;
                cd = fit_mixture(class_rows[c], deadline);
                cd.log_prior = prior;
                break;
            }
        }
    }
    return model;
}

Matrix DiscriminantModel::scores(const Matrix& X) const {
    const auto k = static_cast<Eigen::Index>(classes_.size());
    Matrix s = Matrix::Constant(X.rows(), k, kNegInf);
    for (Eigen::Index c = 0; c < k; ++c) {
        if (!present_[c]) continue;
        const auto& cd = classes_[c];
        Matrix comp(X.rows(), static_cast<Eigen::Index>(cd.components.size()));
        for (std::size_t j = 0; j < cd.components.size(); ++j)
            comp.col(static_cast<Eigen::Index>(j)) = cd.components[j].log_density(X).array() + cd.log_weights[j];
        for (Eigen::Index i = 0; i < X.rows(); ++i) {
            std::vector<double> row(comp.cols());
            for (Eigen::Index j = 0; j < comp.cols(); ++j) row[j] = comp(i, j);
            s(i, c) = cd.log_prior + logsumexp(row);
        }
    }
    return s;
}

std::vector<int> DiscriminantModel::predict(const Matrix& X) const {
    const Matrix s = scores(X);
    std::vector<int> out(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        int best = -1;
        for (Eigen::Index c = 0; c < s.cols(); ++c)
            if (present_[c] && (best < 0 || s(i, c) > s(i, best))) best = static_cast<int>(c);
        out[i] = best;
    }
    return out;
}

MmceResult lda_qda_mda_mmce(const Matrix& X, std::span<const int> labels, int folds, std::uint64_t seed,
                            const Deadline& deadline) {
    const auto n = static_cast<int>(X.rows());
    if (static_cast<int>(labels.size()) != n) throw InvalidArgument("mmce: label length mismatch");
    if (std::adjacent_find(labels.begin(), labels.end(), std::not_equal_to<>()) == labels.end())
        throw InvalidArgument("mmce: need at least two classes");
    const auto parts = kfold(n, folds, seed, labels);

    std::array<double, 3> err{};
    constexpr std::array kinds{DiscriminantKind::lda, DiscriminantKind::qda, DiscriminantKind::mda};
    std::vector<int> in_test(n);
    for (const auto& test : parts) {
        std::fill(in_test.begin(), in_test.end(), 0);
        for (int i : test) in_test[i] = 1;
        std::vector<int> train;
        train.reserve(n - test.size());
        for (int i = 0; i < n; ++i)
            if (!in_test[i]) train.push_back(i);
        const Matrix xtr = rows_of(X, train), xte = rows_of(X, test);
        std::vector<int> ytr(train.size());
        for (std::size_t i = 0; i < train.size(); ++i) ytr[i] = labels[train[i]];

        for (std::size_t m = 0; m < kinds.size(); ++m) {
            deadline.check("ela_level cross-validation");
            const auto model = DiscriminantModel::fit(kinds[m], xtr, ytr, deadline);
            const auto pred = model.predict(xte);
            int wrong = 0;
            for (std::size_t i = 0; i < test.size(); ++i) wrong += pred[i] != labels[test[i]];
            err[m] += static_cast<double>(wrong) / static_cast<double>(test.size());
        }
    }
    const auto k = static_cast<double>(parts.size());
    return {err[0] / k, err[1] / k, err[2] / k};
}

}  // namespace ela::ml
