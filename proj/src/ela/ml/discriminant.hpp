#pragma once

#include "ela/common.hpp"

#include <span>
#include <vector>

namespace ela::ml {

enum class DiscriminantKind { lda, qda, mda };

// Multivariate normal with a cached Cholesky factor. Singular covariances get
// lambda * I added, lambda = 1e-8 * trace / dim (1e-8 if the trace is zero),
// growing tenfold until the factorisation succeeds.
class Gaussian {
public:
    Gaussian() = default;
    Gaussian(Vector mean, const Matrix& cov);

    // log densities of the rows of X
    Vector log_density(const Matrix& X) const;
    const Vector& mean() const { return mean_; }
    bool regularized() const { return regularized_; }

private:
    Vector mean_;
    Matrix chol_;  // lower factor
    double log_norm_ = 0;
    bool regularized_ = false;
};

struct ClassDensity {
    double log_prior = 0;
    std::vector<double> log_weights;   // mixture weights (one entry for LDA/QDA)
    std::vector<Gaussian> components;
};

// Bayes classifier over Gaussian (LDA, QDA) or two-component Gaussian-mixture
// (MDA) class densities. Labels are 0..K-1; score ties go to the lower label.
class DiscriminantModel {
public:
    static DiscriminantModel fit(DiscriminantKind kind, const Matrix& X, std::span<const int> labels,
                                 const Deadline& deadline = {});

    // rows x classes matrix of log prior + log class density (-inf for absent classes)
    Matrix scores(const Matrix& X) const;
    std::vector<int> predict(const Matrix& X) const;

private:
    std::vector<ClassDensity> classes_;
    std::vector<bool> present_;
};

struct MmceResult {
    double lda = 0;
    double qda = 0;
    double mda = 0;
};

// Mean misclassification error of LDA, QDA and MDA over one stratified k-fold
// split (shared by the three classifiers). Needs at least two classes and l >= folds.
MmceResult lda_qda_mda_mmce(const Matrix& X, std::span<const int> labels, int folds, std::uint64_t seed,
                            const Deadline& deadline = {});

inline constexpr int kMdaComponents = 2;
inline constexpr int kMdaMaxIterations = 100;
inline constexpr double kMdaTolerance = 1e-6;

}  // namespace ela::ml
