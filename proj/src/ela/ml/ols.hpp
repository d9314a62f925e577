#pragma once

#include "ela/common.hpp"

namespace ela::ml {

struct LinearFit {
    Vector coefficients;   // intercept first, then one per predictor column
    FeatureValue adj_r2;   // undefined when l - p - 1 <= 0 or y is constant
    double r2 = 0;
    Vector residuals;
};

// Least squares y ~ 1 + X. X holds p predictor columns (no intercept column).
// Rank-deficient and under-determined systems get the minimum-norm solution.
LinearFit ols_fit(const Matrix& X, const Vector& y);

}  // namespace ela::ml
