#include "ela/ml/ols.hpp"

#include <cmath>

namespace ela::ml {

namespace {

Vector min_norm_solve(const Matrix& A, const Vector& y) {
    const auto rows = A.rows(), cols = A.cols();
    if (cols > rows) {
        // wide system: beta = A^T (A A^T)^{-1} y when A has full row rank
        Matrix gram(rows, rows);
        gram.setZero();
        gram.selfadjointView<Eigen::Lower>().rankUpdate(A);
        Eigen::LLT<Matrix> llt(gram.selfadjointView<Eigen::Lower>());
        if (llt.info() == Eigen::Success) {
            const Vector diag = llt.matrixL().toDenseMatrix().diagonal();
            if (diag.minCoeff() > 1e-10 * diag.maxCoeff()) return A.transpose() * llt.solve(y);
        }
        return Eigen::CompleteOrthogonalDecomposition<Matrix>(A).solve(y);
    }
    Eigen::HouseholderQR<Matrix> qr(A);
    const Vector rdiag = qr.matrixQR().diagonal().cwiseAbs();
    if (rdiag.minCoeff() > 1e-10 * rdiag.maxCoeff()) return qr.solve(y);
    return Eigen::CompleteOrthogonalDecomposition<Matrix>(A).solve(y);
}

}  // namespace

LinearFit ols_fit(const Matrix& X, const Vector& y) {
    const auto l = X.rows();
    const auto p = X.cols();
    if (l < 2) throw InvalidArgument("ols_fit: need at least 2 observations");
    if (y.size() != l) throw InvalidArgument("ols_fit: y length != rows of X");

    Matrix A(l, p + 1);
    A.col(0).setOnes();
    A.rightCols(p) = X;

    LinearFit fit;
    fit.coefficients = min_norm_solve(A, y);
    fit.residuals = y - A * fit.coefficients;
    const double sse = fit.residuals.squaredNorm();
    const double sst = (y.array() - y.mean()).square().sum();
    fit.r2 = sst > 0 ? 1.0 - sse / sst : 0.0;
    const auto dof = l - p - 1;
    if (dof > 0 && sst > 0) fit.adj_r2 = 1.0 - (1.0 - fit.r2) * static_cast<double>(l - 1) / static_cast<double>(dof);
    return fit;
}

}  // namespace ela::ml
