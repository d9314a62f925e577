#pragma once

// helpers and independent oracles shared by the test binaries

#include "ela/common.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace testing {

using ela::Matrix;
using ela::RowMatrix;
using ela::Vector;

inline RowMatrix uniform_points(int l, int n, std::mt19937_64& rng, double lo = -5, double hi = 5) {
    std::uniform_real_distribution<double> u(lo, hi);
    RowMatrix X(l, n);
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < n; ++j) X(i, j) = u(rng);
    return X;
}

inline RowMatrix normal_points(int l, int n, std::mt19937_64& rng) {
    std::normal_distribution<double> z;
    RowMatrix X(l, n);
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < n; ++j) X(i, j) = z(rng);
    return X;
}

inline Vector normal_vector(int l, std::mt19937_64& rng) {
    std::normal_distribution<double> z;
    Vector v(l);
    for (int i = 0; i < l; ++i) v[i] = z(rng);
    return v;
}

inline double distance(const RowMatrix& X, int a, int b) {
    double s = 0;
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        const double d = X(a, j) - X(b, j);
        s += d * d;
    }
    return std::sqrt(s);
}

// all pairwise distances i < j of the listed rows, by double loop
inline std::vector<double> pairwise(const RowMatrix& X, const std::vector<int>& rows) {
    std::vector<double> out;
    for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t b = a + 1; b < rows.size(); ++b) out.push_back(distance(X, rows[a], rows[b]));
    return out;
}

inline double mean_of(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

using LMatrix = std::vector<std::vector<long double>>;

// cyclic Jacobi eigensolver for a symmetric matrix in long double;
// returns eigenvalues (descending) and eigenvectors as columns
inline std::pair<std::vector<long double>, LMatrix> jacobi_eigen(LMatrix a) {
    const int n = static_cast<int>(a.size());
    LMatrix v(n, std::vector<long double>(n, 0.0L));
    for (int i = 0; i < n; ++i) v[i][i] = 1.0L;
    for (int sweep = 0; sweep < 100; ++sweep) {
        long double off = 0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-40L) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::fabs(a[p][q]) < 1e-300L) continue;
                const long double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
                const long double t = (theta >= 0 ? 1.0L : -1.0L) / (std::fabs(theta) + std::sqrt(theta * theta + 1));
                const long double c = 1 / std::sqrt(t * t + 1), s = t * c;
                for (int k = 0; k < n; ++k) {
                    const long double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const long double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const long double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int x, int y) { return a[x][x] > a[y][y]; });
    std::vector<long double> values(n);
    LMatrix vectors(n, std::vector<long double>(n));
    for (int c = 0; c < n; ++c) {
        values[c] = a[idx[c]][idx[c]];
        for (int r = 0; r < n; ++r) vectors[r][c] = v[r][idx[c]];
    }
    return {values, vectors};
}

struct OracleReduction {
    std::vector<long double> weights;
    LMatrix axes;              // n x m
    std::vector<long double> variance;
    LMatrix points;            // l x m
};

// weighted PCA written out from its definition in long double
inline OracleReduction oracle_reduce(const RowMatrix& X, const Vector& y, int m) {
    const int l = static_cast<int>(X.rows()), n = static_cast<int>(X.cols());
    // ranks: 1 + number of strictly smaller values + equal values at lower index
    std::vector<int> rank(l);
    for (int i = 0; i < l; ++i) {
        int r = 1;
        for (int j = 0; j < l; ++j)
            if (y[j] < y[i] || (y[j] == y[i] && j < i)) ++r;
        rank[i] = r;
    }
    OracleReduction o;
    std::vector<long double> raw(l);
    long double total = 0;
    for (int i = 0; i < l; ++i) total += raw[i] = std::log(static_cast<long double>(l)) - std::log(static_cast<long double>(rank[i]));
    o.weights.resize(l);
    for (int i = 0; i < l; ++i) o.weights[i] = raw[i] / total;

    std::vector<long double> mean(n, 0.0L);
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < n; ++j) mean[j] += X(i, j);
    for (auto& v : mean) v /= l;
    LMatrix s(l, std::vector<long double>(n));
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < n; ++j) s[i][j] = o.weights[i] * (X(i, j) - mean[j]);
    std::vector<long double> smean(n, 0.0L);
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < n; ++j) smean[j] += s[i][j];
    for (auto& v : smean) v /= l;
    LMatrix cov(n, std::vector<long double>(n, 0.0L));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            long double acc = 0;
            for (int i = 0; i < l; ++i) acc += (s[i][a] - smean[a]) * (s[i][b] - smean[b]);
            cov[a][b] = acc / (l - 1);
        }
    auto [values, vectors] = jacobi_eigen(cov);
    o.axes.assign(n, std::vector<long double>(m));
    o.variance.assign(values.begin(), values.begin() + m);
    for (int c = 0; c < m; ++c) {
        int arg = 0;
        for (int r = 1; r < n; ++r)
            if (std::fabs(vectors[r][c]) > std::fabs(vectors[arg][c])) arg = r;
        const long double sign = vectors[arg][c] < 0 ? -1.0L : 1.0L;
        for (int r = 0; r < n; ++r) o.axes[r][c] = sign * vectors[r][c];
    }
    o.points.assign(l, std::vector<long double>(m, 0.0L));
    for (int i = 0; i < l; ++i)
        for (int c = 0; c < m; ++c)
            for (int j = 0; j < n; ++j) o.points[i][c] += s[i][j] * o.axes[j][c];
    return o;
}

// Absorption probabilities of the "move uniformly to a strictly better axis
// neighbour" chain on a full side x side grid (index = x + side * y), found by
// pushing the distribution of every start cell forward until nothing moves.
struct OracleChain {
    std::vector<int> attractors;                 // cell indices, ascending
    std::vector<std::vector<double>> absorption; // [cell][attractor position]
};

inline OracleChain oracle_chain(const std::vector<double>& values, int side) {
    const int n = side * side;
    std::vector<std::vector<int>> better(n);
    for (int c = 0; c < n; ++c) {
        const int x = c % side, y = c / side;
        const int cand[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
        for (const auto& p : cand)
            if (p[0] >= 0 && p[0] < side && p[1] >= 0 && p[1] < side && values[p[0] + side * p[1]] < values[c])
                better[c].push_back(p[0] + side * p[1]);
    }
    OracleChain o;
    for (int c = 0; c < n; ++c)
        if (better[c].empty()) o.attractors.push_back(c);
    o.absorption.assign(n, std::vector<double>(o.attractors.size(), 0.0));
    for (int start = 0; start < n; ++start) {
        std::vector<long double> dist(n, 0.0L);
        dist[start] = 1;
        for (int step = 0; step < n + 1; ++step) {
            std::vector<long double> next(n, 0.0L);
            for (int c = 0; c < n; ++c) {
                if (dist[c] == 0) continue;
                if (better[c].empty()) {
                    next[c] += dist[c];
                } else {
                    for (int t : better[c]) next[t] += dist[c] / better[c].size();
                }
            }
            dist = next;
        }
        for (std::size_t a = 0; a < o.attractors.size(); ++a) o.absorption[start][a] = static_cast<double>(dist[o.attractors[a]]);
    }
    return o;
}

// one point at the centre of every cell of a side x side grid on [0, side]^2
inline std::pair<RowMatrix, Vector> grid_sample(const std::vector<double>& values, int side) {
    RowMatrix X(side * side, 2);
    Vector y(side * side);
    for (int c = 0; c < side * side; ++c) {
        X(c, 0) = c % side + 0.5;
        X(c, 1) = c / side + 0.5;
        y[c] = values[c];
    }
    return {X, y};
}

}  // namespace testing
