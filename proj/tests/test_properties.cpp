// randomized invariant checks, at least 200 cases each

#include "support.hpp"

#include "ela/dimred.hpp"
#include "ela/features/cellmap.hpp"
#include "ela/features/compute.hpp"
#include "ela/features/groups.hpp"
#include "ela/harness.hpp"
#include "ela/ml/discriminant.hpp"
#include "ela/ml/forest.hpp"
#include "ela/ml/kendall.hpp"
#include "ela/ml/ols.hpp"
#include "ela/sampling.hpp"
#include "ela/stats.hpp"

#include <doctest.h>

#include <cstring>
#include <functional>
#include <numbers>
#include <set>

using namespace ela;

namespace {

constexpr int kCases = 200;

int uniform_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

void cases(std::uint64_t seed, const std::function<void(std::mt19937_64&, int)>& body, int count = kCases) {
    std::mt19937_64 rng(seed);
    for (int c = 0; c < count; ++c) {
        CAPTURE(c);
        body(rng, c);
    }
}

bool close(FeatureValue a, FeatureValue b, double tol) {
    if (a.has_value() != b.has_value()) return false;
    if (!a) return true;
    return std::fabs(*a - *b) <= tol * std::max(1.0, std::fabs(*a));
}

Vector distinct_values(int l, std::mt19937_64& rng) {
    Vector y(l);
    for (int i = 0; i < l; ++i) y[i] = uniform(rng, -100, 100);
    return y;
}

}  // namespace

// ------------------------------------------------------------------- testbed

TEST_CASE("evaluate is deterministic and pure") {
    cases(1, [](std::mt19937_64& rng, int) {
        const int fid = uniform_int(rng, 1, suite_size()), n = uniform_int(rng, 2, 12);
        const auto seed = static_cast<std::uint64_t>(uniform_int(rng, 1, 1000));
        const auto a = make_instance(fid, n, seed);
        const Vector x = testing::uniform_points(1, n, rng).row(0).transpose();
        const double first = a.evaluate(x);
        CHECK(std::isfinite(first));
        CHECK(a.evaluate(x) == first);
        CHECK(make_instance(fid, n, seed).evaluate(x) == first);
    });
}

TEST_CASE("instance rotations are orthogonal") {
    cases(2, [](std::mt19937_64& rng, int) {
        const int fid = uniform_int(rng, 1, suite_size()), n = uniform_int(rng, 2, 40);
        const auto inst = make_instance(fid, n, uniform_int(rng, 1, 99));
        const Matrix& R = inst.rotation();
        CHECK((R.transpose() * R - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
    });
}

TEST_CASE("labels are constant across instances and dimensions") {
    cases(3, [](std::mt19937_64& rng, int) {
        const int fid = uniform_int(rng, 1, suite_size());
        const auto a = make_instance(fid, uniform_int(rng, 2, 50), uniform_int(rng, 1, 1000));
        CHECK(a.labels() == function_info(fid).labels);
    });
}

// ------------------------------------------------------------------ sampling

TEST_CASE("lhs marginals hold one point per stratum") {
    cases(4, [](std::mt19937_64& rng, int) {
        const int l = uniform_int(rng, 1, 300), n = uniform_int(rng, 1, 8);
        Bounds b{Vector(n), Vector(n)};
        for (int j = 0; j < n; ++j) {
            b.lower[j] = uniform(rng, -10, 5);
            b.upper[j] = b.lower[j] + uniform(rng, 0.1, 10);
        }
        const auto X = lhs(l, b, rng());
        for (int j = 0; j < n; ++j) {
            std::vector<int> counts(l, 0);
            const double width = (b.upper[j] - b.lower[j]) / l;
            for (int i = 0; i < l; ++i) {
                CHECK(X(i, j) >= b.lower[j]);
                CHECK(X(i, j) <= b.upper[j]);
                ++counts[std::clamp(static_cast<int>((X(i, j) - b.lower[j]) / width), 0, l - 1)];
            }
            CHECK(std::all_of(counts.begin(), counts.end(), [](int c) { return c == 1; }));
        }
    });
}

TEST_CASE("build_design evaluates exactly l times") {
    cases(5, [](std::mt19937_64& rng, int) {
        const int n = uniform_int(rng, 2, 10), l = uniform_int(rng, 2, 200);
        const auto inst = make_instance(uniform_int(rng, 1, suite_size()), n, uniform_int(rng, 1, 15));
        const auto before = inst.evaluations();
        const auto d = build_design(inst, l, rng());
        CHECK(inst.evaluations() - before == static_cast<std::uint64_t>(l));
        CHECK(d.size() == l);
        // the reduction adds none
        if (n > 2) {
            reduce(d, uniform_int(rng, 1, n - 1));
            CHECK(inst.evaluations() - before == static_cast<std::uint64_t>(l));
        }
    });
}

// -------------------------------------------------------------------- dimred

TEST_CASE("rank weights are normalised and vanish at the worst rank") {
    cases(6, [](std::mt19937_64& rng, int) {
        const int l = uniform_int(rng, 2, 1000);
        std::vector<double> y(l);
        for (auto& v : y) v = std::round(uniform(rng, 0, 20));  // ties on purpose
        const auto ranks = rank_objectives(y);
        std::vector<int> sorted = ranks;
        std::sort(sorted.begin(), sorted.end());
        for (int i = 0; i < l; ++i) CHECK(sorted[i] == i + 1);
        const auto w = compute_weights(l, ranks);
        CHECK(std::fabs(w.weights.sum() - 1.0) <= 1e-12);
        CHECK(w.weights.minCoeff() >= 0);
        for (int i = 0; i < l; ++i) {
            CHECK(std::fabs(w.raw_weights[i] - (std::log(static_cast<double>(l)) - std::log(static_cast<double>(ranks[i])))) <= 1e-12);
            if (ranks[i] == l) CHECK(w.raw_weights[i] == 0.0);
        }
    });
}

TEST_CASE("reduction axes are orthonormal, variances sorted, objectives untouched") {
    cases(7, [](std::mt19937_64& rng, int) {
        const int n = uniform_int(rng, 2, 30), l = uniform_int(rng, 2, 120), m = uniform_int(rng, 1, n - 1);
        const auto X = testing::uniform_points(l, n, rng);
        const auto y = distinct_values(l, rng);
        const auto r = reduce(X, y, m);
        const Matrix& A = r.transform.axes;
        CHECK((A.transpose() * A - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() <= 1e-10);
        for (int c = 0; c + 1 < m; ++c) CHECK(r.transform.explained_variance[c] >= r.transform.explained_variance[c + 1]);
        CHECK(std::memcmp(r.objectives.data(), y.data(), sizeof(double) * l) == 0);
    });
}

TEST_CASE("explained variances are the top eigenvalues of the scaled covariance") {
    cases(8, [](std::mt19937_64& rng, int) {
        const int n = uniform_int(rng, 2, 10), l = uniform_int(rng, 3, 60), m = uniform_int(rng, 1, n - 1);
        const auto X = testing::uniform_points(l, n, rng);
        const auto y = distinct_values(l, rng);
        const auto r = reduce(X, y, m);
        const auto o = testing::oracle_reduce(X, y, n - 1);
        double total = 0;
        for (int c = 0; c < m; ++c) {
            CHECK(std::fabs(r.transform.explained_variance[c] - static_cast<double>(o.variance[c])) <=
                  1e-10 * std::max(1.0, static_cast<double>(o.variance[0])));
            total += r.transform.explained_variance[c];
        }
        Matrix S = X.rowwise() - X.colwise().mean();
        S.array().colwise() *= r.transform.weights.weights.array();
        const Matrix C = S.rowwise() - S.colwise().mean();
        const double trace = C.array().square().sum() / (l - 1);
        CHECK(total <= trace * (1 + 1e-12) + 1e-15);
    });
}

TEST_CASE("permuting rows permutes the reduced points") {
    cases(9, [](std::mt19937_64& rng, int) {
        const int n = uniform_int(rng, 2, 12), l = uniform_int(rng, 2, 100), m = uniform_int(rng, 1, n - 1);
        const auto X = testing::uniform_points(l, n, rng);
        const auto y = distinct_values(l, rng);
        std::vector<int> perm(l);
        for (int i = 0; i < l; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        RowMatrix Xp(l, n);
        Vector yp(l);
        for (int i = 0; i < l; ++i) {
            Xp.row(i) = X.row(perm[i]);
            yp[i] = y[perm[i]];
        }
        const auto a = reduce(X, y, m), b = reduce(Xp, yp, m);
        const double scale = std::max(1e-300, a.points.cwiseAbs().maxCoeff());
        const Vector ev = reduce(X, y, n - 1).transform.explained_variance;
        // components with (near) repeated eigenvalues have no unique axis; compare only well separated ones
        for (int c = 0; c < m; ++c) {
            const double gap_prev = c > 0 ? ev[c - 1] - ev[c] : INFINITY;
            const double next = c + 1 < ev.size() ? ev[c + 1] : 0.0;
            if (std::min(gap_prev, ev[c] - next) <= 1e-6 * ev[0]) continue;
            for (int i = 0; i < l; ++i) CHECK(std::fabs(b.points(i, c) - a.points(perm[i], c)) <= 1e-8 * scale);
        }
    });
}

// ------------------------------------------------------------------------ ml

TEST_CASE("ols residuals are orthogonal to the design") {
    cases(10, [](std::mt19937_64& rng, int) {
        const int l = uniform_int(rng, 2, 200), p = uniform_int(rng, 1, 12);
        Matrix X = testing::normal_points(l, p, rng) * uniform(rng, 0.01, 100);
        const Vector y = testing::normal_vector(l, rng) * uniform(rng, 0.01, 100);
        const auto fit = ml::ols_fit(X, y);
        Matrix D(l, p + 1);
        D << Vector::Ones(l), X;
        const double scale = D.cwiseAbs().maxCoeff() * y.cwiseAbs().maxCoeff() * l;
        CHECK((D.transpose() * fit.residuals).cwiseAbs().maxCoeff() <= 1e-8 * scale);
        if (fit.adj_r2) CHECK(*fit.adj_r2 <= 1.0 + 1e-12);
    });
}

TEST_CASE("lda predictions are invariant under affine maps") {
    cases(11, [](std::mt19937_64& rng, int) {
        const int d = uniform_int(rng, 1, 4), l = uniform_int(rng, 20, 80);
        Matrix X = testing::normal_points(l, d, rng);
        std::vector<int> labels(l);
        for (int i = 0; i < l; ++i) {
            labels[i] = i % 2;
            X(i, 0) += labels[i] * uniform(rng, 0, 2);
        }
        Matrix A = testing::normal_points(d, d, rng);
        A += Matrix::Identity(d, d) * 3;  // keep it well conditioned
        const Vector b = testing::normal_vector(d, rng);
        const Matrix Y = (X * A.transpose()).rowwise() + b.transpose();
        const auto pa = ml::DiscriminantModel::fit(ml::DiscriminantKind::lda, X, labels).predict(X);
        const auto pb = ml::DiscriminantModel::fit(ml::DiscriminantKind::lda, Y, labels).predict(Y);
        const auto sa = ml::DiscriminantModel::fit(ml::DiscriminantKind::lda, X, labels).scores(X);
        int differ = 0;
        for (int i = 0; i < l; ++i)
            if (pa[i] != pb[i]) {
                // only points sitting on the boundary may flip through rounding
                CHECK(std::fabs(sa(i, 0) - sa(i, 1)) <= 1e-8 * std::max(1.0, std::fabs(sa(i, 0))));
                ++differ;
            }
        CHECK(differ <= 1);
    });
}

TEST_CASE("forest prediction is deterministic") {
    cases(12, [](std::mt19937_64& rng, int) {
        const int l = uniform_int(rng, 10, 60), p = uniform_int(rng, 1, 6), k = uniform_int(rng, 2, 4);
        const Matrix X = testing::normal_points(l, p, rng);
        std::vector<int> labels(l);
        for (auto& v : labels) v = uniform_int(rng, 0, k - 1);
        ml::ForestOptions o;
        o.n_trees = 5;
        o.seed = rng();
        const auto f = ml::Forest::train(X, labels, o);
        const Matrix T = testing::normal_points(20, p, rng);
        CHECK(f.predict(T) == f.predict(T));
        CHECK(ml::Forest::train(X, labels, o).predict(T) == f.predict(T));
        CHECK(f.importances().minCoeff() >= 0);
        if (f.importances().sum() > 0) CHECK(std::fabs(f.importances().sum() - 1.0) <= 1e-12);
    });
}

TEST_CASE("kendall tau is symmetric and rank based") {
    cases(13, [](std::mt19937_64& rng, int) {
        const int l = uniform_int(rng, 2, 60);
        std::vector<double> a(l), b(l), a2(l), b2(l);
        for (int i = 0; i < l; ++i) {
            a[i] = std::round(uniform(rng, -5, 5));
            b[i] = uniform(rng, -5, 5);
            a2[i] = std::exp(a[i]) + 3;
            b2[i] = b[i] * b[i] * b[i];
        }
        const auto t = ml::kendall_tau(a, b);
        CHECK(close(t, ml::kendall_tau(b, a), 1e-12));
        CHECK(close(t, ml::kendall_tau(a2, b2), 1e-12));
        if (t) {
            CHECK(*t >= -1 - 1e-12);
            CHECK(*t <= 1 + 1e-12);
        }
    });
}

// ---------------------------------------------------------------- features

TEST_CASE("distance-based features are translation invariant") {
    cases(14, [](std::mt19937_64& rng, int) {
        const int n = uniform_int(rng, 1, 5), l = uniform_int(rng, 50, 120);
        const auto X = testing::uniform_points(l, n, rng);
        const auto y = distinct_values(l, rng);
        RowMatrix Xs = X;
        Xs.rowwise() += testing::uniform_points(1, n, rng).row(0);
        FeatureConfig cfg;
        cfg.record_runtime = false;
        cfg.seed = rng();
        using Group = FeatureVector (*)(const RowMatrix&, const Vector&, const FeatureConfig&);
        for (Group group : {Group(features::nbc), Group(features::disp), Group(features::ic)}) {
            const auto g = group(X, y, cfg), h = group(Xs, y, cfg);
            for (std::size_t k = 0; k < g.size(); ++k) {
                CAPTURE(g.entries[k].name);
                CHECK(close(g.entries[k].value, h.entries[k].value, 1e-9));
            }
        }
        const auto m0 = features::ela_meta(X, y, cfg), m1 = features::ela_meta(Xs, y, cfg);
        for (const char* k : {"ela_meta.lin_simple.adj_r2", "ela_meta.lin_simple.coef.min", "ela_meta.lin_simple.coef.max",
                              "ela_meta.quad_simple.adj_r2", "ela_meta.lin_w_interact.adj_r2"}) {
            CAPTURE(k);
            CHECK(close(m0.get(k), m1.get(k), 1e-7));
        }
    });
}

TEST_CASE("scaling y keeps level errors and scales meta coefficients") {
    cases(15, [](std::mt19937_64& rng, int c) {
        const int n = uniform_int(rng, 1, 3), l = uniform_int(rng, 40, 60);
        const auto X = testing::uniform_points(l, n, rng);
        const auto y = distinct_values(l, rng);
        const double k = uniform(rng, 0.01, 100);
        const Vector yk = y * k;
        FeatureConfig cfg;
        cfg.record_runtime = false;
        cfg.seed = rng();
        const auto m0 = features::ela_meta(X, y, cfg), m1 = features::ela_meta(X, yk, cfg);
        CHECK(*m1.get("ela_meta.lin_simple.intercept") == doctest::Approx(k * *m0.get("ela_meta.lin_simple.intercept")).epsilon(1e-8));
        CHECK(*m1.get("ela_meta.lin_simple.coef.max") == doctest::Approx(k * *m0.get("ela_meta.lin_simple.coef.max")).epsilon(1e-8));
        CHECK(*m1.get("ela_meta.lin_simple.coef.min") == doctest::Approx(k * *m0.get("ela_meta.lin_simple.coef.min")).epsilon(1e-8));
        // the quantile split is unchanged, so are the cross-validated errors (checked on a subset to bound time)
        if (c % 4 == 0) {
            const auto a = features::ela_level(X, y, cfg), b = features::ela_level(X, yk, cfg);
            for (std::size_t e = 0; e + 2 < a.size(); ++e) CHECK(close(a.entries[e].value, b.entries[e].value, 1e-12));
        }
    });
}

TEST_CASE("groups keep their entry counts on random inputs") {
    const auto& names = group_names();
    cases(16, [&](std::mt19937_64& rng, int c) {
        const std::string& g = names[c % names.size()];
        const int n = uniform_int(rng, 2, 4), l = uniform_int(rng, 40, 100);
        FeatureInput in;
        in.points = testing::uniform_points(l, n, rng);
        in.objectives = uniform(rng, 0, 1) < 0.1 ? Vector(Vector::Ones(l)) : distinct_values(l, rng);
        in.bounds = Bounds::box(n, -5, 5);
        FeatureConfig cfg;
        cfg.level_folds = 5;
        cfg.ic_grid_points = 100;
        const auto f = compute_group(g, in, cfg);
        CAPTURE(g);
        CHECK(static_cast<int>(f.size()) == group_entry_count(g));
    }, 13 * 16);
}

TEST_CASE("nbc and disp match a brute-force oracle") {
    cases(17, [](std::mt19937_64& rng, int) {
        const int n = uniform_int(rng, 1, 6), l = uniform_int(rng, 10, 200);
        const auto X = testing::uniform_points(l, n, rng);
        const auto y = distinct_values(l, rng);
        const auto nb = features::nearest_better(X, y);
        for (int i = 0; i < l; ++i) {
            double a = INFINITY, b = INFINITY, far = 0;
            for (int j = 0; j < l; ++j) {
                if (j == i) continue;
                const double d = testing::distance(X, i, j);
                a = std::min(a, d);
                far = std::max(far, d);
                if (y[j] < y[i]) b = std::min(b, d);
            }
            CHECK(std::fabs(nb.nn[i] - a) <= 1e-9);
            CHECK(std::fabs(nb.nb[i] - (std::isinf(b) ? far : b)) <= 1e-9);
        }
        const auto f = features::disp(X, y);
        const auto order = stats::stable_order(stats::as_span(y));
        std::vector<int> all(l);
        for (int i = 0; i < l; ++i) all[i] = i;
        const auto full = testing::pairwise(X, all);
        for (auto [pct, tag] : std::vector<std::pair<int, std::string>>{{10, "10"}, {25, "25"}}) {
            const int k = (pct * l + 99) / 100;
            if (k < 2) continue;
            const std::vector<int> best(order.begin(), order.begin() + k);
            const auto sub = testing::pairwise(X, best);
            CHECK(*f.get("disp.ratio_mean_" + tag) == doctest::Approx(testing::mean_of(sub) / testing::mean_of(full)).epsilon(1e-9));
            CHECK(*f.get("disp.diff_median_" + tag) ==
                  doctest::Approx(testing::median_of(sub) - testing::median_of(full)).epsilon(1e-9).scale(1));
        }
    });
}

TEST_CASE("ic symbols at eps 0 are signs of the differences") {
    cases(18, [](std::mt19937_64& rng, int) {
        const int n = uniform_int(rng, 1, 5), l = uniform_int(rng, 10, 150);
        const auto X = testing::uniform_points(l, n, rng);
        Vector y(l);
        for (auto& v : y) v = std::round(uniform(rng, 0, 5));
        const auto tour = features::ic_tour(X, rng());
        const auto symbols = features::ic_symbols(features::ic_slopes(X, y, tour), 0.0);
        REQUIRE(symbols.size() == static_cast<std::size_t>(l - 1));
        for (int k = 0; k + 1 < l; ++k) {
            const double d = y[tour[k + 1]] - y[tour[k]];
            CHECK(symbols[k] == (d > 0) - (d < 0));
        }
    });
}

// ---------------------------------------------------------------- cell maps

TEST_CASE("absorption probabilities sum to one and attractors are local minima") {
    cases(19, [](std::mt19937_64& rng, int) {
        const int d = uniform_int(rng, 1, 3), b = uniform_int(rng, 3, d == 1 ? 30 : d == 2 ? 12 : 6);
        const int l = uniform_int(rng, 5, 400);
        const auto X = testing::uniform_points(l, d, rng, 0, 1);
        Vector y(l);
        for (auto& v : y) v = std::round(uniform(rng, 0, 8));  // ties between cells on purpose
        const auto map = features::build_grid(X, y, b, Bounds::box(d, 0, 1));
        for (auto scheme : features::kAllSchemes) {
            const auto chain = features::absorbing_chain(map, scheme);
            std::set<int> attractors(chain.attractors.begin(), chain.attractors.end());
            for (std::size_t s = 0; s < chain.cells.size(); ++s) {
                double total = 0;
                for (const auto& [a, p] : chain.absorption[s]) total += p;
                CHECK(std::fabs(total - 1.0) <= 1e-9);
                // brute force: no non-empty axis neighbour strictly better
                bool minimum = true;
                const auto co = map.grid.coords(chain.cells[s]);
                for (int axis = 0; axis < d; ++axis)
                    for (int step : {-1, 1}) {
                        auto nb = co;
                        nb[axis] += step;
                        if (nb[axis] < 0 || nb[axis] >= b) continue;
                        const int pos = map.find(map.grid.index(nb));
                        if (pos >= 0 && chain.values[pos] < chain.values[s]) minimum = false;
                    }
                CHECK(minimum == attractors.contains(static_cast<int>(s)));
            }
        }
    });
}

TEST_CASE("absorption matches the forward-propagation oracle on full grids") {
    cases(20, [](std::mt19937_64& rng, int) {
        const int side = uniform_int(rng, 3, 7);
        std::vector<double> values(side * side);
        for (auto& v : values) v = std::round(uniform(rng, 0, 6));
        auto [X, y] = testing::grid_sample(values, side);
        const auto chain = features::absorbing_chain(features::build_grid(X, y, side, Bounds::box(2, 0, side)), features::Scheme::min);
        const auto oracle = testing::oracle_chain(values, side);
        REQUIRE(chain.attractors.size() == oracle.attractors.size());
        for (int s = 0; s < side * side; ++s) {
            std::vector<double> got(oracle.attractors.size(), 0.0);
            for (const auto& [a, p] : chain.absorption[s]) got[a] = p;
            for (std::size_t a = 0; a < got.size(); ++a) CHECK(std::fabs(got[a] - oracle.absorption[s][a]) <= 1e-9);
        }
    });
}

TEST_CASE("cm_angle stays in range") {
    cases(21, [](std::mt19937_64& rng, int) {
        const int d = uniform_int(rng, 1, 3), l = uniform_int(rng, 10, 300);
        const auto X = testing::uniform_points(l, d, rng, 0, 1);
        const auto y = distinct_values(l, rng);
        const auto map = features::build_grid(X, y, 3, Bounds::box(d, 0, 1));
        for (const auto& s : map.cells) {
            if (s.members.size() < 2) continue;
            const Vector a = s.best_point - s.center, b = s.worst_point - s.center;
            if (a.norm() == 0 || b.norm() == 0) continue;
            const double angle = std::acos(std::clamp(a.dot(b) / (a.norm() * b.norm()), -1.0, 1.0)) * 180 / std::numbers::pi;
            CHECK(angle >= 0);
            CHECK(angle <= 180);
        }
        const auto f = features::cm_angle(map);
        if (const auto m = f.get("cm_angle.angle.mean")) {
            CHECK(*m >= 0);
            CHECK(*m <= 180);
        }
        if (const auto r = f.get("cm_angle.y_ratio_best2worst.mean")) {
            CHECK(*r >= 0);
            CHECK(*r <= 1);
        }
    });
}

// ----------------------------------------------------------------- harness

TEST_CASE("assembly is idempotent on cached vectors") {
    cases(22, [](std::mt19937_64& rng, int) {
        const int rows = uniform_int(rng, 2, 30), cols = uniform_int(rng, 1, 8);
        std::vector<harness::RawRow> raw(rows);
        std::vector<std::set<double>> seen(cols);
        for (int r = 0; r < rows; ++r) {
            raw[r].function_id = 1 + r % suite_size();
            raw[r].instance = 1 + r / suite_size();
            raw[r].labels = function_info(raw[r].function_id).labels;
            FeatureVector f;
            for (int c = 0; c < cols; ++c) {
                FeatureValue v = std::round(uniform(rng, 0, 3));
                if (uniform(rng, 0, 1) < 0.2) v.reset();
                if (v) seen[c].insert(*v);
                f.entries.push_back({"nbc.f" + std::to_string(c), v});
            }
            raw[r].groups["nbc"] = f;
        }
        const harness::FeatureSetSpec spec{"t", {harness::GroupRef{"nbc", false}}};
        const auto informative = std::count_if(seen.begin(), seen.end(), [](const auto& v) { return v.size() > 1; });
        if (informative == 0) {
            CHECK_THROWS_AS(harness::assemble(raw, spec), InvalidArgument);
            return;
        }
        const auto a = harness::assemble(raw, spec), b = harness::assemble(raw, spec);
        CHECK(a.X == b.X);
        CHECK(a.feature_names == b.feature_names);
        CHECK(static_cast<long>(a.feature_names.size()) == informative);
        CHECK(a.feature_names.size() + a.dropped.size() == static_cast<std::size_t>(cols));
        CHECK(a.X.allFinite());
        // no kept column is constant
        for (Eigen::Index j = 0; j < a.X.cols(); ++j) CHECK(a.X.col(j).maxCoeff() > a.X.col(j).minCoeff());
    });
}

TEST_CASE("lopo never trains on the held-out function") {
    harness::DatasetOptions o;
    o.dim = 2;
    o.instances = 3;
    const auto data = harness::assemble_dataset(o, harness::FeatureSetSpec::named("C7"));
    cases(23, [&](std::mt19937_64& rng, int) {
        harness::CvOptions cv;
        cv.n_trees = 3;
        cv.seed = rng();
        const auto task = kAllProperties[uniform_int(rng, 0, kPropertyCount - 1)];
        const auto r = harness::lopo_cv(data, task, cv);
        for (const auto& f : r.folds) {
            for (int row : f.train_rows) CHECK(data.function_ids[row] != f.held_out);
            for (int row : f.test_rows) CHECK(data.function_ids[row] == f.held_out);
            CHECK(f.train_rows.size() + f.test_rows.size() == static_cast<std::size_t>(data.rows()));
        }
    });
}

TEST_CASE("similarity is invariant under increasing transforms") {
    cases(24, [](std::mt19937_64& rng, int) {
        const int fns = uniform_int(rng, 3, 13), inst = uniform_int(rng, 1, 3);
        std::vector<harness::RawRow> plain, warped;
        for (int f = 1; f <= fns; ++f) {
            // reduced value constant over instances so its per-function mean is exact
            const double v = uniform(rng, -3, 3);
            for (int i = 1; i <= inst; ++i) {
                harness::RawRow r;
                r.function_id = f;
                r.instance = i;
                r.groups["ela_meta"].entries.push_back({"ela_meta.a", uniform(rng, -3, 3)});
                r.groups["d_ela_meta"].entries.push_back({"d_ela_meta.a", v});
                plain.push_back(r);
                r.groups["d_ela_meta"].entries[0].value = std::atan(v) * 7 + 1;
                warped.push_back(r);
            }
        }
        const auto a = harness::similarity(plain, {"ela_meta"}), b = harness::similarity(warped, {"ela_meta"});
        REQUIRE(a.size() == b.size());
        if (!a.empty()) CHECK(close(a[0].tau, b[0].tau, 1e-12));
    });
}

TEST_CASE("ela_level median timing does not fall as the dimension grows") {
    harness::TimingOptions t;
    t.groups = {"ela_level"};
    t.dims = {2, 5, 10, 20};
    t.reps = 3;
    const auto recs = harness::time_features(t);
    double last = 0;
    for (int d : t.dims) {
        const auto m = harness::median_seconds(recs, "ela_level", d);
        REQUIRE(m);
        CAPTURE(d);
        CHECK(*m >= last);
        last = *m;
    }
}
