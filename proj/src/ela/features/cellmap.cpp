#include "ela/features/cellmap.hpp"

#include "ela/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <random>

namespace ela::features {

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::min: return "min";
        case Scheme::mean: return "mean";
        case Scheme::near: return "near";
    }
    return "?";
}

double CellSummary::representative(Scheme s) const {
    switch (s) {
        case Scheme::min: return best_value;
        case Scheme::mean: return mean_value;
        case Scheme::near: return near_value;
    }
    return best_value;
}

int CellMap::find(long long cell) const {
    const auto it = lookup.find(cell);
    return it == lookup.end() ? -1 : it->second;
}

CellMap build_grid(const RowMatrix& X, const Vector& y, int blocks, const Bounds& bounds, long long limit) {
    if (X.rows() != y.size() || X.rows() == 0) throw InvalidArgument("cell map: empty sample or length mismatch");
    if (X.cols() != bounds.dim()) throw InvalidArgument("cell map: bounds dimension mismatch");
    CellMap map{CellGrid::make(blocks, bounds, limit), {}, {}, y.minCoeff(), y.maxCoeff()};
    const auto d = static_cast<std::size_t>(X.cols());

    std::map<long long, std::vector<int>> members;
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        members[map.grid.cell_of({X.row(i).data(), d})].push_back(static_cast<int>(i));

    map.cells.reserve(members.size());
    for (auto& [cell, rows] : members) {
        CellSummary s;
        s.cell = cell;
        s.center = map.grid.center(cell);
        s.members = std::move(rows);
        s.best = s.worst = s.members.front();
        double sum = 0, closest = std::numeric_limits<double>::infinity();
        int near = s.best;
        for (int r : s.members) {
            if (y[r] < y[s.best]) s.best = r;
            if (y[r] > y[s.worst]) s.worst = r;
            sum += y[r];
            const double dist = (X.row(r).transpose() - s.center).squaredNorm();
            if (dist < closest) {
                closest = dist;
                near = r;
            }
        }
        s.best_value = y[s.best];
        s.worst_value = y[s.worst];
        s.mean_value = sum / static_cast<double>(s.members.size());
        s.near_value = y[near];
        s.best_point = X.row(s.best).transpose();
        s.worst_point = X.row(s.worst).transpose();
        map.lookup.emplace(cell, static_cast<int>(map.cells.size()));
        map.cells.push_back(std::move(s));
    }
    return map;
}

AbsorbingChain absorbing_chain(const CellGrid& grid, const std::vector<long long>& cells,
                               const std::vector<double>& values) {
    if (cells.size() != values.size()) throw InvalidArgument("absorbing chain: cells/values length mismatch");
    const int n = static_cast<int>(cells.size());
    std::unordered_map<long long, int> state;
    for (int s = 0; s < n; ++s) state.emplace(cells[s], s);

    AbsorbingChain c{cells, values, std::vector<std::vector<std::pair<int, double>>>(n), {}, {}};
    std::vector<int> attractor_pos(n, -1);
    for (int s = 0; s < n; ++s) {
        std::vector<int> better;
        for (long long nb : grid.neighbors(cells[s])) {
            const auto it = state.find(nb);
            if (it != state.end() && values[it->second] < values[s]) better.push_back(it->second);
        }
        std::sort(better.begin(), better.end());
        for (int b : better) c.transitions[s].emplace_back(b, 1.0 / static_cast<double>(better.size()));
        if (better.empty()) {
            attractor_pos[s] = static_cast<int>(c.attractors.size());
            c.attractors.push_back(s);
        }
    }

    // transitions only lead to strictly smaller values, so visiting states in
    // ascending value order resolves every successor before its predecessors
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });
    c.absorption.resize(n);
    for (int s : order) {
        if (attractor_pos[s] >= 0) {
            c.absorption[s] = {{attractor_pos[s], 1.0}};
            continue;
        }
        std::map<int, double> acc;
        for (const auto& [t, p] : c.transitions[s])
            for (const auto& [a, q] : c.absorption[t]) acc[a] += p * q;
        c.absorption[s].assign(acc.begin(), acc.end());
    }
    return c;
}

AbsorbingChain absorbing_chain(const CellMap& map, Scheme scheme) {
    std::vector<long long> cells;
    std::vector<double> values;
    for (const auto& s : map.cells) {
        cells.push_back(s.cell);
        values.push_back(s.representative(scheme));
    }
    return absorbing_chain(map.grid, cells, values);
}

namespace {

void add_mean_sd(GroupBuilder& g, const std::string& stem, const std::vector<double>& v) {
    g.add(stem + ".mean", v.empty() ? FeatureValue{} : stats::mean(v));
    g.add(stem + ".sd", stats::sd(v));
}

void add_five(GroupBuilder& g, const std::string& stem, const std::vector<double>& v) {
    g.add(stem + ".min", v.empty() ? FeatureValue{} : *std::min_element(v.begin(), v.end()));
    g.add(stem + ".mean", v.empty() ? FeatureValue{} : stats::mean(v));
    g.add(stem + ".median", v.empty() ? FeatureValue{} : stats::median(v));
    g.add(stem + ".max", v.empty() ? FeatureValue{} : *std::max_element(v.begin(), v.end()));
    g.add(stem + ".sd", stats::sd(v));
}

constexpr double kCertain = 1.0 - 1e-12;

}  // namespace

FeatureVector cm_angle(const CellMap& map, const FeatureConfig& config) {
    GroupBuilder g("cm_angle", config.record_runtime);
    const auto range = map.global_worst - map.global_best;
    std::vector<double> to_best, to_worst, angle, yratio;
    for (const auto& s : map.cells) {
        if (s.members.size() < 2) continue;
        const Vector vb = s.best_point - s.center, vw = s.worst_point - s.center;
        to_best.push_back(vb.norm());
        to_worst.push_back(vw.norm());
        if (vb.norm() > 0 && vw.norm() > 0) {
            const double c = std::clamp(vb.dot(vw) / (vb.norm() * vw.norm()), -1.0, 1.0);
            angle.push_back(std::acos(c) * 180.0 / std::numbers::pi);
        }
        yratio.push_back(range > 0 ? (s.worst_value - s.best_value) / range : 0.0);
    }
    add_mean_sd(g, "dist_ctr2best", to_best);
    add_mean_sd(g, "dist_ctr2worst", to_worst);
    add_mean_sd(g, "angle", angle);
    add_mean_sd(g, "y_ratio_best2worst", yratio);
    return g.finish();
}

FeatureVector cm_conv(const CellMap& map, const FeatureConfig& config) {
    GroupBuilder g("cm_conv", config.record_runtime);
    struct Triple {
        int lo, mid, hi;
    };
    std::vector<Triple> triples;
    for (int s = 0; s < static_cast<int>(map.cells.size()); ++s)
        for (int axis = 0; axis < map.grid.dim(); ++axis) {
            const int lo = map.find(map.grid.step(map.cells[s].cell, axis, -1));
            const int hi = map.find(map.grid.step(map.cells[s].cell, axis, +1));
            if (lo >= 0 && hi >= 0) triples.push_back({lo, s, hi});
        }
    if (triples.empty()) {
        for (const char* n : {"concave.hard", "concave.soft", "convex.hard", "convex.soft"}) g.add_undefined(n);
        return g.finish();
    }
    if (static_cast<int>(triples.size()) > config.conv_samples) {
        std::mt19937_64 rng(derive_seed(config.seed, 0xc0));
        std::shuffle(triples.begin(), triples.end(), rng);
        triples.resize(config.conv_samples);
    }
    int cvh = 0, cvs = 0, cch = 0, ccs = 0;
    for (const auto& t : triples) {
        const double f1 = map.cells[t.lo].near_value, f2 = map.cells[t.mid].near_value,
                     f3 = map.cells[t.hi].near_value;
        cvh += f2 < std::min(f1, f3);
        cvs += f2 < 0.5 * (f1 + f3);
        cch += f2 > std::max(f1, f3);
        ccs += f2 > 0.5 * (f1 + f3);
    }
    const auto n = static_cast<double>(triples.size());
    g.add("concave.hard", cch / n);
    g.add("concave.soft", ccs / n);
    g.add("convex.hard", cvh / n);
    g.add("convex.soft", cvs / n);
    return g.finish();
}

FeatureVector cm_grad(const CellMap& map, const RowMatrix& X, const Vector& y, const FeatureConfig& config) {
    GroupBuilder g("cm_grad", config.record_runtime);
    std::vector<double> homogeneity;
    for (const auto& s : map.cells) {
        if (s.members.size() < 2) continue;
        config.deadline.check("cm_grad");
        Vector sum = Vector::Zero(X.cols());
        int count = 0;
        for (int i : s.members) {
            int j = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int k : s.members) {
                if (k == i) continue;
                const double d = (X.row(i) - X.row(k)).squaredNorm();
                if (d < best) {
                    best = d;
                    j = k;
                }
            }
            if (!(best > 0)) continue;
            Vector u = (X.row(j) - X.row(i)).transpose() / std::sqrt(best);
            // point from the worse of the pair to the better one
            const bool j_better = y[j] < y[i] || (y[j] == y[i] && j < i);
            if (!j_better) u = -u;
            sum += u;
            ++count;
        }
        if (count > 0) homogeneity.push_back(sum.norm() / count);
    }
    add_mean_sd(g, "grad_homo", homogeneity);
    return g.finish();
}

FeatureVector gcm(const CellMap& map, const FeatureConfig& config) {
    GroupBuilder g("gcm", config.record_runtime);
    for (Scheme scheme : kAllSchemes) {
        config.deadline.check("gcm");
        const auto t0 = g.elapsed();
        const std::string p = scheme_name(scheme);
        const auto chain = absorbing_chain(map, scheme);
        const auto n = static_cast<double>(chain.cells.size());
        const auto k = chain.attractors.size();

        std::vector<double> prob(k, 0.0), certain(k, 0.0), uncertain(k, 0.0);
        int uncertain_cells = 0;
        double reach = 0;
        for (const auto& abs : chain.absorption) {
            const bool sure = abs.size() == 1 && abs.front().second >= kCertain;
            uncertain_cells += !sure;
            reach += static_cast<double>(abs.size());
            for (const auto& [a, q] : abs) {
                prob[a] += q;
                (sure ? certain : uncertain)[a] += 1;
            }
        }
        for (std::size_t a = 0; a < k; ++a) {
            prob[a] /= n;
            certain[a] /= n;
            uncertain[a] /= n;
        }

        std::size_t best = 0;
        int tied = 0;
        double best_value = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < k; ++a) {
            const double v = chain.values[chain.attractors[a]];
            if (v < best_value) {
                best_value = v;
                best = a;
                tied = 1;
            } else if (v == best_value) {
                ++tied;
            }
        }

        g.add(p + ".attractors", static_cast<double>(k));
        g.add(p + ".pcells", static_cast<double>(k) / n);
        g.add(p + ".tcells", (n - static_cast<double>(k)) / n);
        g.add(p + ".uncertain", uncertain_cells / n);
        add_five(g, p + ".basin_prob", prob);
        add_five(g, p + ".basin_certain", certain);
        add_five(g, p + ".basin_uncertain", uncertain);
        g.add(p + ".best_attr.prob", prob[best]);
        g.add(p + ".best_attr.no", static_cast<double>(tied));
        g.add(p + ".best_attr.certain", certain[best]);
        g.add(p + ".reach.mean", reach / n);
        g.add_costs(p, g.elapsed() - t0);
    }
    return g.finish();
}

}  // namespace ela::features
