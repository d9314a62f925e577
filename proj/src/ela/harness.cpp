#include "ela/harness.hpp"

#include "ela/dimred.hpp"
#include "ela/ml/forest.hpp"
#include "ela/ml/kendall.hpp"
#include "ela/parallel.hpp"
#include "ela/sampling.hpp"
#include "ela/stats.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>

namespace ela::harness {

GroupRef GroupRef::parse(std::string_view name) {
    GroupRef g;
    if (name.starts_with("d_")) {
        g.reduced = true;
        name.remove_prefix(2);
    }
    g.group = std::string(name);
    group_entry_count(g.group);  // validates the name
    return g;
}

const std::vector<std::string>& feature_set_names() {
    static const std::vector<std::string> names{"C7", "C7-E2", "C7-D2", "C7-C4", "C7-D4"};
    return names;
}

FeatureSetSpec FeatureSetSpec::named(std::string_view name) {
    FeatureSetSpec s{std::string(name), {}};
    for (const char* g : {"ela_distr", "basic", "ic", "disp", "nbc", "pca", "limo"}) s.groups.push_back({g, false});
    const auto add = [&](std::initializer_list<const char*> groups, bool reduced) {
        for (const char* g : groups) s.groups.push_back({g, reduced});
    };
    if (name == "C7") {
    } else if (name == "C7-E2") {
        add({"ela_level", "ela_meta"}, false);
    } else if (name == "C7-D2") {
        add({"ela_level", "ela_meta"}, true);
    } else if (name == "C7-C4") {
        add({"gcm", "cm_angle", "cm_conv", "cm_grad"}, false);
    } else if (name == "C7-D4") {
        add({"gcm", "cm_angle", "cm_conv", "cm_grad"}, true);
    } else {
        throw InvalidArgument("unknown feature set '" + std::string(name) + "' (expected C7, C7-E2, C7-D2, C7-C4 or C7-D4)");
    }
    return s;
}

// ---------------------------------------------------------------- datasets

namespace {

std::vector<int> resolve_functions(const DatasetOptions& o) {
    if (!o.function_ids.empty()) return o.function_ids;
    std::vector<int> ids(suite_size());
    std::iota(ids.begin(), ids.end(), 1);
    return ids;
}

void fill_row(RawRow& row, const DatasetOptions& o, const std::vector<GroupRef>& groups) {
    std::vector<GroupRef> todo;
    for (const auto& g : groups)
        if (!row.groups.contains(g.name())) todo.push_back(g);
    if (todo.empty()) return;

    const auto inst = make_instance(row.function_id, o.dim, static_cast<std::uint64_t>(row.instance));
    const auto design = build_design(inst, o.sample_size, derive_seed(o.seed, row.function_id, row.instance));
    FeatureConfig cfg = o.features;
    cfg.seed = derive_seed(o.seed, row.function_id, row.instance, 0xfea7);
    const auto original = FeatureInput::from(design);
    std::optional<FeatureInput> reduced;
    for (const auto& g : todo) {
        if (g.reduced && !reduced) reduced = FeatureInput::from(reduce(design, o.m));
        row.groups[g.name()] = compute_group(g.group, g.reduced ? *reduced : original, cfg);
    }
}

}  // namespace

void extend_rows(std::vector<RawRow>& rows, const DatasetOptions& options, const std::vector<GroupRef>& groups) {
    parallel_for(static_cast<int>(rows.size()), options.jobs, [&](int r) { fill_row(rows[r], options, groups); });
}

std::vector<RawRow> compute_rows(const DatasetOptions& options, const std::vector<GroupRef>& groups) {
    if (options.instances < 1) throw InvalidArgument("dataset: instances must be >= 1");
    std::vector<RawRow> rows;
    for (int fid : resolve_functions(options)) {
        const auto& info = function_info(fid);
        for (int i = 1; i <= options.instances; ++i) rows.push_back({fid, i, info.labels, {}});
    }
    extend_rows(rows, options, groups);
    return rows;
}

std::vector<int> Dataset::task_labels(Property task) const {
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) out[i] = labels[i][task];
    return out;
}

Dataset assemble(const std::vector<RawRow>& rows, const FeatureSetSpec& spec, bool keep_runtime) {
    if (rows.empty()) throw InvalidArgument("dataset: no rows");
    Dataset d;
    d.feature_set = spec.name;
    std::vector<std::string> names;
    for (const auto& g : spec.groups) {
        const auto it = rows.front().groups.find(g.name());
        if (it == rows.front().groups.end()) throw InvalidArgument("dataset: group " + g.name() + " was not computed");
        for (const auto& e : it->second.entries)
            if (keep_runtime || !e.name.ends_with("costs_runtime")) names.push_back(e.name);
    }
    const auto n = static_cast<Eigen::Index>(rows.size());
    Matrix raw(n, static_cast<Eigen::Index>(names.size()));
    for (Eigen::Index r = 0; r < n; ++r) {
        Eigen::Index c = 0;
        for (const auto& g : spec.groups) {
            const auto it = rows[r].groups.find(g.name());
            if (it == rows[r].groups.end()) throw InvalidArgument("dataset: group " + g.name() + " missing in a row");
            for (const auto& e : it->second.entries) {
                if (!keep_runtime && e.name.ends_with("costs_runtime")) continue;
                raw(r, c++) = e.value.value_or(std::nan(""));
            }
        }
    }

    std::vector<Eigen::Index> keep;
    for (Eigen::Index c = 0; c < raw.cols(); ++c) {
        std::vector<double> defined;
        for (Eigen::Index r = 0; r < n; ++r)
            if (!std::isnan(raw(r, c))) defined.push_back(raw(r, c));
        const bool constant = defined.empty() ||
                              std::all_of(defined.begin(), defined.end(), [&](double v) { return v == defined[0]; });
        if (constant) {
            d.dropped.push_back(names[c]);
            continue;
        }
        const double med = stats::median(defined);
        for (Eigen::Index r = 0; r < n; ++r)
            if (std::isnan(raw(r, c))) raw(r, c) = med;
        keep.push_back(c);
    }
    if (keep.empty()) throw InvalidArgument("dataset: every feature column is constant or undefined");
    d.X.resize(n, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
        d.X.col(static_cast<Eigen::Index>(k)) = raw.col(keep[k]);
        d.feature_names.push_back(names[keep[k]]);
    }
    for (const auto& r : rows) {
        d.function_ids.push_back(r.function_id);
        d.instances.push_back(r.instance);
        d.labels.push_back(r.labels);
    }
    return d;
}

Dataset assemble_dataset(const DatasetOptions& options, const FeatureSetSpec& spec) {
    auto d = assemble(compute_rows(options, spec.groups), spec);
    d.dim = options.dim;
    return d;
}

// ---------------------------------------------------------- cross-validation

namespace {

int majority_label(const std::vector<int>& labels) {
    std::map<int, int> counts;
    for (int v : labels) ++counts[v];
    int best = counts.begin()->first;
    for (const auto& [v, c] : counts)
        if (c > counts[best]) best = v;
    return best;
}

// ranks 1..p by descending value, ties share their average rank
std::vector<double> descending_ranks(const Vector& v) {
    const auto p = static_cast<int>(v.size());
    std::vector<int> idx(p);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] > v[b]; });
    std::vector<double> rank(p);
    for (int i = 0; i < p;) {
        int j = i;
        while (j + 1 < p && v[idx[j + 1]] == v[idx[i]]) ++j;
        for (int k = i; k <= j; ++k) rank[idx[k]] = 0.5 * (i + j) + 1;
        i = j + 1;
    }
    return rank;
}

CvResult grouped_cv(const Dataset& data, Property task, const CvOptions& options, const std::vector<int>& keys,
                    const char* scheme) {
    if (data.rows() == 0) throw InvalidArgument("cv: empty dataset");
    const auto labels = data.task_labels(task);
    std::vector<int> folds(keys.begin(), keys.end());
    std::sort(folds.begin(), folds.end());
    folds.erase(std::unique(folds.begin(), folds.end()), folds.end());
    if (folds.size() < 2) throw InvalidArgument("cv: need at least two groups");

    CvResult res;
    res.task = task;
    res.feature_set = data.feature_set;
    res.dim = data.dim;
    res.scheme = scheme;
    res.folds.resize(folds.size());
    std::vector<std::vector<double>> ranks(folds.size());

    parallel_for(static_cast<int>(folds.size()), options.jobs, [&](int f) {
        std::vector<int> train, test;
        for (int r = 0; r < data.rows(); ++r) (keys[r] == folds[f] ? test : train).push_back(r);
        auto& out = res.folds[f];
        out.held_out = folds[f];
        out.n_test = static_cast<int>(test.size());
        out.train_rows = train;
        out.test_rows = test;
        std::vector<int> ytr;
        for (int r : train) ytr.push_back(labels[r]);
        const int majority = majority_label(ytr);
        int base_hits = 0;
        for (int r : test) base_hits += labels[r] == majority;
        out.baseline = static_cast<double>(base_hits) / static_cast<double>(test.size());
        if (std::all_of(ytr.begin(), ytr.end(), [&](int v) { return v == ytr[0]; })) {
            out.skipped = true;
            return;
        }
        Matrix Xtr(train.size(), data.X.cols()), Xte(test.size(), data.X.cols());
        for (std::size_t i = 0; i < train.size(); ++i) Xtr.row(i) = data.X.row(train[i]);
        for (std::size_t i = 0; i < test.size(); ++i) Xte.row(i) = data.X.row(test[i]);
        ml::ForestOptions fo;
        fo.n_trees = options.n_trees;
        fo.seed = derive_seed(options.seed, static_cast<int>(task), folds[f]);
        const auto forest = ml::Forest::train(Xtr, ytr, fo);
        const auto pred = forest.predict(Xte);
        int hits = 0;
        for (std::size_t i = 0; i < test.size(); ++i) hits += pred[i] == labels[test[i]];
        out.accuracy = static_cast<double>(hits) / static_cast<double>(test.size());
        ranks[f] = descending_ranks(forest.importances());
    });

    int used = 0;
    std::vector<double> avg(data.X.cols(), 0.0);
    for (std::size_t f = 0; f < folds.size(); ++f) {
        res.majority_baseline += res.folds[f].baseline;
        if (!res.folds[f].accuracy) continue;
        ++used;
        res.mean_accuracy += *res.folds[f].accuracy;
        for (std::size_t j = 0; j < avg.size(); ++j) avg[j] += ranks[f][j];
    }
    res.majority_baseline /= static_cast<double>(folds.size());
    if (used == 0) throw InvalidArgument("cv: every fold had a single training class");
    res.mean_accuracy /= used;
    for (std::size_t j = 0; j < avg.size(); ++j) res.importance_ranks.emplace_back(data.feature_names[j], avg[j] / used);
    std::stable_sort(res.importance_ranks.begin(), res.importance_ranks.end(),
                     [](const auto& a, const auto& b) { return a.second < b.second; });
    return res;
}

}  // namespace

CvResult lopo_cv(const Dataset& data, Property task, const CvOptions& options) {
    return grouped_cv(data, task, options, data.function_ids, "lopo");
}

CvResult loio_cv(const Dataset& data, Property task, const CvOptions& options) {
    return grouped_cv(data, task, options, data.instances, "loio");
}

// -------------------------------------------------------------------- timing

std::vector<TimingRecord> time_features(const TimingOptions& options) {
    if (options.reps < 1) throw InvalidArgument("timing: reps must be >= 1");
    std::vector<GroupRef> groups;
    for (const auto& g : options.groups) groups.push_back(GroupRef::parse(g));
    std::vector<int> dims = options.dims;
    std::sort(dims.begin(), dims.end());

    std::vector<TimingRecord> out;
    std::set<std::string> exhausted;
    for (int dim : dims) {
        if (dim < 2) throw InvalidArgument("timing: dimensions must be >= 2");
        const int l = options.sample_size > 0 ? options.sample_size : default_sample_size(dim);
        const auto inst = make_instance(1, dim, 1);
        for (int rep = 1; rep <= options.reps; ++rep) {
            const auto design = build_design(inst, l, derive_seed(options.seed, dim, rep));
            const auto input = FeatureInput::from(design);
            for (const auto& g : groups) {
                TimingRecord rec{g.name(), dim, l, rep, std::nullopt, "timeout"};
                if (exhausted.contains(g.name())) {
                    out.push_back(rec);
                    continue;
                }
                if (g.reduced && options.m >= dim) {
                    rec.status = "unsupported";
                    out.push_back(rec);
                    continue;
                }
                FeatureConfig cfg = options.features;
                cfg.seed = derive_seed(options.seed, dim, rep, 0xfea7);
                cfg.deadline = Deadline::after(options.budget_seconds);
                const auto start = std::chrono::steady_clock::now();
                try {
                    if (g.reduced) {
                        const auto red = FeatureInput::from(reduce(design, options.m));
                        compute_group(g.group, red, cfg);
                    } else {
                        compute_group(g.group, input, cfg);
                    }
                    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                    rec.status = "ok";
                } catch (const BudgetExceeded&) {
                    exhausted.insert(g.name());
                } catch (const InvalidArgument&) {
                    // e.g. a cell grid over the size limit
                    rec.status = "unsupported";
                }
                out.push_back(rec);
            }
        }
    }
    return out;
}

std::optional<double> median_seconds(const std::vector<TimingRecord>& records, std::string_view group, int dim) {
    std::vector<double> v;
    for (const auto& r : records)
        if (r.group == group && r.dim == dim && r.seconds) v.push_back(*r.seconds);
    if (v.empty()) return std::nullopt;
    return stats::median(v);
}

// ------------------------------------------------------------------ m sweep

std::vector<SweepCell> sweep_m(const SweepOptions& options) {
    const auto spec = FeatureSetSpec::named(options.feature_set);
    std::vector<SweepCell> out;
    for (int dim : options.dims) {
        DatasetOptions dopt = options.dataset;
        dopt.dim = dim;
        std::vector<GroupRef> original, reduced;
        for (const auto& g : spec.groups) (g.reduced ? reduced : original).push_back(g);
        // groups on the original design do not depend on m
        const auto base = compute_rows(dopt, original);
        for (int m : options.m_values) {
            SweepCell cell{dim, m, std::nullopt};
            if (m < 1) throw InvalidArgument("sweep: m must be >= 1");
            if (m < dim) {
                auto rows = base;
                dopt.m = m;
                extend_rows(rows, dopt, reduced);
                auto data = assemble(rows, spec);
                data.dim = dim;
                double acc = 0;
                for (Property task : options.tasks) acc += lopo_cv(data, task, options.cv).mean_accuracy;
                cell.accuracy = acc / static_cast<double>(options.tasks.size());
            }
            out.push_back(cell);
        }
    }
    return out;
}

// --------------------------------------------------------------- similarity

namespace {

// per-function mean of one feature; empty when some function has no defined value
std::optional<std::vector<double>> function_means(const std::vector<RawRow>& rows, const std::string& group,
                                                  const std::string& feature, const std::vector<int>& fids) {
    std::map<int, std::pair<double, int>> acc;
    for (const auto& r : rows) {
        const auto it = r.groups.find(group);
        if (it == r.groups.end()) return std::nullopt;
        for (const auto& e : it->second.entries)
            if (e.name == feature && e.value) {
                acc[r.function_id].first += *e.value;
                acc[r.function_id].second += 1;
            }
    }
    std::vector<double> out;
    for (int f : fids) {
        const auto it = acc.find(f);
        if (it == acc.end()) return std::nullopt;
        out.push_back(it->second.first / it->second.second);
    }
    return out;
}

bool has_ties(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) != v.end();
}

}  // namespace

std::vector<SimilarityRow> similarity(const std::vector<RawRow>& rows, const std::vector<std::string>& groups) {
    std::vector<int> fids;
    for (const auto& r : rows) fids.push_back(r.function_id);
    std::sort(fids.begin(), fids.end());
    fids.erase(std::unique(fids.begin(), fids.end()), fids.end());
    if (fids.size() < 3) throw InvalidArgument("similarity: need at least 3 functions");

    std::vector<SimilarityRow> out;
    int shared = 0;
    for (const auto& g : groups) {
        const auto first = rows.front().groups.find(g);
        const auto dfirst = rows.front().groups.find("d_" + g);
        if (first == rows.front().groups.end() || dfirst == rows.front().groups.end())
            throw InvalidArgument("similarity: group " + g + " needs both original and d_ features");
        for (const auto& e : first->second.entries) {
            ++shared;
            const auto a = function_means(rows, g, e.name, fids);
            const auto b = function_means(rows, "d_" + g, "d_" + e.name, fids);
            if (!a || !b || has_ties(*a) || has_ties(*b)) continue;
            out.push_back({e.name, ml::kendall_tau(*a, *b), static_cast<int>(fids.size())});
        }
    }
    if (shared == 0) throw InvalidArgument("similarity: no shared features");
    return out;
}

}  // namespace ela::harness
