#include "elascale/elascale.h"

#include "ela/dimred.hpp"
#include "ela/features/compute.hpp"
#include "ela/harness.hpp"
#include "ela/io.hpp"
#include "ela/sampling.hpp"
#include "ela/testbed.hpp"

#include <json.hpp>

#include <cstring>
#include <optional>
#include <set>
#include <string>

using json = nlohmann::json;

struct ela_sample {
    ela::RowMatrix points;
    ela::Vector objectives;
    ela::Bounds bounds;
    std::optional<ela::ReductionTransform> transform;
};

struct ela_features {
    ela::FeatureVector fv;
};

struct ela_table {
    ela::io::Table table;
};

namespace {

thread_local std::string g_last_error;

ela_status fail(ela_status s, const std::string& msg) {
    g_last_error = msg;
    return s;
}

template <typename Fn>
ela_status guarded(Fn&& fn) {
    try {
        g_last_error.clear();
        fn();
        return ELA_OK;
    } catch (const ela::Error& e) {
        switch (e.kind()) {
            case ela::ErrorKind::invalid_argument: return fail(ELA_ERR_CONFIG, e.what());
            case ela::ErrorKind::budget_exceeded: return fail(ELA_ERR_TIMEOUT, e.what());
            case ela::ErrorKind::numerical: return fail(ELA_ERR_NUMERIC, e.what());
            case ela::ErrorKind::io: return fail(ELA_ERR_IO, e.what());
        }
        return fail(ELA_ERR_INTERNAL, e.what());
    } catch (const json::exception& e) {
        return fail(ELA_ERR_CONFIG, std::string("config: ") + e.what());
    } catch (const std::bad_alloc&) {
        return fail(ELA_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(ELA_ERR_INTERNAL, e.what());
    }
}

void require(const void* p, const char* what) {
    if (!p) throw ela::InvalidArgument(std::string(what) + " must not be NULL");
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    for (char c : s + ",") {
        if (c == ',') {
            if (!item.empty()) out.push_back(item);
            item.clear();
        } else if (c != ' ') {
            item += c;
        }
    }
    return out;
}

// ---- config helpers

class Config {
public:
    Config(const char* text, std::set<std::string> allowed) {
        j_ = text && *text ? json::parse(text) : json::object();
        if (!j_.is_object()) throw ela::InvalidArgument("config must be a JSON object");
        for (const auto& [k, v] : j_.items())
            if (!allowed.contains(k)) throw ela::InvalidArgument("unknown config key '" + k + "'");
    }

    bool has(const char* key) const { return j_.contains(key) && !j_[key].is_null(); }

    template <typename T>
    T get(const char* key, T fallback) const {
        if (!has(key)) return fallback;
        try {
            return j_[key].get<T>();
        } catch (const json::exception&) {
            throw ela::InvalidArgument(std::string("config key '") + key + "' has the wrong type");
        }
    }

    // array of strings or one comma-separated string
    std::vector<std::string> list(const char* key, std::vector<std::string> fallback) const {
        if (!has(key)) return fallback;
        const auto& v = j_[key];
        std::vector<std::string> out;
        if (v.is_string()) {
            out = split_list(v.get<std::string>());
        } else if (v.is_array()) {
            for (const auto& x : v) out.push_back(x.is_string() ? x.get<std::string>() : x.dump());
        } else {
            throw ela::InvalidArgument(std::string("config key '") + key + "' must be a list");
        }
        return out;
    }

    std::vector<int> ints(const char* key, std::vector<int> fallback) const {
        if (!has(key)) return fallback;
        std::vector<int> out;
        for (const auto& s : list(key, {})) {
            std::size_t pos = 0;
            int v = 0;
            try {
                v = std::stoi(s, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != s.size() || s.empty()) throw ela::InvalidArgument(std::string("config key '") + key + "': bad integer '" + s + "'");
            out.push_back(v);
        }
        return out;
    }

private:
    json j_;
};

const std::set<std::string> kFeatureKeys{"blocks",      "record_runtime", "budget_seconds", "level_folds",
                                         "ic_grid_points", "cell_limit",  "conv_samples",  "limo_blocks"};

std::set<std::string> keys(std::initializer_list<const char*> extra, bool with_features = true) {
    std::set<std::string> s(extra.begin(), extra.end());
    if (with_features) s.insert(kFeatureKeys.begin(), kFeatureKeys.end());
    return s;
}

ela::FeatureConfig feature_config(const Config& c, std::uint64_t seed) {
    ela::FeatureConfig f;
    f.seed = seed;
    f.blocks = c.get("blocks", f.blocks);
    f.record_runtime = c.get("record_runtime", f.record_runtime);
    f.level_folds = c.get("level_folds", f.level_folds);
    f.ic_grid_points = c.get("ic_grid_points", f.ic_grid_points);
    f.cell_limit = c.get("cell_limit", f.cell_limit);
    f.conv_samples = c.get("conv_samples", f.conv_samples);
    f.limo_blocks = c.get("limo_blocks", f.limo_blocks);
    if (c.has("budget_seconds")) f.deadline = ela::Deadline::after(c.get("budget_seconds", 0.0));
    if (f.level_folds < 2) throw ela::InvalidArgument("level_folds must be >= 2");
    if (f.ic_grid_points < 2) throw ela::InvalidArgument("ic_grid_points must be >= 2");
    if (f.conv_samples < 1) throw ela::InvalidArgument("conv_samples must be >= 1");
    return f;
}

std::vector<ela::Property> tasks(const Config& c) {
    const auto names = c.list("tasks", {"all"});
    std::vector<ela::Property> out;
    for (const auto& n : names) {
        if (n == "all") {
            out.assign(ela::kAllProperties.begin(), ela::kAllProperties.end());
            return out;
        }
        out.push_back(ela::parse_property(n));
    }
    if (out.empty()) throw ela::InvalidArgument("no tasks given");
    return out;
}

ela::harness::DatasetOptions dataset_options(const Config& c) {
    ela::harness::DatasetOptions o;
    o.dim = c.get("dim", o.dim);
    o.function_ids = c.ints("functions", {});
    o.instances = c.get("instances", o.instances);
    o.sample_size = c.get("size", o.sample_size);
    o.m = c.get("m", o.m);
    o.seed = c.get<std::uint64_t>("seed", o.seed);
    o.jobs = c.get("jobs", o.jobs);
    o.features = feature_config(c, o.seed);
    if (o.dim < 2) throw ela::InvalidArgument("dim must be >= 2");
    for (int f : o.function_ids) ela::function_info(f);
    return o;
}

ela::io::Table features_table(const std::vector<std::string>& lead, const ela::FeatureVector& fv) {
    ela::io::Table t;
    t.columns = {"function_id", "instance", "rep"};
    std::vector<std::string> row = lead;
    for (const auto& e : fv.entries) {
        t.columns.push_back(e.name);
        row.push_back(ela::io::format_value(e.value));
    }
    t.rows.push_back(std::move(row));
    return t;
}

ela::FeatureVector compute_groups(const ela::FeatureInput& input, const std::vector<std::string>& groups,
                                  const ela::FeatureConfig& cfg) {
    if (groups.empty()) throw ela::InvalidArgument("no feature groups given");
    ela::FeatureVector out;
    for (const auto& g : groups) out.append(ela::compute_group(g, input, cfg));
    return out;
}

ela::FeatureInput input_of(const ela_sample& s) {
    return {s.points, s.objectives, s.bounds, s.transform.has_value()};
}

template <typename T>
void put(T** out, T* value) {
    if (out) *out = value;
    else delete value;
}

}  // namespace

extern "C" {

const char* ela_version(void) { return "1.0.0"; }
const char* ela_last_error(void) { return g_last_error.c_str(); }

const char* ela_status_name(ela_status status) {
    switch (status) {
        case ELA_OK: return "ok";
        case ELA_ERR_INTERNAL: return "internal error";
        case ELA_ERR_CONFIG: return "configuration error";
        case ELA_ERR_TIMEOUT: return "time budget exceeded";
        case ELA_ERR_NUMERIC: return "numerical failure";
        case ELA_ERR_IO: return "i/o error";
    }
    return "unknown status";
}

void ela_string_free(char* s) { std::free(s); }

ela_status ela_suite_size(int* count) {
    return guarded([&] {
        require(count, "count");
        *count = ela::suite_size();
    });
}

ela_status ela_suite_manifest_json(char** out) {
    return guarded([&] {
        require(out, "out");
        json arr = json::array();
        for (const auto& f : ela::suite()) {
            json labels = json::object();
            for (auto p : ela::kAllProperties) labels[std::string(ela::property_name(p))] = std::string(f.labels.name(p));
            arr.push_back({{"function_id", f.id},
                           {"name", std::string(f.name)},
                           {"category", std::string(ela::category_name(f.category))},
                           {"rotated", f.rotated},
                           {"labels", labels}});
        }
        const auto s = arr.dump(2);
        *out = static_cast<char*>(std::malloc(s.size() + 1));
        if (!*out) throw std::bad_alloc();
        std::memcpy(*out, s.c_str(), s.size() + 1);
    });
}

ela_status ela_suite_labels(ela_table** out) {
    return guarded([&] {
        require(out, "out");
        auto t = std::make_unique<ela_table>();
        t->table.columns = {"function_id", "name", "category"};
        for (auto p : ela::kAllProperties) t->table.columns.emplace_back(ela::property_name(p));
        for (const auto& f : ela::suite()) {
            std::vector<std::string> row{std::to_string(f.id), std::string(f.name), std::string(ela::category_name(f.category))};
            for (auto p : ela::kAllProperties) row.emplace_back(f.labels.name(p));
            t->table.rows.push_back(std::move(row));
        }
        *out = t.release();
    });
}

ela_status ela_evaluate(int function_id, int dim, uint64_t instance_seed, const double* x, double* value) {
    return guarded([&] {
        require(x, "x");
        require(value, "value");
        const auto inst = ela::make_instance(function_id, dim, instance_seed);
        *value = inst.evaluate(std::span<const double>(x, static_cast<std::size_t>(dim)));
    });
}

ela_status ela_sample_design(int function_id, int dim, uint64_t instance_seed, int size, uint64_t seed,
                             ela_sample** out) {
    return guarded([&] {
        require(out, "out");
        const auto design = ela::build_design(ela::make_instance(function_id, dim, instance_seed), size, seed);
        *out = new ela_sample{design.points, design.objectives, design.bounds, std::nullopt};
    });
}

ela_status ela_sample_from_arrays(const double* points, const double* objectives, int l, int n, const double* lower,
                                  const double* upper, ela_sample** out) {
    return guarded([&] {
        require(points, "points");
        require(objectives, "objectives");
        require(out, "out");
        if (l < 2 || n < 1) throw ela::InvalidArgument("sample needs l >= 2 and n >= 1");
        auto s = std::make_unique<ela_sample>();
        s->points = Eigen::Map<const ela::RowMatrix>(points, l, n);
        s->objectives = Eigen::Map<const ela::Vector>(objectives, l);
        if (!s->points.allFinite() || !s->objectives.allFinite()) throw ela::InvalidArgument("sample values must be finite");
        if (lower && upper) {
            s->bounds = {Eigen::Map<const ela::Vector>(lower, n), Eigen::Map<const ela::Vector>(upper, n)};
        } else {
            ela::ReducedSample tmp{s->points, s->objectives, {}};
            s->bounds = ela::FeatureInput::from(tmp).bounds;
        }
        s->bounds.validate();
        *out = s.release();
    });
}

ela_status ela_sample_reduce(const ela_sample* sample, int m, ela_sample** out) {
    return guarded([&] {
        require(sample, "sample");
        require(out, "out");
        if (sample->transform) throw ela::InvalidArgument("sample is already reduced");
        auto r = ela::reduce(sample->points, sample->objectives, m);
        auto in = ela::FeatureInput::from(r);
        *out = new ela_sample{std::move(r.points), std::move(r.objectives), std::move(in.bounds), std::move(r.transform)};
    });
}

ela_status ela_sample_shape(const ela_sample* sample, int* l, int* n) {
    return guarded([&] {
        require(sample, "sample");
        if (l) *l = static_cast<int>(sample->points.rows());
        if (n) *n = static_cast<int>(sample->points.cols());
    });
}

ela_status ela_sample_points(const ela_sample* sample, double* out) {
    return guarded([&] {
        require(sample, "sample");
        require(out, "out");
        std::memcpy(out, sample->points.data(), sizeof(double) * static_cast<std::size_t>(sample->points.size()));
    });
}

ela_status ela_sample_objectives(const ela_sample* sample, double* out) {
    return guarded([&] {
        require(sample, "sample");
        require(out, "out");
        std::memcpy(out, sample->objectives.data(), sizeof(double) * static_cast<std::size_t>(sample->objectives.size()));
    });
}

int ela_sample_is_reduced(const ela_sample* sample) { return sample && sample->transform ? 1 : 0; }

ela_status ela_sample_axes(const ela_sample* sample, double* axes, double* explained_variance) {
    return guarded([&] {
        require(sample, "sample");
        if (!sample->transform) throw ela::InvalidArgument("sample is not reduced");
        const auto& t = *sample->transform;
        if (axes) Eigen::Map<ela::RowMatrix>(axes, t.axes.rows(), t.axes.cols()) = t.axes;
        if (explained_variance)
            Eigen::Map<ela::Vector>(explained_variance, t.explained_variance.size()) = t.explained_variance;
    });
}

ela_status ela_sample_write_csv(const ela_sample* sample, const char* path, const char* comment) {
    return guarded([&] {
        require(sample, "sample");
        require(path, "path");
        ela::io::write_csv(path, ela::io::sample_table(sample->points, sample->objectives, sample->transform ? "z" : "x"),
                           comment ? comment : "");
    });
}

ela_status ela_sample_read_csv(const char* path, double lower, double upper, ela_sample** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        auto s = std::make_unique<ela_sample>();
        ela::io::read_sample_csv(path, s->points, s->objectives);
        if (s->points.rows() < 2) throw ela::InvalidArgument(std::string(path) + ": need at least 2 rows");
        s->bounds = ela::Bounds::box(static_cast<int>(s->points.cols()), lower, upper);
        s->bounds.validate();
        *out = s.release();
    });
}

void ela_sample_free(ela_sample* sample) { delete sample; }

ela_status ela_features_compute(const ela_sample* sample, const char* groups, const char* config_json,
                                ela_features** out) {
    return guarded([&] {
        require(sample, "sample");
        require(groups, "groups");
        require(out, "out");
        const Config c(config_json, keys({"seed"}));
        const auto cfg = feature_config(c, c.get<std::uint64_t>("seed", 1));
        *out = new ela_features{compute_groups(input_of(*sample), split_list(groups), cfg)};
    });
}

size_t ela_features_count(const ela_features* f) { return f ? f->fv.entries.size() : 0; }

const char* ela_features_name(const ela_features* f, size_t i) {
    return f && i < f->fv.entries.size() ? f->fv.entries[i].name.c_str() : nullptr;
}

ela_status ela_features_value(const ela_features* f, size_t i, double* value, int* defined) {
    return guarded([&] {
        require(f, "features");
        if (i >= f->fv.entries.size()) throw ela::InvalidArgument("feature index out of range");
        const auto& v = f->fv.entries[i].value;
        if (defined) *defined = v.has_value();
        if (value) *value = v.value_or(std::nan(""));
    });
}

double ela_features_seconds(const ela_features* f) { return f ? f->fv.cost_seconds : 0.0; }
void ela_features_free(ela_features* f) { delete f; }

ela_status ela_group_entry_count(const char* group, int* count) {
    return guarded([&] {
        require(group, "group");
        require(count, "count");
        *count = ela::group_entry_count(group);
    });
}

ela_status ela_run_features(const char* config_json, ela_table** out) {
    return guarded([&] {
        require(out, "out");
        const Config c(config_json,
                       keys({"fid", "dim", "inst", "size", "seed", "groups", "reduced", "m", "in", "lower", "upper", "jobs"}));
        const auto seed = c.get<std::uint64_t>("seed", 1);
        const auto groups = c.list("groups", {});
        ela::RowMatrix X;
        ela::Vector y;
        ela::Bounds bounds;
        std::vector<std::string> lead;
        if (c.has("in")) {
            ela::io::read_sample_csv(c.get<std::string>("in", ""), X, y);
            bounds = ela::Bounds::box(static_cast<int>(X.cols()), c.get("lower", ela::kBoxLower), c.get("upper", ela::kBoxUpper));
            bounds.validate();
            lead = {"NA", "NA", "1"};
        } else {
            const int fid = c.get("fid", 1), dim = c.get("dim", 2);
            const auto inst = c.get<std::uint64_t>("inst", 1);
            const auto design = ela::build_design(ela::make_instance(fid, dim, inst), c.get("size", 0), seed);
            X = design.points;
            y = design.objectives;
            bounds = design.bounds;
            lead = {std::to_string(fid), std::to_string(inst), "1"};
        }
        ela::FeatureInput input{X, y, bounds, false};
        if (c.get("reduced", false)) input = ela::FeatureInput::from(ela::reduce(X, y, c.get("m", 2)));
        const auto fv = compute_groups(input, groups, feature_config(c, seed));
        *out = new ela_table{features_table(lead, fv)};
    });
}

ela_status ela_run_timebench(const char* config_json, ela_table** out) {
    return guarded([&] {
        require(out, "out");
        const Config c(config_json, keys({"groups", "dims", "reps", "size", "m", "seed", "jobs"}));
        ela::harness::TimingOptions o;
        o.groups = c.list("groups", {"ela_distr"});
        o.dims = c.ints("dims", {2, 3, 5, 10, 20, 40, 80, 160});
        o.reps = c.get("reps", o.reps);
        o.sample_size = c.get("size", o.sample_size);
        o.m = c.get("m", o.m);
        o.seed = c.get<std::uint64_t>("seed", o.seed);
        o.budget_seconds = c.get("budget_seconds", o.budget_seconds);
        o.features = feature_config(c, o.seed);
        o.features.deadline = {};
        const auto recs = ela::harness::time_features(o);
        auto t = std::make_unique<ela_table>();
        t->table.columns = {"group", "dim", "sample_size", "rep", "seconds", "status"};
        for (const auto& r : recs)
            t->table.rows.push_back({r.group, std::to_string(r.dim), std::to_string(r.sample_size), std::to_string(r.rep),
                                     r.seconds ? ela::io::format_number(*r.seconds) : "NA", r.status});
        *out = t.release();
    });
}

ela_status ela_run_classify(const char* config_json, ela_table** cv, ela_table** importance) {
    return guarded([&] {
        const Config c(config_json, keys({"dim", "feature_set", "tasks", "cv", "instances", "functions", "size", "m",
                                          "seed", "n_trees", "jobs"}));
        const auto data_opt = dataset_options(c);
        const auto spec = ela::harness::FeatureSetSpec::named(c.get<std::string>("feature_set", "C7-D2"));
        const auto scheme = c.get<std::string>("cv", "lopo");
        if (scheme != "lopo" && scheme != "loio" && scheme != "both")
            throw ela::InvalidArgument("cv must be lopo, loio or both");
        ela::harness::CvOptions co;
        co.n_trees = c.get("n_trees", co.n_trees);
        co.seed = data_opt.seed;
        co.jobs = data_opt.jobs;
        if (co.n_trees < 1) throw ela::InvalidArgument("n_trees must be >= 1");
        const auto task_list = tasks(c);

        const auto data = ela::harness::assemble_dataset(data_opt, spec);
        auto tcv = std::make_unique<ela_table>();
        tcv->table.columns = {"task", "feature_set", "dim", "fold", "accuracy", "cv"};
        std::map<std::string, std::pair<double, int>> ranks;
        std::vector<std::string> order;
        for (auto task : task_list) {
            for (const char* s : {"lopo", "loio"}) {
                if (scheme != "both" && scheme != s) continue;
                const auto r = std::string(s) == "lopo" ? ela::harness::lopo_cv(data, task, co)
                                                        : ela::harness::loio_cv(data, task, co);
                const std::string tn(ela::property_name(task)), dim = std::to_string(data.dim);
                for (const auto& f : r.folds)
                    tcv->table.rows.push_back({tn, spec.name, dim, std::to_string(f.held_out),
                                               f.accuracy ? ela::io::format_number(*f.accuracy) : "NA", s});
                tcv->table.rows.push_back({tn, spec.name, dim, "mean", ela::io::format_number(r.mean_accuracy), s});
                tcv->table.rows.push_back({tn, spec.name, dim, "baseline", ela::io::format_number(r.majority_baseline), s});
                if (std::string(s) == (scheme == "loio" ? "loio" : "lopo"))
                    for (const auto& [name, rank] : r.importance_ranks) {
                        if (!ranks.contains(name)) order.push_back(name);
                        ranks[name].first += rank;
                        ranks[name].second += 1;
                    }
            }
        }
        if (importance) {
            std::vector<std::pair<std::string, double>> avg;
            for (const auto& n : order) avg.emplace_back(n, ranks[n].first / ranks[n].second);
            std::stable_sort(avg.begin(), avg.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
            auto ti = std::make_unique<ela_table>();
            ti->table.columns = {"feature", "avg_rank"};
            for (const auto& [n, v] : avg) ti->table.rows.push_back({n, ela::io::format_number(v)});
            *importance = ti.release();
        }
        put(cv, tcv.release());
    });
}

ela_status ela_run_sweepm(const char* config_json, ela_table** out) {
    return guarded([&] {
        require(out, "out");
        const Config c(config_json, keys({"dims", "m_values", "feature_set", "tasks", "instances", "functions", "size",
                                          "seed", "n_trees", "jobs", "dim", "m"}));
        ela::harness::SweepOptions o;
        o.dims = c.ints("dims", {3, 5, 10});
        o.m_values = c.ints("m_values", {1, 2, 3, 4});
        o.tasks = tasks(c);
        o.feature_set = c.get<std::string>("feature_set", o.feature_set);
        o.dataset = dataset_options(c);
        o.cv.n_trees = c.get("n_trees", o.cv.n_trees);
        o.cv.seed = o.dataset.seed;
        o.cv.jobs = o.dataset.jobs;
        const auto cells = ela::harness::sweep_m(o);
        auto t = std::make_unique<ela_table>();
        t->table.columns = {"dim"};
        for (int m : o.m_values) t->table.columns.push_back("m" + std::to_string(m));
        for (int d : o.dims) {
            std::vector<std::string> row{std::to_string(d)};
            for (const auto& cell : cells)
                if (cell.dim == d) row.push_back(cell.accuracy ? ela::io::format_number(*cell.accuracy) : "Na");
            t->table.rows.push_back(std::move(row));
        }
        *out = t.release();
    });
}

ela_status ela_run_similarity(const char* config_json, ela_table** out) {
    return guarded([&] {
        require(out, "out");
        const Config c(config_json, keys({"dim", "m", "groups", "instances", "functions", "size", "seed", "jobs"}));
        const auto o = dataset_options(c);
        const auto groups = c.list("groups", {"ela_meta"});
        std::vector<ela::harness::GroupRef> refs;
        for (const auto& g : groups) {
            refs.push_back(ela::harness::GroupRef::parse(g));
            if (refs.back().reduced) throw ela::InvalidArgument("similarity groups are given without the d_ prefix");
            refs.push_back({refs.back().group, true});
        }
        const auto rows = ela::harness::compute_rows(o, refs);
        const auto sim = ela::harness::similarity(rows, groups);
        auto t = std::make_unique<ela_table>();
        t->table.columns = {"feature", "tau", "n_functions"};
        for (const auto& s : sim)
            t->table.rows.push_back({s.feature, ela::io::format_value(s.tau), std::to_string(s.n_functions)});
        *out = t.release();
    });
}

size_t ela_table_rows(const ela_table* t) { return t ? t->table.rows.size() : 0; }
size_t ela_table_cols(const ela_table* t) { return t ? t->table.columns.size() : 0; }

const char* ela_table_column(const ela_table* t, size_t c) {
    return t && c < t->table.columns.size() ? t->table.columns[c].c_str() : nullptr;
}

const char* ela_table_cell(const ela_table* t, size_t r, size_t c) {
    if (!t || r >= t->table.rows.size() || c >= t->table.rows[r].size()) return nullptr;
    return t->table.rows[r][c].c_str();
}

ela_status ela_table_write_csv(const ela_table* t, const char* path, const char* comment) {
    return guarded([&] {
        require(t, "table");
        require(path, "path");
        ela::io::write_csv(path, t->table, comment ? comment : "");
    });
}

void ela_table_free(ela_table* t) { delete t; }

}  // extern "C"
