// elascale command-line front end. Links only the C interface.

#include <elascale/elascale.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Failure {
    ela_status status;
    std::string message;
};

void check(ela_status s) {
    if (s != ELA_OK) throw Failure{s, ela_last_error()};
}

void config_error(const std::string& msg) { throw Failure{ELA_ERR_CONFIG, msg}; }

int exit_code(ela_status s) {
    switch (s) {
        case ELA_OK: return 0;
        case ELA_ERR_CONFIG:
        case ELA_ERR_IO: return 2;
        case ELA_ERR_TIMEOUT: return 3;
        case ELA_ERR_NUMERIC: return 4;
        default: return 1;
    }
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

struct TableDeleter {
    void operator()(ela_table* t) const { ela_table_free(t); }
};
using TablePtr = std::unique_ptr<ela_table, TableDeleter>;

struct SampleDeleter {
    void operator()(ela_sample* s) const { ela_sample_free(s); }
};
using SamplePtr = std::unique_ptr<ela_sample, SampleDeleter>;

// One option bound to a config key. The resolved value is the flag when given,
// else the config file entry, else the flag default.
struct Binding {
    std::string key;
    CLI::Option* option;
    std::function<json()> value;
};

class Command {
public:
    Command(CLI::App& app, std::string name, std::string help) : name_(std::move(name)) {
        sub_ = app.add_subcommand(name_, std::move(help));
    }

    template <typename T>
    CLI::Option* bind(const std::string& flag, const std::string& key, T& var, const std::string& help) {
        auto* opt = sub_->add_option(flag, var, help)->capture_default_str();
        bindings_.push_back({key, opt, [&var] { return json(var); }});
        return opt;
    }

    CLI::Option* bind_flag(const std::string& flag, const std::string& key, bool& var, const std::string& help) {
        auto* opt = sub_->add_flag(flag, var, help);
        bindings_.push_back({key, opt, [&var] { return json(var); }});
        return opt;
    }

    // keys that are only meaningful to the front end
    void local(std::initializer_list<const char*> keys) { local_.insert(local_.end(), keys.begin(), keys.end()); }

    json resolve(const json& file) const {
        json out = json::object();
        for (const auto& b : bindings_) {
            if (b.option->count() > 0 || !file.contains(b.key)) out[b.key] = b.value();
            else out[b.key] = file[b.key];
        }
        // remaining keys (feature settings without a flag) go to the library, which validates them
        for (const auto& [k, v] : file.items())
            if (!out.contains(k)) out[k] = v;
        return out;
    }

    json library_config(const json& resolved) const {
        json lib = resolved;
        for (const auto& k : local_) lib.erase(k);
        return lib;
    }

    CLI::App* app() const { return sub_; }
    const std::string& name() const { return name_; }

private:
    std::string name_;
    CLI::App* sub_;
    std::vector<Binding> bindings_;
    std::vector<std::string> local_;
};

struct Globals {
    std::string config_path;
    std::string out_dir;
    int jobs = 1;
};

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream is(path);
    if (!is) config_error("cannot read config file '" + path + "'");
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        config_error("config file '" + path + "': " + e.what());
    }
    if (!j.is_object()) config_error("config file must hold a JSON object");
    return j;
}

// output path inside the output root; refuses paths that leave it
std::string output_path(const Globals& g, const std::string& name) {
    if (name.empty()) config_error("an output path is required");
    const fs::path root = fs::weakly_canonical(fs::absolute(g.out_dir));
    const fs::path p = fs::path(name).is_absolute() ? fs::weakly_canonical(name) : fs::weakly_canonical(root / name);
    const auto rel = p.lexically_relative(root);
    if (rel.empty() || *rel.begin() == "..") config_error("output '" + name + "' lies outside the output directory " + root.string());
    fs::create_directories(p.parent_path());
    return p.string();
}

struct Run {
    json resolved;
    std::string comment;
    std::string lib;
};

Run prepare(const Command& cmd, const Globals& g) {
    Run r;
    r.resolved = cmd.resolve(load_config(g.config_path));
    // the output location is not part of the hash
    json full = r.resolved;
    full.erase("out");
    full.erase("jobs");
    full["command"] = cmd.name();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(full.dump())));
    r.comment = std::string("config_hash=") + buf;
    r.lib = cmd.library_config(r.resolved).dump();
    return r;
}

void write_resolved(const Run& r, const std::string& out, const std::string& command) {
    json full = r.resolved;
    full["command"] = command;
    std::ofstream os(out + ".config.json", std::ios::binary);
    if (!os) throw Failure{ELA_ERR_IO, "cannot write " + out + ".config.json"};
    os << full.dump(2) << '\n';
}

void write_table(const TablePtr& t, const std::string& path, const Run& r) {
    check(ela_table_write_csv(t.get(), path.c_str(), r.comment.c_str()));
}

void print_table(const ela_table* t) {
    const auto cols = ela_table_cols(t);
    for (size_t c = 0; c < cols; ++c) std::cout << (c ? "," : "") << ela_table_column(t, c);
    std::cout << '\n';
    for (size_t r = 0; r < ela_table_rows(t); ++r) {
        for (size_t c = 0; c < cols; ++c) std::cout << (c ? "," : "") << ela_table_cell(t, r, c);
        std::cout << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"elascale: landscape features, dimensionality reduction and experiment harnesses"};
    app.require_subcommand(1);
    Globals g;
    if (const char* root = std::getenv("ELA_OUTPUT_ROOT")) g.out_dir = root;
    else g.out_dir = ".";
    app.add_option("--config", g.config_path, "JSON file with run parameters; flags override it");
    app.add_option("--out-dir", g.out_dir, "output root (default $ELA_OUTPUT_ROOT or .)");
    app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber);

    // suite
    auto* suite = app.add_subcommand("suite", "benchmark suite information");
    suite->require_subcommand(1);
    auto* suite_list = suite->add_subcommand("list", "function ids, names and categories");
    std::string labels_format = "csv", labels_out, manifest_out;
    auto* suite_labels = suite->add_subcommand("labels", "property labels per function");
    suite_labels->add_option("--format", labels_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    suite_labels->add_option("--out", labels_out, "write to a file instead of stdout");
    auto* suite_manifest = suite->add_subcommand("manifest", "JSON manifest of the suite");
    suite_manifest->add_option("--out", manifest_out, "write to a file instead of stdout");

    // sample
    Command sample(app, "sample", "Latin hypercube design of one instance");
    int s_fid = 1, s_dim = 2, s_size = 0;
    std::uint64_t s_inst = 1, s_seed = 1;
    std::string s_out = "design.csv";
    sample.bind("--fid", "fid", s_fid, "function id");
    sample.bind("--dim", "dim", s_dim, "dimension");
    sample.bind("--inst", "inst", s_inst, "instance seed");
    sample.bind("--size", "size", s_size, "sample size (0 = 50 * dim)");
    sample.bind("--seed", "seed", s_seed, "design seed");
    sample.bind("--out", "out", s_out, "output CSV");

    // reduce
    Command reduce(app, "reduce", "weighted-PCA reduction of a design CSV");
    int r_m = 2;
    std::string r_in, r_out = "reduced.csv";
    reduce.bind("--m", "m", r_m, "reduced dimension");
    reduce.bind("--in", "in", r_in, "design CSV (x1..xn,y)");
    reduce.bind("--out", "out", r_out, "output CSV");

    // features
    Command features(app, "features", "compute feature groups on a design");
    int f_fid = 1, f_dim = 2, f_size = 0, f_m = 2, f_blocks = 3;
    std::uint64_t f_inst = 1, f_seed = 1;
    std::string f_groups = "ela_distr", f_in, f_out = "features.csv";
    bool f_reduced = false, f_no_runtime = false;
    double f_budget = 600;
    features.bind("--fid", "fid", f_fid, "function id");
    features.bind("--dim", "dim", f_dim, "dimension");
    features.bind("--inst", "inst", f_inst, "instance seed");
    features.bind("--size", "size", f_size, "sample size (0 = 50 * dim)");
    features.bind("--seed", "seed", f_seed, "design and feature seed");
    features.bind("--groups", "groups", f_groups, "comma-separated groups");
    features.bind_flag("--reduced", "reduced", f_reduced, "compute on the reduced sample (d_ names)");
    features.bind("--m", "m", f_m, "reduced dimension");
    features.bind("--blocks", "blocks", f_blocks, "cell-mapping blocks per dimension");
    features.bind("--budget", "budget_seconds", f_budget, "time budget in seconds");
    features.bind_flag("--no-runtime", "no_runtime", f_no_runtime, "write 0 into costs_runtime entries");
    features.bind("--in", "in", f_in, "design CSV instead of --fid/--dim/--inst");
    features.bind("--out", "out", f_out, "output CSV");
    features.local({"out", "no_runtime"});

    // timebench
    Command timebench(app, "timebench", "feature computation timing");
    std::string t_groups = "ela_distr,ela_meta", t_dims = "2,3,5,10,20,40,80,160", t_out = "timing.csv";
    int t_reps = 5, t_size = 0, t_m = 2;
    std::uint64_t t_seed = 1;
    double t_budget = 600;
    timebench.bind("--groups", "groups", t_groups, "comma-separated groups, d_ prefix for reduced");
    timebench.bind("--dims", "dims", t_dims, "comma-separated dimensions");
    timebench.bind("--reps", "reps", t_reps, "repetitions");
    timebench.bind("--size", "size", t_size, "sample size (0 = 50 * dim)");
    timebench.bind("--m", "m", t_m, "reduced dimension");
    timebench.bind("--seed", "seed", t_seed, "seed");
    timebench.bind("--budget", "budget_seconds", t_budget, "per-run time budget in seconds");
    timebench.bind("--out", "out", t_out, "output CSV");
    timebench.local({"out"});

    // classification family
    struct ClassifyArgs {
        int dim = 5, instances = 15, size = 0, m = 2, n_trees = 100;
        std::uint64_t seed = 1;
        std::string feature_set = "C7-D2", tasks = "all", cv = "lopo", functions, out;
    };
    const auto bind_dataset = [](Command& c, ClassifyArgs& a) {
        c.bind("--dim", "dim", a.dim, "dimension");
        c.bind("--instances", "instances", a.instances, "instances per function");
        c.bind("--functions", "functions", a.functions, "comma-separated function ids (default all)");
        c.bind("--size", "size", a.size, "sample size (0 = 50 * dim)");
        c.bind("--m", "m", a.m, "reduced dimension");
        c.bind("--seed", "seed", a.seed, "seed");
    };
    Command classify(app, "classify", "property classification under cross-validation");
    ClassifyArgs ca;
    ca.out = "cv.csv";
    bind_dataset(classify, ca);
    classify.bind("--feature-set", "feature_set", ca.feature_set, "C7, C7-E2, C7-D2, C7-C4 or C7-D4");
    classify.bind("--tasks", "tasks", ca.tasks, "comma-separated properties or 'all'");
    classify.bind("--cv", "cv", ca.cv, "lopo, loio or both");
    classify.bind("--n-trees", "n_trees", ca.n_trees, "trees per forest");
    classify.bind("--out", "out", ca.out, "output CSV");
    classify.local({"out"});

    Command importance(app, "importance", "average impurity-importance ranks under LOPO");
    ClassifyArgs ia;
    ia.out = "importance.csv";
    ia.tasks = "multimodality";
    bind_dataset(importance, ia);
    importance.bind("--feature-set", "feature_set", ia.feature_set, "feature set");
    importance.bind("--task", "tasks", ia.tasks, "property");
    importance.bind("--n-trees", "n_trees", ia.n_trees, "trees per forest");
    importance.bind("--out", "out", ia.out, "output CSV");
    importance.local({"out"});

    Command sweepm(app, "sweepm", "mean LOPO accuracy over reduced dimensions");
    ClassifyArgs sa;
    sa.out = "sweep.csv";
    std::string sw_dims = "3,5,10", sw_m = "1,2,3,4";
    bind_dataset(sweepm, sa);
    sweepm.bind("--dims", "dims", sw_dims, "comma-separated dimensions");
    sweepm.bind("--m-values", "m_values", sw_m, "comma-separated reduced dimensions");
    sweepm.bind("--feature-set", "feature_set", sa.feature_set, "feature set");
    sweepm.bind("--tasks", "tasks", sa.tasks, "comma-separated properties or 'all'");
    sweepm.bind("--n-trees", "n_trees", sa.n_trees, "trees per forest");
    sweepm.bind("--out", "out", sa.out, "output CSV");
    sweepm.local({"out", "dim", "m"});

    Command similarity(app, "similarity", "Kendall tau between original and reduced features");
    ClassifyArgs ma;
    ma.out = "similarity.csv";
    std::string sim_groups = "ela_meta";
    bind_dataset(similarity, ma);
    similarity.bind("--groups", "groups", sim_groups, "comma-separated groups");
    similarity.bind("--out", "out", ma.out, "output CSV");
    similarity.local({"out"});

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (suite->parsed()) {
            if (suite_list->parsed()) {
                ela_table* raw = nullptr;
                check(ela_suite_labels(&raw));
                TablePtr t(raw);
                for (size_t r = 0; r < ela_table_rows(raw); ++r)
                    std::cout << ela_table_cell(raw, r, 0) << '\t' << ela_table_cell(raw, r, 1) << '\t'
                              << ela_table_cell(raw, r, 2) << '\n';
            } else if (suite_labels->parsed()) {
                if (labels_format == "json") {
                    char* s = nullptr;
                    check(ela_suite_manifest_json(&s));
                    std::string text(s);
                    ela_string_free(s);
                    if (labels_out.empty()) std::cout << text << '\n';
                    else std::ofstream(output_path(g, labels_out)) << text << '\n';
                } else {
                    ela_table* raw = nullptr;
                    check(ela_suite_labels(&raw));
                    TablePtr t(raw);
                    if (labels_out.empty()) print_table(raw);
                    else check(ela_table_write_csv(raw, output_path(g, labels_out).c_str(), nullptr));
                }
            } else if (suite_manifest->parsed()) {
                char* s = nullptr;
                check(ela_suite_manifest_json(&s));
                json j = {{"functions", json::parse(s)}, {"version", ela_version()}};
                ela_string_free(s);
                if (manifest_out.empty()) std::cout << j.dump(2) << '\n';
                else std::ofstream(output_path(g, manifest_out)) << j.dump(2) << '\n';
            }
            return 0;
        }

        if (sample.app()->parsed()) {
            const auto r = prepare(sample, g);
            const auto out = output_path(g, r.resolved["out"].get<std::string>());
            ela_sample* raw = nullptr;
            check(ela_sample_design(r.resolved["fid"].get<int>(), r.resolved["dim"].get<int>(),
                                    r.resolved["inst"].get<std::uint64_t>(), r.resolved["size"].get<int>(),
                                    r.resolved["seed"].get<std::uint64_t>(), &raw));
            SamplePtr s(raw);
            check(ela_sample_write_csv(raw, out.c_str(), r.comment.c_str()));
            write_resolved(r, out, "sample");
            return 0;
        }

        if (reduce.app()->parsed()) {
            const auto r = prepare(reduce, g);
            const auto in = r.resolved["in"].get<std::string>();
            if (in.empty()) config_error("reduce needs --in");
            const auto out = output_path(g, r.resolved["out"].get<std::string>());
            ela_sample* raw = nullptr;
            check(ela_sample_read_csv(in.c_str(), -5.0, 5.0, &raw));
            SamplePtr design(raw);
            ela_sample* red = nullptr;
            check(ela_sample_reduce(raw, r.resolved["m"].get<int>(), &red));
            SamplePtr reduced(red);
            check(ela_sample_write_csv(red, out.c_str(), r.comment.c_str()));
            write_resolved(r, out, "reduce");
            return 0;
        }

        if (features.app()->parsed()) {
            auto r = prepare(features, g);
            json lib = json::parse(r.lib);
            if (r.resolved["no_runtime"].get<bool>()) lib["record_runtime"] = false;
            if (lib["in"].get<std::string>().empty()) lib.erase("in");
            else lib.erase("fid"), lib.erase("dim"), lib.erase("inst"), lib.erase("size");
            lib["jobs"] = g.jobs;
            const auto out = output_path(g, r.resolved["out"].get<std::string>());
            ela_table* raw = nullptr;
            check(ela_run_features(lib.dump().c_str(), &raw));
            TablePtr t(raw);
            write_table(t, out, r);
            write_resolved(r, out, "features");
            return 0;
        }

        if (timebench.app()->parsed()) {
            const auto r = prepare(timebench, g);
            const auto out = output_path(g, r.resolved["out"].get<std::string>());
            ela_table* raw = nullptr;
            check(ela_run_timebench(r.lib.c_str(), &raw));
            TablePtr t(raw);
            write_table(t, out, r);
            write_resolved(r, out, "timebench");
            return 0;
        }

        const auto with_jobs = [&](const Run& r) {
            json lib = json::parse(r.lib);
            lib["jobs"] = g.jobs;
            if (lib.contains("functions") && lib["functions"].get<std::string>().empty()) lib.erase("functions");
            return lib.dump();
        };

        if (classify.app()->parsed() || importance.app()->parsed()) {
            const bool imp = importance.app()->parsed();
            const auto r = prepare(imp ? importance : classify, g);
            const auto out = output_path(g, r.resolved["out"].get<std::string>());
            ela_table *cv = nullptr, *ranks = nullptr;
            check(ela_run_classify(with_jobs(r).c_str(), &cv, &ranks));
            TablePtr tcv(cv), tr(ranks);
            write_table(imp ? tr : tcv, out, r);
            write_resolved(r, out, imp ? "importance" : "classify");
            return 0;
        }

        if (sweepm.app()->parsed()) {
            const auto r = prepare(sweepm, g);
            const auto out = output_path(g, r.resolved["out"].get<std::string>());
            ela_table* raw = nullptr;
            check(ela_run_sweepm(with_jobs(r).c_str(), &raw));
            TablePtr t(raw);
            write_table(t, out, r);
            write_resolved(r, out, "sweepm");
            return 0;
        }

        if (similarity.app()->parsed()) {
            const auto r = prepare(similarity, g);
            const auto out = output_path(g, r.resolved["out"].get<std::string>());
            ela_table* raw = nullptr;
            check(ela_run_similarity(with_jobs(r).c_str(), &raw));
            TablePtr t(raw);
            write_table(t, out, r);
            write_resolved(r, out, "similarity");
            return 0;
        }
    } catch (const Failure& f) {
        std::cerr << json{{"error", ela_status_name(f.status)}, {"code", static_cast<int>(f.status)}, {"message", f.message}}.dump()
                  << '\n';
        return exit_code(f.status);
    } catch (const fs::filesystem_error& e) {
        std::cerr << json{{"error", "i/o error"}, {"code", 5}, {"message", e.what()}}.dump() << '\n';
        return 2;
    }
    return 0;
}
