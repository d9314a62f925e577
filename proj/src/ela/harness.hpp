#pragma once

#include "ela/features/compute.hpp"
#include "ela/testbed.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

// Experiment drivers: feature timing, property classification under
// cross-validation, the reduced-dimension sweep and original-vs-reduced similarity.
namespace ela::harness {

// a group computed on the original design or, with reduced set, on the reduced sample
struct GroupRef {
    std::string group;
    bool reduced = false;

    std::string name() const { return reduced ? "d_" + group : group; }
    static GroupRef parse(std::string_view name);  // "d_ela_meta" -> {ela_meta, true}
    bool operator==(const GroupRef&) const = default;
};

struct FeatureSetSpec {
    std::string name;
    std::vector<GroupRef> groups;

    // C7, C7-E2, C7-D2, C7-C4, C7-D4
    static FeatureSetSpec named(std::string_view name);
};
const std::vector<std::string>& feature_set_names();

// ---------------------------------------------------------------- datasets

struct DatasetOptions {
    int dim = 2;
    std::vector<int> function_ids;  // empty = whole suite
    int instances = kDefaultInstances;
    int sample_size = 0;            // 0 = 50 * dim
    int m = 2;
    std::uint64_t seed = 1;
    FeatureConfig features;
    int jobs = 1;
};

// feature vectors of one (function, instance) pair, keyed by GroupRef::name()
struct RawRow {
    int function_id = 0;
    int instance = 0;
    PropertyLabels labels;
    std::map<std::string, FeatureVector> groups;
};

// Builds one design per (function, instance) and computes every requested
// group on it; the reduction is computed once per design when needed.
std::vector<RawRow> compute_rows(const DatasetOptions& options, const std::vector<GroupRef>& groups);

// adds groups missing from `rows`, reusing the stored designs' seeds
void extend_rows(std::vector<RawRow>& rows, const DatasetOptions& options, const std::vector<GroupRef>& groups);

struct Dataset {
    std::string feature_set;
    int dim = 0;
    std::vector<int> function_ids;
    std::vector<int> instances;
    std::vector<PropertyLabels> labels;
    std::vector<std::string> feature_names;
    Matrix X;                           // rows x features, undefined values imputed
    std::vector<std::string> dropped;   // constant or all-undefined columns

    int rows() const { return static_cast<int>(X.rows()); }
    std::vector<int> task_labels(Property task) const;
};

// Concatenates the feature set's groups, drops constant and all-undefined
// columns and imputes remaining undefined values by the column median.
// costs_runtime columns are left out unless keep_runtime is set, which keeps
// the matrix reproducible.
Dataset assemble(const std::vector<RawRow>& rows, const FeatureSetSpec& spec, bool keep_runtime = false);
Dataset assemble_dataset(const DatasetOptions& options, const FeatureSetSpec& spec);

// ---------------------------------------------------------- cross-validation

struct CvOptions {
    int n_trees = 100;
    std::uint64_t seed = 1;
    int jobs = 1;
};

struct FoldResult {
    int held_out = 0;      // function id (LOPO) or instance index (LOIO)
    int n_test = 0;
    std::optional<double> accuracy;  // empty when the fold was skipped
    double baseline = 0;   // accuracy of predicting the training majority class
    bool skipped = false;  // training labels had a single class
    std::vector<int> train_rows, test_rows;  // dataset rows used on each side
};

struct CvResult {
    Property task{};
    std::string feature_set;
    int dim = 0;
    std::string scheme;  // "lopo" or "loio"
    std::vector<FoldResult> folds;
    double mean_accuracy = 0;
    double majority_baseline = 0;
    // (feature, average rank over folds), best first; rank 1 = most important
    std::vector<std::pair<std::string, double>> importance_ranks;
};

CvResult lopo_cv(const Dataset& data, Property task, const CvOptions& options = {});
CvResult loio_cv(const Dataset& data, Property task, const CvOptions& options = {});

// -------------------------------------------------------------------- timing

struct TimingOptions {
    std::vector<std::string> groups;  // names, "d_" for reduced
    std::vector<int> dims;
    int reps = 5;
    int sample_size = 0;   // 0 = 50 * dim
    int m = 2;
    std::uint64_t seed = 1;
    double budget_seconds = 600;
    FeatureConfig features;
};

struct TimingRecord {
    std::string group;
    int dim = 0;
    int sample_size = 0;
    int rep = 0;
    std::optional<double> seconds;
    std::string status;  // ok, timeout, unsupported
};

// Times each (group, dim, rep) on instance 1 of function 1. Design generation
// is not timed; reduced groups include the reduction. Once a group runs out of
// budget at some dimension, its larger dimensions are recorded as timeouts.
std::vector<TimingRecord> time_features(const TimingOptions& options);

// median seconds over the ok records of (group, dim)
std::optional<double> median_seconds(const std::vector<TimingRecord>& records, std::string_view group, int dim);

// ------------------------------------------------------------------ m sweep

struct SweepOptions {
    std::vector<int> dims;
    std::vector<int> m_values;
    std::vector<Property> tasks{kAllProperties.begin(), kAllProperties.end()};
    std::string feature_set = "C7-D2";
    DatasetOptions dataset;  // dim and m are overwritten per cell
    CvOptions cv;
};

struct SweepCell {
    int dim = 0;
    int m = 0;
    std::optional<double> accuracy;  // empty ("Na") when m >= dim
};

std::vector<SweepCell> sweep_m(const SweepOptions& options);

// --------------------------------------------------------------- similarity

struct SimilarityRow {
    std::string feature;  // original name
    FeatureValue tau;
    int n_functions = 0;
};

// Per-function means over instances of `feature` (undefined values ignored).
// Every original feature with a d_-prefixed counterpart is compared; features
// whose per-function means contain ties on either side are skipped.
std::vector<SimilarityRow> similarity(const std::vector<RawRow>& rows, const std::vector<std::string>& groups);

}  // namespace ela::harness
