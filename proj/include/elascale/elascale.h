#ifndef ELASCALE_H
#define ELASCALE_H

/* C interface of the elascale landscape-analysis library.
 *
 * All functions return an ela_status. On failure a message is available from
 * ela_last_error() until the next call on the same thread. Objects are opaque
 * and owned by the caller, who releases them with the matching *_free.
 * Experiment entry points take a JSON object with the run parameters. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define ELA_API __declspec(dllexport)
#else
#  define ELA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ela_status {
    ELA_OK = 0,
    ELA_ERR_INTERNAL = 1,
    ELA_ERR_CONFIG = 2,    /* invalid argument or configuration */
    ELA_ERR_TIMEOUT = 3,   /* time budget exceeded */
    ELA_ERR_NUMERIC = 4,   /* numerical failure */
    ELA_ERR_IO = 5
} ela_status;

typedef struct ela_sample ela_sample;     /* design or reduced sample */
typedef struct ela_features ela_features; /* ordered feature entries */
typedef struct ela_table ela_table;       /* string table written as CSV */

ELA_API const char* ela_version(void);
ELA_API const char* ela_last_error(void);
ELA_API const char* ela_status_name(ela_status status);
ELA_API void ela_string_free(char* s);

/* ---- suite ---- */
ELA_API ela_status ela_suite_size(int* count);
/* JSON array of {function_id, name, category, rotated, labels}; free with ela_string_free */
ELA_API ela_status ela_suite_manifest_json(char** json);
/* function_id, name, category and the seven label columns */
ELA_API ela_status ela_suite_labels(ela_table** out);
ELA_API ela_status ela_evaluate(int function_id, int dim, uint64_t instance_seed, const double* x, double* value);

/* ---- samples ---- */
/* size 0 selects 50 * dim */
ELA_API ela_status ela_sample_design(int function_id, int dim, uint64_t instance_seed, int size, uint64_t seed,
                                     ela_sample** out);
/* row-major points (l x n); lower/upper may be NULL, then the box is the data range */
ELA_API ela_status ela_sample_from_arrays(const double* points, const double* objectives, int l, int n,
                                          const double* lower, const double* upper, ela_sample** out);
ELA_API ela_status ela_sample_reduce(const ela_sample* sample, int m, ela_sample** out);
ELA_API ela_status ela_sample_shape(const ela_sample* sample, int* l, int* n);
ELA_API ela_status ela_sample_points(const ela_sample* sample, double* out);
ELA_API ela_status ela_sample_objectives(const ela_sample* sample, double* out);
ELA_API int ela_sample_is_reduced(const ela_sample* sample);
/* reduced samples only: row-major n x m axes and the m explained variances */
ELA_API ela_status ela_sample_axes(const ela_sample* sample, double* axes, double* explained_variance);
/* columns x1..xn,y (z1..zm,y for reduced samples); comment may be NULL */
ELA_API ela_status ela_sample_write_csv(const ela_sample* sample, const char* path, const char* comment);
ELA_API ela_status ela_sample_read_csv(const char* path, double lower, double upper, ela_sample** out);
ELA_API void ela_sample_free(ela_sample* sample);

/* ---- features ---- */
/* groups: comma-separated group names; config_json may be NULL or "{}" */
ELA_API ela_status ela_features_compute(const ela_sample* sample, const char* groups, const char* config_json,
                                        ela_features** out);
ELA_API size_t ela_features_count(const ela_features* f);
ELA_API const char* ela_features_name(const ela_features* f, size_t i);
/* *defined is 0 for the undefined marker */
ELA_API ela_status ela_features_value(const ela_features* f, size_t i, double* value, int* defined);
ELA_API double ela_features_seconds(const ela_features* f);
ELA_API void ela_features_free(ela_features* f);
/* number of entries of a group, including its two cost entries */
ELA_API ela_status ela_group_entry_count(const char* group, int* count);

/* ---- experiments (JSON in, tables out) ---- */
ELA_API ela_status ela_run_features(const char* config_json, ela_table** out);
ELA_API ela_status ela_run_timebench(const char* config_json, ela_table** out);
/* cv: task,feature_set,dim,fold,accuracy; importance: feature,avg_rank (may be NULL) */
ELA_API ela_status ela_run_classify(const char* config_json, ela_table** cv, ela_table** importance);
ELA_API ela_status ela_run_sweepm(const char* config_json, ela_table** out);
ELA_API ela_status ela_run_similarity(const char* config_json, ela_table** out);

ELA_API size_t ela_table_rows(const ela_table* t);
ELA_API size_t ela_table_cols(const ela_table* t);
ELA_API const char* ela_table_column(const ela_table* t, size_t c);
ELA_API const char* ela_table_cell(const ela_table* t, size_t r, size_t c);
ELA_API ela_status ela_table_write_csv(const ela_table* t, const char* path, const char* comment);
ELA_API void ela_table_free(ela_table* t);

#ifdef __cplusplus
}
#endif

#endif
