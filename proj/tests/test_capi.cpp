// exercises the shared library through its C header only

#include <elascale/elascale.h>

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

namespace {

std::string temp_path(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "elascale_capi_test";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

}  // namespace

TEST_CASE("version and status names") {
    CHECK(std::string(ela_version()) == "1.0.0");
    CHECK(std::string(ela_status_name(ELA_ERR_TIMEOUT)).find("budget") != std::string::npos);
}

TEST_CASE("suite through the C interface") {
    int n = 0;
    REQUIRE(ela_suite_size(&n) == ELA_OK);
    CHECK(n >= 10);
    char* text = nullptr;
    REQUIRE(ela_suite_manifest_json(&text) == ELA_OK);
    const auto j = nlohmann::json::parse(text);
    ela_string_free(text);
    REQUIRE(j.is_array());
    CHECK(static_cast<int>(j.size()) == n);
    CHECK(j[0]["function_id"] == 1);
    CHECK(j[0].contains("labels"));

    ela_table* labels = nullptr;
    REQUIRE(ela_suite_labels(&labels) == ELA_OK);
    CHECK(static_cast<int>(ela_table_rows(labels)) == n);
    CHECK(ela_table_cols(labels) == 10);
    CHECK(std::string(ela_table_column(labels, 3)) == "multimodality");
    ela_table_free(labels);

    const double x[2] = {0.0, 0.0};
    double v = -1;
    CHECK(ela_evaluate(1, 2, 1, x, &v) == ELA_OK);
    CHECK(v >= 0);
    CHECK(ela_evaluate(99, 2, 1, x, &v) == ELA_ERR_CONFIG);
    CHECK(std::string(ela_last_error()).find("99") != std::string::npos);
}

TEST_CASE("samples, reduction and features") {
    ela_sample* design = nullptr;
    REQUIRE(ela_sample_design(3, 5, 2, 0, 7, &design) == ELA_OK);
    int l = 0, n = 0;
    ela_sample_shape(design, &l, &n);
    CHECK(l == 250);
    CHECK(n == 5);
    CHECK(ela_sample_is_reduced(design) == 0);

    ela_sample* reduced = nullptr;
    REQUIRE(ela_sample_reduce(design, 2, &reduced) == ELA_OK);
    CHECK(ela_sample_is_reduced(reduced) == 1);
    std::vector<double> axes(10), var(2), y0(250), y1(250);
    CHECK(ela_sample_axes(reduced, axes.data(), var.data()) == ELA_OK);
    CHECK(var[0] >= var[1]);
    ela_sample_objectives(design, y0.data());
    ela_sample_objectives(reduced, y1.data());
    CHECK(y0 == y1);

    ela_sample* bad = nullptr;
    CHECK(ela_sample_reduce(design, 5, &bad) == ELA_ERR_CONFIG);
    CHECK(bad == nullptr);
    CHECK(ela_sample_axes(design, axes.data(), var.data()) == ELA_ERR_CONFIG);

    ela_features* f = nullptr;
    REQUIRE(ela_features_compute(reduced, "ela_meta,nbc", "{\"record_runtime\": false}", &f) == ELA_OK);
    CHECK(ela_features_count(f) == 18);
    CHECK(std::string(ela_features_name(f, 0)).rfind("d_ela_meta.", 0) == 0);
    double v = -1;
    int defined = -1;
    CHECK(ela_features_value(f, 10, &v, &defined) == ELA_OK);
    CHECK(std::string(ela_features_name(f, 10)) == "d_ela_meta.costs_runtime");
    CHECK(defined == 1);
    CHECK(v == 0.0);
    CHECK(ela_features_value(f, 100, &v, &defined) == ELA_ERR_CONFIG);
    CHECK(ela_features_seconds(f) >= 0);
    ela_features_free(f);

    CHECK(ela_features_compute(design, "nope", nullptr, &f) == ELA_ERR_CONFIG);
    CHECK(ela_features_compute(design, "ela_meta", "{\"colour\": 1}", &f) == ELA_ERR_CONFIG);
    CHECK(ela_features_compute(design, "ela_level", "{\"budget_seconds\": 0}", &f) == ELA_ERR_TIMEOUT);
    CHECK(ela_features_compute(design, "gcm", "{\"cell_limit\": 100}", &f) == ELA_ERR_CONFIG);

    int count = 0;
    CHECK(ela_group_entry_count("gcm", &count) == ELA_OK);
    CHECK(count == 75);

    ela_sample_free(reduced);
    ela_sample_free(design);
}

TEST_CASE("sample csv round trip") {
    ela_sample* design = nullptr;
    REQUIRE(ela_sample_design(1, 3, 1, 20, 1, &design) == ELA_OK);
    const auto path = temp_path("design.csv");
    REQUIRE(ela_sample_write_csv(design, path.c_str(), "hello") == ELA_OK);
    ela_sample* back = nullptr;
    REQUIRE(ela_sample_read_csv(path.c_str(), -5, 5, &back) == ELA_OK);
    std::vector<double> a(60), b(60);
    ela_sample_points(design, a.data());
    ela_sample_points(back, b.data());
    CHECK(a == b);
    ela_sample_free(back);
    ela_sample_free(design);
    CHECK(ela_sample_read_csv(temp_path("missing.csv").c_str(), -5, 5, &back) == ELA_ERR_IO);
}

TEST_CASE("sample from arrays") {
    const double pts[8] = {0, 0, 1, 0, 0, 1, 1, 1};
    const double y[4] = {0, 1, 1, 2};
    ela_sample* s = nullptr;
    REQUIRE(ela_sample_from_arrays(pts, y, 4, 2, nullptr, nullptr, &s) == ELA_OK);
    ela_features* f = nullptr;
    REQUIRE(ela_features_compute(s, "basic", nullptr, &f) == ELA_OK);
    double v = 0;
    int defined = 0;
    ela_features_value(f, 1, &v, &defined);
    CHECK(std::string(ela_features_name(f, 1)) == "basic.observations");
    CHECK(v == 4);
    ela_features_free(f);
    ela_sample_free(s);
    CHECK(ela_sample_from_arrays(nullptr, y, 4, 2, nullptr, nullptr, &s) == ELA_ERR_CONFIG);
}

TEST_CASE("experiment entry points") {
    ela_table* t = nullptr;
    REQUIRE(ela_run_features("{\"fid\": 1, \"dim\": 5, \"groups\": \"ela_meta\", \"record_runtime\": false}", &t) == ELA_OK);
    CHECK(ela_table_cols(t) == 3 + 11);
    CHECK(ela_table_rows(t) == 1);
    CHECK(std::string(ela_table_cell(t, 0, 0)) == "1");
    ela_table_free(t);

    REQUIRE(ela_run_timebench("{\"groups\": \"ela_distr\", \"dims\": [2, 3], \"reps\": 2}", &t) == ELA_OK);
    CHECK(ela_table_rows(t) == 4);
    CHECK(std::string(ela_table_column(t, 5)) == "status");
    ela_table_free(t);

    CHECK(ela_run_classify("{\"cv\": \"sideways\"}", &t, nullptr) == ELA_ERR_CONFIG);
    CHECK(ela_run_features("not json", &t) == ELA_ERR_CONFIG);
    CHECK(ela_run_features(R"({"dim": 2, "groups": "ela_meta", "reduced": true, "m": 2})", &t) == ELA_ERR_CONFIG);
}
