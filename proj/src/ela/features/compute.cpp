#include "ela/features/compute.hpp"

#include "ela/features/cellmap.hpp"
#include "ela/features/groups.hpp"

#include <algorithm>
#include <chrono>

namespace ela {

const std::vector<std::string>& group_names() {
    static const std::vector<std::string> names{"ela_distr", "ela_level", "ela_meta", "nbc",     "disp",
                                                "ic",        "basic",     "limo",     "pca",     "cm_angle",
                                                "cm_conv",   "cm_grad",   "gcm"};
    return names;
}

bool is_cellmap_group(std::string_view group) {
    return group == "cm_angle" || group == "cm_conv" || group == "cm_grad" || group == "gcm";
}

int group_entry_count(std::string_view group) {
    static const std::vector<std::pair<std::string_view, int>> counts{
        {"ela_distr", 5}, {"ela_level", 20}, {"ela_meta", 11}, {"nbc", 7},      {"disp", 18},
        {"ic", 7},        {"basic", 15},     {"limo", 14},     {"pca", 10},     {"cm_angle", 10},
        {"cm_conv", 6},   {"cm_grad", 4},    {"gcm", 75}};
    for (const auto& [name, n] : counts)
        if (name == group) return n;
    throw InvalidArgument("unknown feature group '" + std::string(group) + "'");
}

FeatureVector compute_group(std::string_view group, const FeatureInput& input, const FeatureConfig& config) {
    using namespace features;
    if (std::find(group_names().begin(), group_names().end(), group) == group_names().end())
        throw InvalidArgument("unknown feature group '" + std::string(group) + "'");
    if (input.size() != input.objectives.size()) throw InvalidArgument("feature input: points/objectives mismatch");
    if (input.size() < 2) throw InvalidArgument("feature input: need at least 2 points");

    const auto start = std::chrono::steady_clock::now();
    const auto& X = input.points;
    const auto& y = input.objectives;
    FeatureVector out;
    if (group == "ela_distr") out = ela_distr(y, config);
    else if (group == "ela_level") out = ela_level(X, y, config);
    else if (group == "ela_meta") out = ela_meta(X, y, config);
    else if (group == "nbc") out = nbc(X, y, config);
    else if (group == "disp") out = disp(X, y, config);
    else if (group == "ic") out = ic(X, y, config);
    else if (group == "basic") out = basic(input, config);
    else if (group == "pca") out = pca_features(X, y, config);
    else if (group == "limo") {
        const int b = config.limo_blocks > 0 ? config.limo_blocks : default_limo_blocks(input.dim());
        out = limo(X, y, CellGrid::partition(b, input.bounds), config);
    } else {
        const bool unit = input.reduced;
        const RowMatrix Z = unit ? normalize_unit_box(X) : X;
        const Bounds bounds = unit ? Bounds::box(input.dim(), 0.0, 1.0) : input.bounds;
        const auto map = build_grid(Z, y, config.blocks, bounds, config.cell_limit);
        if (group == "cm_angle") out = cm_angle(map, config);
        else if (group == "cm_conv") out = cm_conv(map, config);
        else if (group == "cm_grad") out = cm_grad(map, Z, y, config);
        else out = gcm(map, config);
    }
    out.cost_evals = 0;
    out.cost_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (input.reduced) out.add_prefix("d_");
    return out;
}

}  // namespace ela
