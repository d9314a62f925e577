#pragma once

#include "ela/common.hpp"

#include <array>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ela {

// The seven expert-assigned landscape properties used as classification tasks.
enum class Property {
    multimodality,
    global_structure,
    separability,
    variable_scaling,
    homogeneity,
    basin_size,
    global_local_contrast,
};
inline constexpr int kPropertyCount = 7;
inline constexpr std::array<Property, kPropertyCount> kAllProperties{
    Property::multimodality, Property::global_structure, Property::separability,
    Property::variable_scaling, Property::homogeneity, Property::basin_size,
    Property::global_local_contrast};

std::string_view property_name(Property p);
Property parse_property(std::string_view name);
// ordered level set of a property; a label is an index into it
std::span<const std::string_view> property_levels(Property p);
int parse_level(Property p, std::string_view level);

struct PropertyLabels {
    std::array<int, kPropertyCount> level{};

    int operator[](Property p) const { return level[static_cast<int>(p)]; }
    std::string_view name(Property p) const { return property_levels(p)[level[static_cast<int>(p)]]; }
    bool operator==(const PropertyLabels&) const = default;
};

// The five broad benchmark categories the suite covers.
enum class Category {
    separable,
    moderate_conditioning,
    high_conditioning,
    multimodal_adequate_structure,
    multimodal_weak_structure,
};
std::string_view category_name(Category c);

struct FunctionInfo {
    int id;
    std::string_view name;
    Category category;
    bool rotated;
    PropertyLabels labels;
};

// all suite functions, ordered by id (ids are 1..suite_size())
std::span<const FunctionInfo> suite();
const FunctionInfo& function_info(int function_id);
int suite_size();

inline constexpr int kDefaultInstances = 15;
inline constexpr double kBoxLower = -5.0;
inline constexpr double kBoxUpper = 5.0;

struct InstanceData;

// An immutable, seeded instance of a suite function. Copies share state;
// evaluate() is pure and safe to call concurrently.
class Instance {
public:
    int function_id() const { return function_id_; }
    int dimension() const { return dimension_; }
    std::uint64_t instance_seed() const { return seed_; }
    const PropertyLabels& labels() const;
    Bounds bounds() const { return Bounds::box(dimension_, kBoxLower, kBoxUpper); }

    // the optimum location; f(shift()) == 0
    const Vector& shift() const;
    // orthogonal matrix applied to (x - shift); identity for separable functions
    const Matrix& rotation() const;

    double evaluate(std::span<const double> x) const;
    // objective evaluations made so far through this instance and its copies
    std::uint64_t evaluations() const;
    double evaluate(const Vector& x) const { return evaluate(std::span<const double>(x.data(), x.size())); }

private:
    friend Instance make_instance(int, int, std::uint64_t);
    int function_id_ = 0;
    int dimension_ = 0;
    std::uint64_t seed_ = 0;
    std::shared_ptr<const InstanceData> data_;
};

Instance make_instance(int function_id, int dimension, std::uint64_t instance_seed);

// Deterministic orthogonal matrix: QR of a seeded standard-normal matrix with
// the sign convention diag(R) > 0.
Matrix random_rotation(int dim, std::uint64_t seed);

}  // namespace ela
