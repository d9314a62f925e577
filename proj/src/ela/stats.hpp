#pragma once

#include "ela/common.hpp"

#include <span>
#include <vector>

// Small descriptive statistics shared by the feature groups and harnesses.
// Functions returning FeatureValue yield the undefined marker when the
// statistic does not exist for the input (too few values, zero variance).
namespace ela::stats {

double mean(std::span<const double> v);
FeatureValue sd(std::span<const double> v);  // sample sd, divisor n-1
double median(std::vector<double> v);
// R type-7 quantile (linear interpolation between order statistics)
double quantile(std::vector<double> v, double q);
FeatureValue pearson(std::span<const double> a, std::span<const double> b);
// bias-adjusted sample skewness G1 and excess kurtosis G2
FeatureValue skewness(std::span<const double> v);
FeatureValue kurtosis(std::span<const double> v);

// a / b, undefined when b == 0 or the result is not finite
FeatureValue ratio(double a, double b);
FeatureValue ratio(FeatureValue a, FeatureValue b);

// indices 0..n-1 stably ordered by ascending value
std::vector<int> stable_order(std::span<const double> v);

inline std::span<const double> as_span(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

}  // namespace ela::stats
