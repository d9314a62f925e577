#pragma once

#include "ela/common.hpp"

#include <span>

namespace ela::ml {

// Kendall rank correlation, tau-b (tie-corrected). Undefined when either
// vector is entirely tied.
FeatureValue kendall_tau(std::span<const double> a, std::span<const double> b);

}  // namespace ela::ml
