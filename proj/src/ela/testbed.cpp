#include "ela/testbed.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>

namespace ela {

namespace {

constexpr std::array<std::string_view, 4> kMultimodality{"none", "low", "medium", "high"};
constexpr std::array<std::string_view, 4> kGlobalStructure{"none", "deceptive", "medium", "strong"};
constexpr std::array<std::string_view, 2> kSeparability{"none", "high"};
constexpr std::array<std::string_view, 4> kScaling{"none", "low", "medium", "high"};
constexpr std::array<std::string_view, 3> kHomogeneity{"low", "medium", "high"};
constexpr std::array<std::string_view, 4> kBasin{"none", "low", "medium", "high"};
constexpr std::array<std::string_view, 4> kContrast{"none", "low", "medium", "high"};

constexpr std::array<std::string_view, kPropertyCount> kPropertyNames{
    "multimodality", "global_structure", "separability", "variable_scaling",
    "homogeneity", "basin_size", "global_local_contrast"};

// levels given as strings so the table below reads like the label matrix
PropertyLabels labels(std::string_view mm, std::string_view gs, std::string_view sep, std::string_view vs,
                      std::string_view hom, std::string_view basin, std::string_view glc) {
    PropertyLabels out;
    const std::array<std::string_view, kPropertyCount> raw{mm, gs, sep, vs, hom, basin, glc};
    for (int p = 0; p < kPropertyCount; ++p) out.level[p] = parse_level(kAllProperties[p], raw[p]);
    return out;
}

enum Fn {
    kSphere = 1,
    kEllipsoidSeparable,
    kRastriginSeparable,
    kBucheRastrigin,
    kLinearSlope,
    kAttractiveSector,
    kStepEllipsoid,
    kRosenbrock,
    kRosenbrockRotated,
    kEllipsoidRotated,
    kDiscus,
    kBentCigar,
    kSharpRidge,
    kDifferentPowers,
    kRastriginRotated,
    kWeierstrass,
    kSchaffer,
    kSchafferIll,
    kGriewankRosenbrock,
    kSchwefel,
    kGallagher101,
    kGallagher21,
    kKatsuura,
    kLunacek,
};

const std::vector<FunctionInfo>& suite_table() {
    using C = Category;
    constexpr auto sep = C::separable;
    constexpr auto mod = C::moderate_conditioning;
    constexpr auto high = C::high_conditioning;
    constexpr auto adequate = C::multimodal_adequate_structure;
    constexpr auto weak = C::multimodal_weak_structure;
    static const std::vector<FunctionInfo> table{
        {kSphere, "sphere", sep, false, labels("none", "strong", "high", "none", "high", "none", "none")},
        {kEllipsoidSeparable, "ellipsoid_separable", sep, false, labels("none", "strong", "high", "high", "high", "none", "none")},
        {kRastriginSeparable, "rastrigin_separable", sep, false, labels("high", "strong", "high", "low", "high", "low", "low")},
        {kBucheRastrigin, "buche_rastrigin", sep, false, labels("high", "strong", "high", "low", "high", "medium", "low")},
        {kLinearSlope, "linear_slope", sep, false, labels("none", "strong", "high", "low", "high", "none", "none")},
        {kAttractiveSector, "attractive_sector", mod, true, labels("none", "strong", "none", "low", "medium", "none", "none")},
        {kStepEllipsoid, "step_ellipsoid", mod, true, labels("none", "strong", "none", "low", "high", "none", "none")},
        {kRosenbrock, "rosenbrock", mod, false, labels("low", "strong", "none", "low", "medium", "low", "low")},
        {kRosenbrockRotated, "rosenbrock_rotated", mod, true, labels("low", "strong", "none", "low", "medium", "low", "low")},
        {kEllipsoidRotated, "ellipsoid_rotated", high, true, labels("none", "strong", "none", "high", "high", "none", "none")},
        {kDiscus, "discus", high, true, labels("none", "strong", "none", "high", "high", "none", "none")},
        {kBentCigar, "bent_cigar", high, true, labels("none", "strong", "none", "high", "high", "none", "none")},
        {kSharpRidge, "sharp_ridge", high, true, labels("none", "strong", "none", "medium", "medium", "none", "none")},
        {kDifferentPowers, "different_powers", high, true, labels("none", "strong", "none", "medium", "medium", "none", "none")},
        {kRastriginRotated, "rastrigin_rotated", adequate, true, labels("high", "strong", "none", "low", "high", "low", "low")},
        {kWeierstrass, "weierstrass", adequate, true, labels("high", "medium", "none", "medium", "high", "medium", "low")},
        {kSchaffer, "schaffer_f7", adequate, true, labels("high", "medium", "none", "low", "medium", "medium", "high")},
        {kSchafferIll, "schaffer_f7_ill_conditioned", adequate, true, labels("high", "medium", "none", "high", "medium", "medium", "high")},
        {kGriewankRosenbrock, "griewank_rosenbrock", adequate, true, labels("high", "strong", "none", "low", "high", "low", "low")},
        {kSchwefel, "schwefel", weak, true, labels("medium", "deceptive", "none", "low", "high", "low", "high")},
        {kGallagher101, "gallagher_101_peaks", weak, true, labels("medium", "none", "none", "medium", "high", "medium", "low")},
        {kGallagher21, "gallagher_21_peaks", weak, true, labels("low", "none", "none", "high", "high", "medium", "high")},
        {kKatsuura, "katsuura", weak, true, labels("high", "none", "none", "low", "high", "low", "low")},
        {kLunacek, "lunacek_bi_rastrigin", weak, true, labels("high", "deceptive", "none", "low", "high", "low", "low")},
    };
    return table;
}

constexpr double kSectorScale = 100.0;
constexpr double kSchwefelScale = 60.0;
constexpr double kSchwefelOptimum = 420.968746359982;  // argmax of z sin(sqrt|z|) on [0, 500]
constexpr int kWeierstrassTerms = 12;
constexpr int kKatsuuraTerms = 32;

struct Peak {
    Vector center;     // rotation * location
    Vector precision;  // diagonal of C_i in the rotated frame
    double weight;
};

// diagonal alpha^{0.5 i/(n-1)}, i = 0..n-1
Vector conditioning(int n, double alpha) {
    Vector s(n);
    for (int i = 0; i < n; ++i) s[i] = std::pow(alpha, 0.5 * i / (n - 1));
    return s;
}

// oscillation transform, applied elementwise
double t_osz(double x) {
    if (x == 0) return 0;
    const double h = std::log(std::abs(x));
    const double c1 = x > 0 ? 10.0 : 5.5, c2 = x > 0 ? 7.9 : 3.1;
    return std::copysign(std::exp(h + 0.049 * (std::sin(c1 * h) + std::sin(c2 * h))), x);
}

Vector t_osz(const Vector& x) { return x.unaryExpr([](double v) { return t_osz(v); }); }

// asymmetry transform: positive coordinates raised to 1 + beta i/(n-1) sqrt(x_i)
Vector t_asy(const Vector& x, double beta) {
    const auto n = x.size();
    Vector out = x;
    for (Eigen::Index i = 0; i < n; ++i)
        if (x[i] > 0) out[i] = std::pow(x[i], 1.0 + beta * static_cast<double>(i) / static_cast<double>(n - 1) * std::sqrt(x[i]));
    return out;
}

// boundary penalty outside [-5, 5]
double f_pen(std::span<const double> x) {
    double p = 0;
    for (double v : x) {
        const double e = std::max(0.0, std::abs(v) - 5.0);
        p += e * e;
    }
    return p;
}

double rastrigin(const Vector& z) {
    double cos_sum = 0;
    for (Eigen::Index i = 0; i < z.size(); ++i) cos_sum += std::cos(2 * std::numbers::pi * z[i]);
    return 10.0 * (static_cast<double>(z.size()) - cos_sum) + z.squaredNorm();
}

double rosenbrock(const Vector& w) {
    double f = 0;
    for (Eigen::Index i = 0; i + 1 < w.size(); ++i) {
        const double a = w[i] * w[i] - w[i + 1];
        f += 100.0 * a * a + (w[i] - 1.0) * (w[i] - 1.0);
    }
    return f;
}

double rosenbrock_scale(int n) { return std::max(1.0, std::sqrt(static_cast<double>(n)) / 8.0); }

double schaffer(const Vector& w) {
    const auto n = w.size();
    double acc = 0;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const double s = std::sqrt(w[i] * w[i] + w[i + 1] * w[i + 1]);
        const double sn = std::sin(50.0 * std::pow(s, 0.2));
        acc += std::sqrt(s) + std::sqrt(s) * sn * sn;
    }
    acc /= static_cast<double>(n - 1);
    return acc * acc;
}

double weierstrass_term(double z) {
    double acc = 0, a = 1, b = 1;
    for (int k = 0; k < kWeierstrassTerms; ++k, a *= 0.5, b *= 3) acc += a * std::cos(2 * std::numbers::pi * b * (z + 0.5));
    return acc;
}

double schwefel_term(double z) {
    const double u = z + kSchwefelOptimum;
    const double peak = kSchwefelOptimum * std::sin(std::sqrt(kSchwefelOptimum));
    const double excess = std::max(0.0, std::abs(u) - 500.0);
    return peak - u * std::sin(std::sqrt(std::abs(u))) + excess * excess;
}

std::vector<Peak> make_peaks(int count, double global_alpha, const Matrix& rotation, const Vector& shift, std::mt19937_64& rng) {
    const int n = static_cast<int>(shift.size());
    std::uniform_real_distribution<double> loc(-4.9, 4.9);
    std::vector<int> order(count - 1);
    for (int i = 0; i < count - 1; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Peak> peaks;
    for (int p = 0; p < count; ++p) {
        Peak peak;
        double alpha = global_alpha;
        if (p == 0) {
            peak.center = shift;
            peak.weight = 10.0;
        } else {
            peak.center.resize(n);
            for (int j = 0; j < n; ++j) peak.center[j] = loc(rng);
            peak.weight = 1.1 + 8.0 * (p - 1) / (count - 2);
            alpha = std::pow(1000.0, 2.0 * order[p - 1] / (count - 2));
        }
        peak.precision.resize(n);
        for (int j = 0; j < n; ++j) peak.precision[j] = std::pow(alpha, static_cast<double>(j) / (n - 1) - 0.5);
        std::shuffle(peak.precision.begin(), peak.precision.end(), rng);
        peak.center = rotation * peak.center;
        peaks.push_back(std::move(peak));
    }
    return peaks;
}

}  // namespace

struct InstanceData {
    Vector shift;
    Matrix rotation;
    Matrix rotation2;  // second rotation of the two-rotation functions
    Vector scales;     // per-coordinate conditioning where used
    Vector signs;      // sector orientation / second funnel direction
    std::vector<Peak> peaks;
    mutable std::atomic<std::uint64_t> evaluations{0};
};

std::string_view property_name(Property p) { return kPropertyNames[static_cast<int>(p)]; }

Property parse_property(std::string_view name) {
    for (int p = 0; p < kPropertyCount; ++p)
        if (kPropertyNames[p] == name) return kAllProperties[p];
    throw InvalidArgument("unknown property '" + std::string(name) + "'");
}

std::span<const std::string_view> property_levels(Property p) {
    switch (p) {
        case Property::multimodality: return kMultimodality;
        case Property::global_structure: return kGlobalStructure;
        case Property::separability: return kSeparability;
        case Property::variable_scaling: return kScaling;
        case Property::homogeneity: return kHomogeneity;
        case Property::basin_size: return kBasin;
        case Property::global_local_contrast: return kContrast;
    }
    throw InvalidArgument("bad property");
}

int parse_level(Property p, std::string_view level) {
    const auto levels = property_levels(p);
    const auto it = std::find(levels.begin(), levels.end(), level);
    if (it == levels.end())
        throw InvalidArgument("level '" + std::string(level) + "' not valid for property " +
                              std::string(property_name(p)));
    return static_cast<int>(it - levels.begin());
}

std::string_view category_name(Category c) {
    switch (c) {
        case Category::separable: return "separable";
        case Category::moderate_conditioning: return "low_or_moderate_conditioning";
        case Category::high_conditioning: return "high_conditioning_unimodal";
        case Category::multimodal_adequate_structure: return "multimodal_adequate_global_structure";
        case Category::multimodal_weak_structure: return "multimodal_weak_global_structure";
    }
    return "?";
}

std::span<const FunctionInfo> suite() { return suite_table(); }
int suite_size() { return static_cast<int>(suite_table().size()); }

const FunctionInfo& function_info(int function_id) {
    if (function_id < 1 || function_id > suite_size())
        throw InvalidArgument("unknown function id " + std::to_string(function_id) + " (suite has 1.." +
                              std::to_string(suite_size()) + ")");
    return suite_table()[function_id - 1];
}

Matrix random_rotation(int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Matrix a(dim, dim);
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dim; ++i) a(i, j) = normal(rng);
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ();
    const Matrix& r = qr.matrixQR();
    for (int j = 0; j < dim; ++j)
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    return q;
}

Instance make_instance(int function_id, int dimension, std::uint64_t instance_seed) {
    const auto& info = function_info(function_id);
    if (dimension < 2) throw InvalidArgument("dimension must be >= 2");

    const auto base = derive_seed(instance_seed, function_id, dimension);
    std::mt19937_64 rng(base);
    std::uniform_real_distribution<double> shift_dist(-4.0, 4.0);

    auto data = std::make_shared<InstanceData>();
    data->shift.resize(dimension);
    for (int j = 0; j < dimension; ++j) data->shift[j] = shift_dist(rng);
    data->rotation = info.rotated ? random_rotation(dimension, derive_seed(base, 0x0707))
                                  : Matrix::Identity(dimension, dimension);
    data->rotation2 = info.rotated ? random_rotation(dimension, derive_seed(base, 0x0708))
                                   : Matrix::Identity(dimension, dimension);

    switch (function_id) {
        case kRastriginSeparable:
        case kRastriginRotated:
        case kAttractiveSector:
        case kStepEllipsoid:
        case kSharpRidge:
        case kSchaffer:
        case kBucheRastrigin:
        case kLunacek: data->scales = conditioning(dimension, 10.0); break;
        case kWeierstrass: data->scales = conditioning(dimension, 0.01); break;
        case kSchafferIll: data->scales = conditioning(dimension, 1000.0); break;
        case kKatsuura: data->scales = conditioning(dimension, 100.0); break;
        default: data->scales = Vector::Ones(dimension);
    }

    if (function_id == kLinearSlope) {
        // the optimum of the slope is a corner of the box
        for (int j = 0; j < dimension; ++j) data->shift[j] = (rng() & 1U) ? 5.0 : -5.0;
    }
    if (function_id == kAttractiveSector) {
        data->signs.resize(dimension);
        for (int j = 0; j < dimension; ++j) data->signs[j] = (rng() & 1U) ? 1.0 : -1.0;
    }
    if (function_id == kLunacek) {
        // the second funnel sits on the far side of the box centre
        data->signs.resize(dimension);
        for (int j = 0; j < dimension; ++j) data->signs[j] = data->shift[j] >= 0 ? -1.0 : 1.0;
    }
    if (function_id == kGallagher101) data->peaks = make_peaks(101, 1000.0, data->rotation, data->shift, rng);
    if (function_id == kGallagher21) data->peaks = make_peaks(21, 1e6, data->rotation, data->shift, rng);

    Instance inst;
    inst.function_id_ = function_id;
    inst.dimension_ = dimension;
    inst.seed_ = instance_seed;
    inst.data_ = std::move(data);
    return inst;
}

const PropertyLabels& Instance::labels() const { return function_info(function_id_).labels; }
const Vector& Instance::shift() const { return data_->shift; }
const Matrix& Instance::rotation() const { return data_->rotation; }
std::uint64_t Instance::evaluations() const { return data_->evaluations.load(std::memory_order_relaxed); }

double Instance::evaluate(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dimension_)
        throw InvalidArgument("evaluate: expected a point of length " + std::to_string(dimension_));
    for (double v : x)
        if (!std::isfinite(v)) throw InvalidArgument("evaluate: non-finite coordinate");

    const auto& d = *data_;
    d.evaluations.fetch_add(1, std::memory_order_relaxed);
    const int n = dimension_;
    const Vector u = Eigen::Map<const Vector>(x.data(), n) - d.shift;
    const Vector z = d.rotation * u;

    const Matrix& Q = d.rotation2;
    const Vector& lambda = d.scales;

    switch (function_id_) {
        case kSphere: return u.squaredNorm();
        case kEllipsoidSeparable:
        case kEllipsoidRotated: {
            const Vector w = t_osz(z);
            double f = 0;
            for (int i = 0; i < n; ++i) f += std::pow(10.0, 6.0 * i / (n - 1)) * w[i] * w[i];
            return f;
        }
        case kRastriginSeparable: return rastrigin(lambda.cwiseProduct(t_asy(t_osz(u), 0.2)));
        case kBucheRastrigin: {
            Vector w = t_osz(u);
            for (int i = 0; i < n; ++i) w[i] *= (w[i] > 0 && i % 2 == 0 ? 10.0 : 1.0) * lambda[i];
            return rastrigin(w) + 100.0 * f_pen(x);
        }
        case kLinearSlope: {
            double f = 0;
            for (int i = 0; i < n; ++i) {
                const double s = std::copysign(std::pow(10.0, static_cast<double>(i) / (n - 1)), d.shift[i]);
                const double w = x[i] * d.shift[i] < 25.0 ? x[i] : d.shift[i];
                f += 5.0 * std::abs(s) - s * w;
            }
            return f;
        }
        case kAttractiveSector: {
            const Vector w = Q * lambda.cwiseProduct(z);
            double f = 0;
            for (int i = 0; i < n; ++i) {
                const double s = w[i] * d.signs[i] > 0 ? kSectorScale : 1.0;
                f += s * s * w[i] * w[i];
            }
            return std::pow(t_osz(f), 0.9);
        }
        case kStepEllipsoid: {
            const Vector h = lambda.cwiseProduct(z);
            Vector r(n);
            for (int i = 0; i < n; ++i)
                r[i] = std::abs(h[i]) > 0.5 ? std::floor(0.5 + h[i]) : std::floor(0.5 + 10.0 * h[i]) / 10.0;
            const Vector w = Q * r;
            double f = 0;
            for (int i = 0; i < n; ++i) f += std::pow(10.0, 2.0 * i / (n - 1)) * w[i] * w[i];
            return 0.1 * std::max(std::abs(h[0]) / 1e4, f) + f_pen(x);
        }
        case kRosenbrock: return rosenbrock(rosenbrock_scale(n) * u + Vector::Ones(n));
        case kRosenbrockRotated: return rosenbrock(rosenbrock_scale(n) * z + Vector::Ones(n));
        case kDiscus: {
            const Vector w = t_osz(z);
            return 1e6 * w[0] * w[0] + w.tail(n - 1).squaredNorm();
        }
        case kBentCigar: {
            const Vector w = d.rotation * t_asy(z, 0.5);
            return w[0] * w[0] + 1e6 * w.tail(n - 1).squaredNorm();
        }
        case kSharpRidge: {
            const Vector w = Q * lambda.cwiseProduct(z);
            return w[0] * w[0] + 100.0 * w.tail(n - 1).norm();
        }
        case kDifferentPowers: {
            double f = 0;
            for (int i = 0; i < n; ++i) f += std::pow(std::abs(z[i]), 2.0 + 4.0 * i / (n - 1));
            return std::sqrt(f);
        }
        case kRastriginRotated: return rastrigin(d.rotation * lambda.cwiseProduct(Q * t_asy(t_osz(z), 0.2)));
        case kWeierstrass: {
            const Vector w = d.rotation * lambda.cwiseProduct(Q * t_osz(z));
            const double f0 = weierstrass_term(0.0);
            double acc = 0;
            for (int i = 0; i < n; ++i) acc += weierstrass_term(w[i]) - f0;
            const double m = acc / n;
            return 10.0 * m * m * m + 10.0 / n * f_pen(x);
        }
        case kSchaffer:
        case kSchafferIll: return schaffer(lambda.cwiseProduct(Q * t_asy(z, 0.5))) + 10.0 * f_pen(x);
        case kGriewankRosenbrock: {
            const Vector w = rosenbrock_scale(n) * z + Vector::Ones(n);
            double acc = 0;
            for (int i = 0; i + 1 < n; ++i) {
                const double a = w[i] * w[i] - w[i + 1];
                const double s = 100.0 * a * a + (w[i] - 1.0) * (w[i] - 1.0);
                acc += s / 4000.0 - std::cos(s);
            }
            return 10.0 * acc / (n - 1) + 10.0;
        }
        case kSchwefel: {
            double f = 0;
            for (int i = 0; i < n; ++i) f += schwefel_term(kSchwefelScale * z[i]);
            return f / n;
        }
        case kGallagher101:
        case kGallagher21: {
            const Vector rx = d.rotation * Eigen::Map<const Vector>(x.data(), n);
            double best = 0;
            for (const auto& p : d.peaks) {
                const Vector r = rx - p.center;
                const double q = r.cwiseProduct(r).dot(p.precision);
                best = std::max(best, p.weight * std::exp(-q / (2.0 * n)));
            }
            const double g = t_osz(10.0 - best);
            return g * g + f_pen(x);
        }
        case kKatsuura: {
            const Vector w = Q * lambda.cwiseProduct(z);
            const double exponent = 10.0 / std::pow(static_cast<double>(n), 1.2);
            double prod = 1;
            for (int i = 0; i < n; ++i) {
                double acc = 0, p2 = 1;
                for (int j = 1; j <= kKatsuuraTerms; ++j) {
                    p2 *= 2;
                    const double v = p2 * w[i];
                    acc += std::abs(v - std::nearbyint(v)) / p2;
                }
                prod *= std::pow(1.0 + (i + 1) * acc, exponent);
            }
            const double scale = 10.0 / (static_cast<double>(n) * n);
            return scale * prod - scale + f_pen(x);
        }
        case kLunacek: {
            constexpr double mu0 = 2.5;
            const double s = 1.0 - 1.0 / (2.0 * std::sqrt(n + 20.0) - 8.2);
            const double mu1 = -std::sqrt((mu0 * mu0 - 1.0) / s);
            const Vector second = u - (mu1 - mu0) * d.signs;
            const double funnel = std::min(u.squaredNorm(), n + s * second.squaredNorm());
            const Vector w = lambda.cwiseProduct(z);
            double cos_sum = 0;
            for (int i = 0; i < n; ++i) cos_sum += std::cos(2 * std::numbers::pi * w[i]);
            return funnel + 10.0 * (n - cos_sum);
        }
        default: break;
    }
    throw InvalidArgument("unknown function id");
}

}  // namespace ela
