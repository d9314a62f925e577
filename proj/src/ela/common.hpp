#pragma once

#include <Eigen/Dense>

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace ela {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
// sample storage: one point per row
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// a feature value or the explicit undefined marker
using FeatureValue = std::optional<double>;

enum class ErrorKind { invalid_argument = 2, budget_exceeded = 3, numerical = 4, io = 5 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct InvalidArgument : Error {
    explicit InvalidArgument(const std::string& what) : Error(ErrorKind::invalid_argument, what) {}
};
struct BudgetExceeded : Error {
    explicit BudgetExceeded(const std::string& what) : Error(ErrorKind::budget_exceeded, what) {}
};
struct NumericalError : Error {
    explicit NumericalError(const std::string& what) : Error(ErrorKind::numerical, what) {}
};
struct IoError : Error {
    explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

// Cooperative time limit. Long-running loops call check(); an unset deadline never fires.
class Deadline {
public:
    using Clock = std::chrono::steady_clock;

    Deadline() = default;
    static Deadline after(double seconds) {
        Deadline d;
        d.at_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                   std::chrono::duration<double>(seconds));
        return d;
    }

    bool expired() const { return at_ && Clock::now() >= *at_; }
    void check(const char* where) const {
        if (expired()) throw BudgetExceeded(std::string("time budget exceeded in ") + where);
    }

private:
    std::optional<Clock::time_point> at_;
};

struct Bounds {
    Vector lower;
    Vector upper;

    static Bounds box(int dim, double lo, double hi) {
        return {Vector::Constant(dim, lo), Vector::Constant(dim, hi)};
    }
    int dim() const { return static_cast<int>(lower.size()); }
    void validate() const {
        if (lower.size() != upper.size() || lower.size() == 0)
            throw InvalidArgument("bounds: lower/upper length mismatch or empty");
        for (Eigen::Index j = 0; j < lower.size(); ++j)
            if (!(lower[j] < upper[j]))
                throw InvalidArgument("bounds: lower must be strictly below upper in every coordinate");
    }
};

// splitmix64 finalizer; used to derive independent seeds from (seed, tags...)
constexpr std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

template <typename... Tags>
constexpr std::uint64_t derive_seed(std::uint64_t seed, Tags... tags) {
    std::uint64_t h = mix_seed(seed);
    ((h = mix_seed(h ^ static_cast<std::uint64_t>(tags))), ...);
    return h;
}

}  // namespace ela
