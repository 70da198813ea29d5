#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace stwj {

/// n index-aligned observations (x_i, y_i) of a dependent pair. Always
/// nonempty, equal-length and finite.
class PairedSample {
public:
    PairedSample(std::vector<double> x, std::vector<double> y);

    std::size_t size() const noexcept { return x_.size(); }
    std::span<const double> x() const noexcept { return x_; }
    std::span<const double> y() const noexcept { return y_; }

    /// The sample with the roles of X and Y exchanged.
    PairedSample swapped() const { return PairedSample(y_, x_); }

private:
    std::vector<double> x_;
    std::vector<double> y_;
};

struct Differences {
    std::vector<double> x_minus_y;
    std::vector<double> y_minus_x;
};

Differences differences(const PairedSample& s);

/// Step survival function t -> #{v > t} / n of a sample of reals.
class EmpiricalSurvival {
public:
    explicit EmpiricalSurvival(std::vector<double> values);

    std::size_t size() const noexcept { return sorted_.size(); }
    std::span<const double> sorted_values() const noexcept { return sorted_; }

    double operator()(double t) const;

private:
    std::vector<double> sorted_;
};

inline double survival_at(const EmpiricalSurvival& e, double t) { return e(t); }

/// Survival functions of X - Y and Y - X built from one paired sample.
struct DifferenceSurvivals {
    EmpiricalSurvival x_minus_y;
    EmpiricalSurvival y_minus_x;

    explicit DifferenceSurvivals(const PairedSample& s);
};

/// sqrt(n) * sup_{t >= 0} (P_n(X - Y > t) - P_n(Y - X > t)).
///
/// The supremum of the step difference over [0, inf) is attained at t = 0 or
/// at a nonnegative realized difference, so only those points are scanned.
double statistic_stwj(const PairedSample& s);

}  // namespace stwj
