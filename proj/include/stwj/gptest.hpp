#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "stwj/empirical.hpp"

namespace stwj {

/// Evaluation points 0 = t_0 < t_1 < ... < t_k of the limiting process.
class Grid {
public:
    explicit Grid(std::vector<double> points);

    std::span<const double> points() const noexcept { return points_; }
    std::size_t k() const noexcept { return points_.size() - 1; }

private:
    std::vector<double> points_;
};

inline constexpr std::size_t kDefaultGridSize = 100;
inline constexpr std::size_t kDefaultSimulations = 10000;
inline constexpr double kDefaultJitter = 1e-10;
inline constexpr double kMaxJitter = 1e-6;

/// k + 1 equally spaced points on [0, max Z], Z = {x_i - y_i} u {y_i - x_i}.
/// DegenerateSampleError when max Z is not positive.
Grid build_grid(const PairedSample& s, std::size_t k);

/// {0} together with every distinct nonnegative realized difference.
Grid discrete_support_grid(const PairedSample& s);

struct GpCovariance {
    Eigen::MatrixXd matrix;
    double jitter_applied = 0.0;
};

/// Plug-in covariance of the limiting Gaussian process on the grid:
///   S_ij = F(t_i v t_j) + G(t_i v t_j) - (F(t_i) - G(t_i)) (F(t_j) - G(t_j))
/// with F, G the empirical survival functions of X - Y and Y - X.
GpCovariance build_covariance(const Grid& g, const PairedSample& s);

/// Lower Cholesky factor of matrix + eps * I. On failure eps grows tenfold
/// until kMaxJitter; the eps that succeeded is stored in c.jitter_applied.
Eigen::MatrixXd regularized_cholesky(GpCovariance& c, double eps = kDefaultJitter);

struct PValueBounds {
    double p1 = 1.0;  ///< share of simulated maxima strictly above the statistic
    double p2 = 1.0;  ///< 1 - share of draws with every component <= statistic
};

/// Maxima of n_sims zero-mean normal vectors with covariance L L^T.
/// Simulations are split into fixed blocks, each drawing from its own
/// sub-stream of `seed`, so the output does not depend on `threads`.
std::vector<double> simulate_maxima(const Eigen::MatrixXd& lower, std::size_t n_sims,
                                    std::uint64_t seed, std::size_t threads = 1);

PValueBounds pvalue_bounds(const Eigen::MatrixXd& lower, double stat, std::size_t n_sims,
                           std::uint64_t seed, std::size_t threads = 1);

/// Factorizes c (recording the jitter) and simulates.
PValueBounds pvalue_bounds(GpCovariance& c, double stat, std::size_t n_sims, std::uint64_t seed,
                           std::size_t threads = 1);

struct TestResult {
    double statistic = 0.0;
    std::optional<double> p1;
    std::optional<double> p2;
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t n_sims = 0;
    std::uint64_t seed = 0;
    double jitter = 0.0;
    /// significance level -> reject
    std::map<double, bool> decisions;

    /// Smallest available p-value bound (1 when none).
    double min_p() const;
    bool reject_at(double level) const { return min_p() < level; }
};

inline const std::vector<double> kDefaultLevels{0.05, 0.01};

/// Full test of H0: X <=st:wj Y on an equally spaced grid.
TestResult test_st_wj(const PairedSample& s, std::size_t k, std::size_t n_sims, std::uint64_t seed,
                      std::size_t threads = 1);

/// Variant for integer-valued or ordinal data: the grid is the realized
/// nonnegative difference support itself.
TestResult test_st_wj_discrete_support(const PairedSample& s, std::size_t n_sims, std::uint64_t seed,
                                       std::size_t threads = 1);

}  // namespace stwj
