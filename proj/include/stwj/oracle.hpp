#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "stwj/distributions.hpp"
#include "stwj/empirical.hpp"

namespace stwj {

struct Atom {
    double x = 0.0;
    double y = 0.0;
    double p = 0.0;
};

/// Finite law of (X, Y): weighted atoms with positive masses summing to one.
class DiscreteBivariate {
public:
    explicit DiscreteBivariate(std::vector<Atom> atoms);

    std::span<const Atom> atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }

    DiscreteBivariate swapped() const;

    double mean_x() const;
    double mean_y() const;

private:
    std::vector<Atom> atoms_;
};

/// Equal-mass atoms at the observed pairs.
DiscreteBivariate empirical_law(const PairedSample& s);

/// Absolute slack allowed when comparing exact probabilities computed by
/// summing masses in different orders.
inline constexpr double kProbabilityTolerance = 1e-10;

struct OrderVerdict {
    bool holds = true;
    /// Set iff holds is false.
    std::optional<double> witness_t;
};

enum class Difference { x_minus_y, y_minus_x };

double survival_of_difference(const DiscreteBivariate& d, Difference which, double t);

/// Exact check of P(X - Y > t) <= P(Y - X > t) for every real t.
OrderVerdict check_st_wj_discrete(const DiscreteBivariate& d);

struct Precedence {
    double p_x_greater = 0.0;  ///< P(X > Y)
    double p_y_greater = 0.0;  ///< P(Y > X)
};

Precedence check_precedence(const DiscreteBivariate& d);

enum class MarginalOrder { x_le_y, y_le_x, incomparable, equal };

const char* to_string(MarginalOrder order);

/// Usual stochastic order between the marginals of X and Y.
MarginalOrder check_st_marginals_discrete(const DiscreteBivariate& d);

struct ConvolveOptions {
    std::size_t max_atoms = std::size_t{1} << 20;
    /// Merge atoms whose coordinates agree within 1e-12.
    bool merge = true;
};

/// Law of (sum X_i, sum Y_i) for mutually independent pairs.
DiscreteBivariate convolve_independent(std::span<const DiscreteBivariate> ds,
                                       const ConvolveOptions& options = {});

using CopulaPartial = std::function<double(double, double)>;

/// Checks d_first(u, v1) <= d_second(v2, u) for every u and v1 <= v2 on the
/// interior grid {i / (grid_size + 1)}. On failure witness_t holds the
/// flattened index (iu * g + iv1) * g + iv2 of the first violating triple.
OrderVerdict check_copula_condition(const CopulaPartial& d_first, const CopulaPartial& d_second,
                                    std::size_t grid_size);

/// The same check for the Clayton copula with parameter theta.
OrderVerdict check_copula_condition(double theta, std::size_t grid_size);

/// Under bivariate normality X - Y and Y - X differ only by location, so
/// the order reduces to mu_x <= mu_y.
bool analytic_st_wj_bivariate_normal(const BivariateNormalParams& params);

/// Atoms on a grid_per_axis^2 lattice spanning +-span_sd standard deviations
/// around the mean, weighted by the normal density. The lattice is point
/// symmetric about the mean, so X - Y keeps a law symmetric about mu_x - mu_y.
/// Requires a nonsingular covariance.
DiscreteBivariate discretize_bivariate_normal(const BivariateNormalParams& params,
                                              std::size_t grid_per_axis, double span_sd = 5.0);

}  // namespace stwj
