#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <variant>

#include "stwj/empirical.hpp"

namespace stwj {

struct Normal {
    double mu = 0.0;
    double sigma = 1.0;
};

/// Pareto type I: F(x) = 1 - (scale / x)^shape for x >= scale.
struct Pareto {
    double shape = 1.0;
    double scale = 1.0;
};

/// F(x) = 1 - exp(-(x / scale)^shape) for x >= 0.
struct Weibull {
    double shape = 1.0;
    double scale = 1.0;
};

using MarginalDist = std::variant<Normal, Pareto, Weibull>;

/// Throws ParameterError on a nonpositive scale or shape.
void validate(const MarginalDist& dist);

double cdf(const MarginalDist& dist, double x);

/// Inverse CDF on (0, 1); DomainError outside.
double quantile(const MarginalDist& dist, double p);

/// Expected value; +inf for a Pareto with shape <= 1.
double mean(const MarginalDist& dist);

double normal_cdf(double z);

/// Standard normal quantile, Wichura's AS 241 (PPND16), relative accuracy
/// about 1e-16.
double normal_quantile(double p);

struct BivariateNormalParams {
    std::array<double, 2> mu{0.0, 0.0};
    std::array<std::array<double, 2>, 2> sigma{{{1.0, 0.0}, {0.0, 1.0}}};
};

/// Lower Cholesky factor of a 2x2 PSD covariance. A zero pivot makes the
/// corresponding column zero. FactorizationError when not PSD.
std::array<std::array<double, 2>, 2> cholesky_2x2(const BivariateNormalParams& params);

PairedSample sample_bivariate_normal(const BivariateNormalParams& params, std::size_t n,
                                     std::uint64_t seed);

struct ClaytonParams {
    double theta = 1.0;
};

void validate(const ClaytonParams& params);

/// C(u, v) = (u^-theta + v^-theta - 1)^(-1/theta).
double clayton_copula(double theta, double u, double v);

/// dC/du evaluated at (u, v).
double clayton_partial_first(double theta, double u, double v);

/// dC/dv evaluated at (u, v).
double clayton_partial_second(double theta, double u, double v);

/// (U, V) pairs with uniform marginals and Clayton dependence, generated by
/// conditional inversion of dC/du.
PairedSample sample_clayton_copula(const ClaytonParams& params, std::size_t n, std::uint64_t seed);

PairedSample sample_clayton_bivariate(const ClaytonParams& params, const MarginalDist& mx,
                                      const MarginalDist& my, std::size_t n, std::uint64_t seed);

}  // namespace stwj
