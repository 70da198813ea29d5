#include "stwj/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "stwj/errors.hpp"
#include "stwj/random.hpp"

namespace stwj {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ParameterError(std::string(what) + " must be positive and finite");
    }
}

}  // namespace

void validate(const MarginalDist& dist) {
    std::visit(Overloaded{
                   [](const Normal& d) {
                       if (!std::isfinite(d.mu)) throw ParameterError("normal mean must be finite");
                       require_positive(d.sigma, "normal sigma");
                   },
                   [](const Pareto& d) {
                       require_positive(d.shape, "pareto shape");
                       require_positive(d.scale, "pareto scale");
                   },
                   [](const Weibull& d) {
                       require_positive(d.shape, "weibull shape");
                       require_positive(d.scale, "weibull scale");
                   },
               },
               dist);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("normal quantile: p must lie in (0, 1)");

    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2509.0809287301226727 * r + 33430.575583588128105) * r +
                     67265.770927008700853) * r + 45921.953931549871457) * r +
                   13731.693765509461125) * r + 1971.5909503065514427) * r +
                 133.14166789178437745) * r + 3.387132872796366608) /
               (((((((5226.495278852545925 * r + 28729.085735721942674) * r +
                     39307.89580009271061) * r + 21213.794301586595867) * r +
                   5394.1960214247511077) * r + 687.1870074920579083) * r +
                 42.313330701600911252) * r + 1.0);
    }

    double r = std::sqrt(-std::log(q < 0.0 ? p : 1.0 - p));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r +
                    0.24178072517745061177) * r + 1.27045825245236838258) * r +
                  3.64784832476320460504) * r + 5.7694972214606914055) * r +
                4.6303378461565452959) * r + 1.42343711074968357734) /
              (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r +
                    0.0151986665636164571966) * r + 0.14810397642748007459) * r +
                  0.68976733498510000455) * r + 1.6763848301838038494) * r +
                2.05319162663775882187) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                    0.0012426609473880784386) * r + 0.026532189526576123093) * r +
                  0.29656057182850489123) * r + 1.7848265399172913358) * r +
                5.4637849111641143699) * r + 6.6579046435011037772) /
              (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r +
                    1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
                  0.0148753612908506148525) * r + 0.13692988092273580531) * r +
                0.59983220655588793769) * r + 1.0);
    }
    return q < 0.0 ? -val : val;
}

double cdf(const MarginalDist& dist, double x) {
    validate(dist);
    return std::visit(Overloaded{
                          [x](const Normal& d) { return normal_cdf((x - d.mu) / d.sigma); },
                          [x](const Pareto& d) {
                              if (x <= d.scale) return 0.0;
                              return -std::expm1(d.shape * std::log(d.scale / x));
                          },
                          [x](const Weibull& d) {
                              if (x <= 0.0) return 0.0;
                              return -std::expm1(-std::pow(x / d.scale, d.shape));
                          },
                      },
                      dist);
}

double quantile(const MarginalDist& dist, double p) {
    validate(dist);
    if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile: p must lie in (0, 1)");
    return std::visit(Overloaded{
                          [p](const Normal& d) { return d.mu + d.sigma * normal_quantile(p); },
                          [p](const Pareto& d) {
                              return d.scale * std::exp(-std::log1p(-p) / d.shape);
                          },
                          [p](const Weibull& d) {
                              return d.scale * std::pow(-std::log1p(-p), 1.0 / d.shape);
                          },
                      },
                      dist);
}

double mean(const MarginalDist& dist) {
    validate(dist);
    return std::visit(Overloaded{
                          [](const Normal& d) { return d.mu; },
                          [](const Pareto& d) {
                              if (d.shape <= 1.0) return std::numeric_limits<double>::infinity();
                              return d.shape * d.scale / (d.shape - 1.0);
                          },
                          [](const Weibull& d) { return d.scale * std::tgamma(1.0 + 1.0 / d.shape); },
                      },
                      dist);
}

std::array<std::array<double, 2>, 2> cholesky_2x2(const BivariateNormalParams& params) {
    const auto& s = params.sigma;
    for (double v : {s[0][0], s[0][1], s[1][0], s[1][1], params.mu[0], params.mu[1]}) {
        if (!std::isfinite(v)) throw ParameterError("bivariate normal: non-finite parameter");
    }
    if (std::abs(s[0][1] - s[1][0]) > 1e-12) {
        throw FactorizationError("bivariate normal: covariance is not symmetric");
    }
    if (s[0][0] < 0.0 || s[1][1] < 0.0) {
        throw FactorizationError("bivariate normal: negative variance");
    }
    if (s[0][0] * s[1][1] - s[0][1] * s[0][1] < -1e-12) {
        throw FactorizationError("bivariate normal: covariance is not positive semidefinite");
    }

    std::array<std::array<double, 2>, 2> l{};
    l[0][0] = std::sqrt(s[0][0]);
    l[1][0] = l[0][0] > 0.0 ? s[1][0] / l[0][0] : 0.0;
    const double rem = s[1][1] - l[1][0] * l[1][0];
    l[1][1] = rem > 0.0 ? std::sqrt(rem) : 0.0;
    return l;
}

PairedSample sample_bivariate_normal(const BivariateNormalParams& params, std::size_t n,
                                     std::uint64_t seed) {
    if (n == 0) throw ParameterError("sample size must be at least 1");
    const auto l = cholesky_2x2(params);
    Rng rng(seed, 0);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double z1 = rng.normal();
        const double z2 = rng.normal();
        x[i] = params.mu[0] + l[0][0] * z1;
        y[i] = params.mu[1] + l[1][0] * z1 + l[1][1] * z2;
    }
    return PairedSample(std::move(x), std::move(y));
}

void validate(const ClaytonParams& params) { require_positive(params.theta, "clayton theta"); }

double clayton_copula(double theta, double u, double v) {
    if (u <= 0.0 || v <= 0.0) return 0.0;
    return std::pow(std::pow(u, -theta) + std::pow(v, -theta) - 1.0, -1.0 / theta);
}

double clayton_partial_first(double theta, double u, double v) {
    const double s = std::pow(u, -theta) + std::pow(v, -theta) - 1.0;
    return std::pow(u, -theta - 1.0) * std::pow(s, -1.0 / theta - 1.0);
}

double clayton_partial_second(double theta, double u, double v) {
    return clayton_partial_first(theta, v, u);
}

PairedSample sample_clayton_copula(const ClaytonParams& params, std::size_t n, std::uint64_t seed) {
    validate(params);
    if (n == 0) throw ParameterError("sample size must be at least 1");
    const double theta = params.theta;
    Rng rng(seed, 0);
    std::vector<double> u(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double ui = rng.uniform_open();
        const double w = rng.uniform_open();
        const double a = std::pow(w, -theta / (1.0 + theta)) - 1.0;
        double vi = std::pow(a * std::pow(ui, -theta) + 1.0, -1.0 / theta);
        // Rounding can push v onto the closed boundary; keep it interior so
        // the marginal quantiles stay finite.
        vi = std::clamp(vi, 0x1.0p-60, 1.0 - 0x1.0p-53);
        u[i] = ui;
        v[i] = vi;
    }
    return PairedSample(std::move(u), std::move(v));
}

PairedSample sample_clayton_bivariate(const ClaytonParams& params, const MarginalDist& mx,
                                      const MarginalDist& my, std::size_t n, std::uint64_t seed) {
    validate(mx);
    validate(my);
    const auto uv = sample_clayton_copula(params, n, seed);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = quantile(mx, uv.x()[i]);
        y[i] = quantile(my, uv.y()[i]);
    }
    return PairedSample(std::move(x), std::move(y));
}

}  // namespace stwj
