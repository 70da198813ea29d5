#pragma once

#include <cstddef>

#include "stwj/empirical.hpp"

namespace stwj {

enum class BaselineMethod { students_t, wilcoxon };

const char* to_string(BaselineMethod method);

/// One-sided paired test with "X smaller than Y" as the null; a small
/// p_value is evidence that Y - X tends to be negative.
struct BaselineResult {
    double statistic = 0.0;
    double p_value = 1.0;
    BaselineMethod method = BaselineMethod::students_t;
    std::size_t n_effective = 0;
};

/// Regularized incomplete beta I_x(a, b) via Lentz's continued fraction.
double incomplete_beta(double a, double b, double x);

/// P(T <= t) for Student's t with df degrees of freedom.
double student_t_cdf(double t, double df);

/// t = mean(y - x) / (sd(y - x) / sqrt(n)), p = P(T_{n-1} <= t).
BaselineResult paired_t_test(const PairedSample& s);

enum class WilcoxonPValue { automatic, exact, normal };

/// Largest number of nonzero differences for which `automatic` enumerates.
inline constexpr std::size_t kWilcoxonExactLimit = 12;

/// Signed-rank test on y - x. Zeros are dropped, tied |y - x| get midranks,
/// W+ sums the ranks of positive differences and p = P(W+ <= observed).
/// The normal route uses the tie-corrected variance and a +0.5 continuity
/// correction.
BaselineResult wilcoxon_signed_rank(const PairedSample& s,
                                    WilcoxonPValue route = WilcoxonPValue::automatic);

}  // namespace stwj
