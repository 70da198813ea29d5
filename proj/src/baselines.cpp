#include "stwj/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "stwj/distributions.hpp"
#include "stwj/errors.hpp"

namespace stwj {

namespace {

double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 500;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw NumericalError("incomplete beta continued fraction did not converge");
}

}  // namespace

const char* to_string(BaselineMethod method) {
    switch (method) {
        case BaselineMethod::students_t: return "students_t";
        case BaselineMethod::wilcoxon: return "wilcoxon";
    }
    return "unknown";
}

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw ParameterError("incomplete beta: a and b must be positive");
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete beta: x must lie in [0, 1]");
    if (x == 0.0 || x == 1.0) return x;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
    if (!(df > 0.0)) throw ParameterError("degrees of freedom must be positive");
    if (std::isinf(t)) return t > 0.0 ? 1.0 : 0.0;
    const double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
    return t > 0.0 ? 1.0 - tail : tail;
}

BaselineResult paired_t_test(const PairedSample& s) {
    const std::size_t n = s.size();
    if (n < 2) throw InsufficientDataError("paired t test needs at least 2 pairs");
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = s.y()[i] - s.x()[i];

    const double nn = static_cast<double>(n);
    const double mean = std::accumulate(d.begin(), d.end(), 0.0) / nn;
    double ss = 0.0;
    for (double v : d) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (nn - 1.0));
    if (!(sd > 0.0)) throw DegenerateSampleError("paired differences have zero variance");

    BaselineResult r;
    r.method = BaselineMethod::students_t;
    r.n_effective = n;
    r.statistic = mean / (sd / std::sqrt(nn));
    r.p_value = student_t_cdf(r.statistic, nn - 1.0);
    return r;
}

BaselineResult wilcoxon_signed_rank(const PairedSample& s, WilcoxonPValue route) {
    std::vector<double> d;
    d.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double v = s.y()[i] - s.x()[i];
        if (v != 0.0) d.push_back(v);
    }
    const std::size_t n = d.size();
    if (n == 0) throw DegenerateSampleError("all paired differences are zero");

    // Twice the midranks of |d|, kept integral for exact enumeration.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return std::abs(d[a]) < std::abs(d[b]); });
    std::vector<std::int64_t> rank2(n);
    double tie_term = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && std::abs(d[order[j + 1]]) == std::abs(d[order[i]])) ++j;
        const auto doubled = static_cast<std::int64_t>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k) rank2[order[k]] = doubled;
        const double t = static_cast<double>(j - i + 1);
        tie_term += t * t * t - t;
        i = j + 1;
    }

    std::int64_t w2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i] > 0.0) w2 += rank2[i];
    }

    BaselineResult r;
    r.method = BaselineMethod::wilcoxon;
    r.n_effective = n;
    r.statistic = static_cast<double>(w2) / 2.0;

    const bool exact = route == WilcoxonPValue::exact ||
                       (route == WilcoxonPValue::automatic && n <= kWilcoxonExactLimit);
    if (exact) {
        if (n > 24) throw CapacityError("exact signed-rank enumeration limited to 24 differences");
        std::uint64_t at_most = 0;
        const std::uint64_t patterns = std::uint64_t{1} << n;
        for (std::uint64_t mask = 0; mask < patterns; ++mask) {
            std::int64_t w = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (mask >> i & 1U) w += rank2[i];
            }
            if (w <= w2) ++at_most;
        }
        r.p_value = static_cast<double>(at_most) / static_cast<double>(patterns);
    } else {
        const double nn = static_cast<double>(n);
        const double mean = nn * (nn + 1.0) / 4.0;
        const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
        const double z = (r.statistic - mean + 0.5) / std::sqrt(var);
        r.p_value = std::clamp(normal_cdf(z), 0.0, 1.0);
    }
    return r;
}

}  // namespace stwj
