#include "stwj/empirical.hpp"

#include <algorithm>
#include <cmath>

#include "stwj/errors.hpp"

namespace stwj {

PairedSample::PairedSample(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    if (x_.size() != y_.size()) {
        throw ParameterError("paired sample: x and y differ in length");
    }
    if (x_.empty()) {
        throw ParameterError("paired sample: no observations");
    }
    for (std::size_t i = 0; i < x_.size(); ++i) {
        if (!std::isfinite(x_[i]) || !std::isfinite(y_[i])) {
            throw ParameterError("paired sample: non-finite value at index " + std::to_string(i));
        }
    }
}

Differences differences(const PairedSample& s) {
    Differences d;
    d.x_minus_y.resize(s.size());
    d.y_minus_x.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        d.x_minus_y[i] = s.x()[i] - s.y()[i];
        d.y_minus_x[i] = -d.x_minus_y[i];
    }
    return d;
}

EmpiricalSurvival::EmpiricalSurvival(std::vector<double> values) : sorted_(std::move(values)) {
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalSurvival::operator()(double t) const {
    if (sorted_.empty()) return 0.0;
    const auto above = sorted_.end() - std::upper_bound(sorted_.begin(), sorted_.end(), t);
    return static_cast<double>(above) / static_cast<double>(sorted_.size());
}

namespace {

EmpiricalSurvival make_survival(const PairedSample& s, bool x_minus_y) {
    auto d = differences(s);
    return EmpiricalSurvival(x_minus_y ? std::move(d.x_minus_y) : std::move(d.y_minus_x));
}

}  // namespace

DifferenceSurvivals::DifferenceSurvivals(const PairedSample& s)
    : x_minus_y(make_survival(s, true)), y_minus_x(make_survival(s, false)) {}

double statistic_stwj(const PairedSample& s) {
    const DifferenceSurvivals surv(s);
    const auto n = static_cast<double>(s.size());

    // Candidates: 0 and every nonnegative element of Z = {x-y} u {y-x}. Z is
    // symmetric, so its nonnegative part is {|x_i - y_i|}.
    double best = surv.x_minus_y(0.0) - surv.y_minus_x(0.0);
    for (double v : surv.x_minus_y.sorted_values()) {
        const double t = std::abs(v);
        best = std::max(best, surv.x_minus_y(t) - surv.y_minus_x(t));
    }
    return std::sqrt(n) * best;
}

}  // namespace stwj
