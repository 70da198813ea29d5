#include "stwj/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "stwj/errors.hpp"

namespace stwj {

namespace {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// A finite weighted law on the line with O(log n) survival queries.
class StepLaw {
public:
    explicit StepLaw(std::vector<std::pair<double, double>> mass) {
        std::sort(mass.begin(), mass.end());
        values_.reserve(mass.size());
        tail_.assign(mass.size() + 1, 0.0);
        for (const auto& [v, p] : mass) values_.push_back(v);
        CompensatedSum acc;
        for (std::size_t i = mass.size(); i-- > 0;) {
            acc.add(mass[i].second);
            tail_[i] = acc.value();
        }
    }

    double greater(double t) const {
        const auto i = std::upper_bound(values_.begin(), values_.end(), t) - values_.begin();
        return tail_[static_cast<std::size_t>(i)];
    }

    double greater_equal(double t) const {
        const auto i = std::lower_bound(values_.begin(), values_.end(), t) - values_.begin();
        return tail_[static_cast<std::size_t>(i)];
    }

    std::span<const double> values() const { return values_; }

private:
    std::vector<double> values_;
    std::vector<double> tail_;
};

/// First point where P(A > t) <= P(B > t) fails. Both survivals are
/// right-continuous steps that only move at support points, so comparing
/// the strict and weak tails at every support point covers every t.
std::optional<double> first_violation(const StepLaw& a, const StepLaw& b) {
    std::vector<double> points(a.values().begin(), a.values().end());
    points.insert(points.end(), b.values().begin(), b.values().end());
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    for (double c : points) {
        if (a.greater_equal(c) > b.greater_equal(c) + kProbabilityTolerance ||
            a.greater(c) > b.greater(c) + kProbabilityTolerance) {
            return c;
        }
    }
    return std::nullopt;
}

StepLaw difference_law(const DiscreteBivariate& d, Difference which) {
    std::vector<std::pair<double, double>> mass;
    mass.reserve(d.size());
    for (const auto& a : d.atoms()) {
        const double v = which == Difference::x_minus_y ? a.x - a.y : a.y - a.x;
        mass.emplace_back(v, a.p);
    }
    return StepLaw(std::move(mass));
}

StepLaw marginal_law(const DiscreteBivariate& d, bool first) {
    std::vector<std::pair<double, double>> mass;
    mass.reserve(d.size());
    for (const auto& a : d.atoms()) mass.emplace_back(first ? a.x : a.y, a.p);
    return StepLaw(std::move(mass));
}

std::vector<Atom> merge_atoms(std::vector<Atom> atoms) {
    std::sort(atoms.begin(), atoms.end(), [](const Atom& l, const Atom& r) {
        return l.x < r.x || (l.x == r.x && l.y < r.y);
    });
    std::vector<Atom> out;
    out.reserve(atoms.size());
    for (const auto& a : atoms) {
        if (!out.empty() && std::abs(out.back().x - a.x) <= 1e-12 &&
            std::abs(out.back().y - a.y) <= 1e-12) {
            out.back().p += a.p;
        } else {
            out.push_back(a);
        }
    }
    return out;
}

}  // namespace

DiscreteBivariate::DiscreteBivariate(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw ParameterError("discrete law: no atoms");
    CompensatedSum total;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const auto& a = atoms_[i];
        if (!std::isfinite(a.x) || !std::isfinite(a.y)) {
            throw ParameterError("discrete law: non-finite coordinate in atom " + std::to_string(i));
        }
        if (!(a.p > 0.0) || !std::isfinite(a.p)) {
            throw ParameterError("discrete law: nonpositive mass in atom " + std::to_string(i));
        }
        total.add(a.p);
    }
    if (std::abs(total.value() - 1.0) > 1e-12) {
        throw ParameterError("discrete law: masses sum to " + std::to_string(total.value()));
    }
}

DiscreteBivariate DiscreteBivariate::swapped() const {
    std::vector<Atom> out(atoms_.begin(), atoms_.end());
    for (auto& a : out) std::swap(a.x, a.y);
    return DiscreteBivariate(std::move(out));
}

double DiscreteBivariate::mean_x() const {
    CompensatedSum s;
    for (const auto& a : atoms_) s.add(a.p * a.x);
    return s.value();
}

double DiscreteBivariate::mean_y() const {
    CompensatedSum s;
    for (const auto& a : atoms_) s.add(a.p * a.y);
    return s.value();
}

DiscreteBivariate empirical_law(const PairedSample& s) {
    std::vector<Atom> atoms(s.size());
    const double p = 1.0 / static_cast<double>(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) atoms[i] = {s.x()[i], s.y()[i], p};
    // Equal masses of 1/n may not sum to exactly one in floating point.
    CompensatedSum total;
    for (const auto& a : atoms) total.add(a.p);
    atoms.back().p += 1.0 - total.value();
    return DiscreteBivariate(std::move(atoms));
}

double survival_of_difference(const DiscreteBivariate& d, Difference which, double t) {
    CompensatedSum s;
    for (const auto& a : d.atoms()) {
        const double v = which == Difference::x_minus_y ? a.x - a.y : a.y - a.x;
        if (v > t) s.add(a.p);
    }
    return s.value();
}

OrderVerdict check_st_wj_discrete(const DiscreteBivariate& d) {
    const auto violation =
        first_violation(difference_law(d, Difference::x_minus_y), difference_law(d, Difference::y_minus_x));
    return {!violation.has_value(), violation};
}

Precedence check_precedence(const DiscreteBivariate& d) {
    CompensatedSum xg, yg;
    for (const auto& a : d.atoms()) {
        if (a.x > a.y) xg.add(a.p);
        if (a.y > a.x) yg.add(a.p);
    }
    return {xg.value(), yg.value()};
}

const char* to_string(MarginalOrder order) {
    switch (order) {
        case MarginalOrder::x_le_y: return "x_le_y";
        case MarginalOrder::y_le_x: return "y_le_x";
        case MarginalOrder::incomparable: return "incomparable";
        case MarginalOrder::equal: return "equal";
    }
    return "unknown";
}

MarginalOrder check_st_marginals_discrete(const DiscreteBivariate& d) {
    const StepLaw lx = marginal_law(d, true);
    const StepLaw ly = marginal_law(d, false);
    const bool x_le_y = !first_violation(lx, ly).has_value();
    const bool y_le_x = !first_violation(ly, lx).has_value();
    if (x_le_y && y_le_x) return MarginalOrder::equal;
    if (x_le_y) return MarginalOrder::x_le_y;
    if (y_le_x) return MarginalOrder::y_le_x;
    return MarginalOrder::incomparable;
}

DiscreteBivariate convolve_independent(std::span<const DiscreteBivariate> ds,
                                       const ConvolveOptions& options) {
    if (ds.empty()) throw ParameterError("convolution of an empty list");
    std::vector<Atom> acc(ds.front().atoms().begin(), ds.front().atoms().end());
    for (std::size_t k = 1; k < ds.size(); ++k) {
        const auto next = ds[k].atoms();
        if (acc.size() > options.max_atoms / next.size()) {
            throw CapacityError("convolution would exceed " + std::to_string(options.max_atoms) + " atoms");
        }
        std::vector<Atom> out;
        out.reserve(acc.size() * next.size());
        for (const auto& a : acc) {
            for (const auto& b : next) out.push_back({a.x + b.x, a.y + b.y, a.p * b.p});
        }
        acc = options.merge ? merge_atoms(std::move(out)) : std::move(out);
    }
    // Products of masses drift from a unit total by a few ulps; renormalize.
    CompensatedSum total;
    for (const auto& a : acc) total.add(a.p);
    for (auto& a : acc) a.p /= total.value();
    return DiscreteBivariate(std::move(acc));
}

OrderVerdict check_copula_condition(const CopulaPartial& d_first, const CopulaPartial& d_second,
                                    std::size_t grid_size) {
    if (grid_size < 2) throw ParameterError("copula grid needs at least 2 points");
    const std::size_t g = grid_size;
    std::vector<double> grid(g);
    for (std::size_t i = 0; i < g; ++i) grid[i] = static_cast<double>(i + 1) / static_cast<double>(g + 1);

    for (std::size_t iu = 0; iu < g; ++iu) {
        for (std::size_t i1 = 0; i1 < g; ++i1) {
            const double lhs = d_first(grid[iu], grid[i1]);
            for (std::size_t i2 = i1; i2 < g; ++i2) {
                const double rhs = d_second(grid[i2], grid[iu]);
                if (lhs > rhs + 1e-12 * std::max(1.0, std::abs(rhs))) {
                    return {false, static_cast<double>((iu * g + i1) * g + i2)};
                }
            }
        }
    }
    return {true, std::nullopt};
}

OrderVerdict check_copula_condition(double theta, std::size_t grid_size) {
    validate(ClaytonParams{theta});
    return check_copula_condition(
        [theta](double u, double v) { return clayton_partial_first(theta, u, v); },
        [theta](double u, double v) { return clayton_partial_second(theta, u, v); }, grid_size);
}

bool analytic_st_wj_bivariate_normal(const BivariateNormalParams& params) {
    const auto& s = params.sigma;
    if (s[0][0] + s[1][1] - 2.0 * s[0][1] < -1e-12) {
        throw ParameterError("bivariate normal: Var(Y - X) would be negative");
    }
    return params.mu[0] <= params.mu[1];
}

DiscreteBivariate discretize_bivariate_normal(const BivariateNormalParams& params,
                                              std::size_t grid_per_axis, double span_sd) {
    if (grid_per_axis < 2) throw ParameterError("discretization needs at least 2 points per axis");
    const auto& s = params.sigma;
    const double sx = std::sqrt(s[0][0]);
    const double sy = std::sqrt(s[1][1]);
    if (!(sx > 0.0) || !(sy > 0.0)) throw ParameterError("discretization needs positive variances");
    const double rho = s[0][1] / (sx * sy);
    if (!(std::abs(rho) < 1.0)) throw ParameterError("discretization needs a nonsingular covariance");

    // Cell midpoints of [-span, span], mirrored exactly about zero.
    const std::size_t m = grid_per_axis;
    std::vector<double> z(m);
    for (std::size_t i = 0; i < (m + 1) / 2; ++i) {
        z[i] = -span_sd * static_cast<double>(m - 2 * i - 1) / static_cast<double>(m);
        z[m - 1 - i] = -z[i];
    }

    std::vector<Atom> atoms;
    atoms.reserve(m * m);
    CompensatedSum total;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double q = (z[i] * z[i] - 2.0 * rho * z[i] * z[j] + z[j] * z[j]) / (1.0 - rho * rho);
            const double w = std::exp(-0.5 * q);
            if (w > 0.0) {
                atoms.push_back({params.mu[0] + sx * z[i], params.mu[1] + sy * z[j], w});
                total.add(w);
            }
        }
    }
    const double norm = total.value();
    for (auto& a : atoms) a.p /= norm;
    return DiscreteBivariate(std::move(atoms));
}

}  // namespace stwj
