#include "stwj/gptest.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "stwj/errors.hpp"
#include "stwj/parallel.hpp"
#include "stwj/random.hpp"

namespace stwj {

namespace {

constexpr std::size_t kSimulationBlock = 256;

double max_abs_difference(const PairedSample& s) {
    double m = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) m = std::max(m, std::abs(s.x()[i] - s.y()[i]));
    return m;
}

TestResult run_test(const PairedSample& s, const Grid& grid, std::size_t n_sims, std::uint64_t seed,
                    std::size_t threads) {
    TestResult r;
    r.statistic = statistic_stwj(s);
    r.n = s.size();
    r.k = grid.k();
    r.n_sims = n_sims;
    r.seed = seed;

    auto cov = build_covariance(grid, s);
    const auto bounds = pvalue_bounds(cov, r.statistic, n_sims, seed, threads);
    r.p1 = bounds.p1;
    r.p2 = bounds.p2;
    r.jitter = cov.jitter_applied;
    for (double level : kDefaultLevels) r.decisions[level] = r.reject_at(level);
    return r;
}

}  // namespace

Grid::Grid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.size() < 2) throw ParameterError("grid needs at least two points");
    if (points_.front() != 0.0) throw ParameterError("grid must start at 0");
    for (std::size_t i = 1; i < points_.size(); ++i) {
        if (!(points_[i] > points_[i - 1]) || !std::isfinite(points_[i])) {
            throw ParameterError("grid points must be finite and strictly increasing");
        }
    }
}

Grid build_grid(const PairedSample& s, std::size_t k) {
    if (k < 1) throw ParameterError("grid size k must be at least 1");
    const double top = max_abs_difference(s);
    if (!(top > 0.0)) throw DegenerateSampleError("all paired differences are zero");
    std::vector<double> pts(k + 1);
    for (std::size_t i = 0; i < k; ++i) pts[i] = top * static_cast<double>(i) / static_cast<double>(k);
    pts[k] = top;
    return Grid(std::move(pts));
}

Grid discrete_support_grid(const PairedSample& s) {
    std::vector<double> pts{0.0};
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double d = std::abs(s.x()[i] - s.y()[i]);
        if (d > 0.0) pts.push_back(d);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 2) throw DegenerateSampleError("all paired differences are zero");
    return Grid(std::move(pts));
}

GpCovariance build_covariance(const Grid& g, const PairedSample& s) {
    const DifferenceSurvivals surv(s);
    const auto t = g.points();
    const std::size_t m = t.size();

    std::vector<double> both(m), drift(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double f = surv.x_minus_y(t[i]);
        const double h = surv.y_minus_x(t[i]);
        both[i] = f + h;
        drift[i] = f - h;
    }

    GpCovariance c;
    c.matrix.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            // t is increasing, so t_i v t_j = t_i for j <= i.
            const double v = both[i] - drift[i] * drift[j];
            c.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            c.matrix(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
        }
    }
    return c;
}

Eigen::MatrixXd regularized_cholesky(GpCovariance& c, double eps) {
    if (!(eps > 0.0)) throw ParameterError("jitter must be positive");
    const auto m = c.matrix.rows();
    if (m == 0 || c.matrix.cols() != m) throw ParameterError("covariance must be square and nonempty");

    for (double e = eps;; e *= 10.0) {
        const Eigen::MatrixXd shifted = c.matrix + e * Eigen::MatrixXd::Identity(m, m);
        Eigen::LLT<Eigen::MatrixXd> llt(shifted);
        if (llt.info() == Eigen::Success) {
            c.jitter_applied = e;
            return llt.matrixL();
        }
        if (e * 10.0 > kMaxJitter * (1.0 + 1e-9)) {
            std::ostringstream msg;
            msg << "cholesky failed with jitter up to " << e << " (size " << m << ", min diagonal "
                << c.matrix.diagonal().minCoeff() << ", max asymmetry "
                << (c.matrix - c.matrix.transpose()).cwiseAbs().maxCoeff() << ")";
            throw FactorizationError(msg.str());
        }
    }
}

std::vector<double> simulate_maxima(const Eigen::MatrixXd& lower, std::size_t n_sims,
                                    std::uint64_t seed, std::size_t threads) {
    const auto m = lower.rows();
    std::vector<double> maxima(n_sims);
    const std::size_t blocks = (n_sims + kSimulationBlock - 1) / kSimulationBlock;
    parallel_for(blocks, threads, [&](std::size_t b) {
        Rng rng(seed, b);
        Eigen::VectorXd z(m);
        Eigen::VectorXd gp(m);
        const std::size_t end = std::min(n_sims, (b + 1) * kSimulationBlock);
        for (std::size_t i = b * kSimulationBlock; i < end; ++i) {
            for (Eigen::Index j = 0; j < m; ++j) z(j) = rng.normal();
            gp.noalias() = lower.triangularView<Eigen::Lower>() * z;
            maxima[i] = gp.maxCoeff();
        }
    });
    return maxima;
}

PValueBounds pvalue_bounds(const Eigen::MatrixXd& lower, double stat, std::size_t n_sims,
                           std::uint64_t seed, std::size_t threads) {
    if (n_sims < 100) throw ParameterError("at least 100 simulations are required");
    if (std::isnan(stat)) throw ParameterError("statistic is NaN");
    const auto maxima = simulate_maxima(lower, n_sims, seed, threads);
    std::size_t exceed = 0;
    std::size_t inside = 0;
    for (double v : maxima) {
        if (v > stat) ++exceed;
        if (v <= stat) ++inside;
    }
    const auto total = static_cast<double>(n_sims);
    return {static_cast<double>(exceed) / total, 1.0 - static_cast<double>(inside) / total};
}

PValueBounds pvalue_bounds(GpCovariance& c, double stat, std::size_t n_sims, std::uint64_t seed,
                           std::size_t threads) {
    const auto lower = regularized_cholesky(c);
    return pvalue_bounds(lower, stat, n_sims, seed, threads);
}

double TestResult::min_p() const {
    double p = 1.0;
    if (p1) p = std::min(p, *p1);
    if (p2) p = std::min(p, *p2);
    return p;
}

TestResult test_st_wj(const PairedSample& s, std::size_t k, std::size_t n_sims, std::uint64_t seed,
                      std::size_t threads) {
    if (s.size() < 2) throw InsufficientDataError("the test needs at least 2 pairs");
    return run_test(s, build_grid(s, k), n_sims, seed, threads);
}

TestResult test_st_wj_discrete_support(const PairedSample& s, std::size_t n_sims, std::uint64_t seed,
                                       std::size_t threads) {
    if (s.size() < 2) throw InsufficientDataError("the test needs at least 2 pairs");
    return run_test(s, discrete_support_grid(s), n_sims, seed, threads);
}

}  // namespace stwj
