// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "stwj/errors.hpp"
#include "stwj/gptest.hpp"
#include "stwj/io.hpp"
#include "stwj/montecarlo.hpp"
#include "stwj/oracle.hpp"
#include "support/generators.hpp"

using namespace stwj;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    std::function<Outcome()> run;
};

std::string fmt(double v) { return io::format_double(v); }

/// Every stochastic run is recorded here so it can be replayed for the
/// determinism criterion.
struct Artifacts {
    std::vector<RejectionReport> reports;
    nlohmann::ordered_json extra = nlohmann::ordered_json::object();
};

ExperimentConfig desk_config(CaseId id, std::size_t n, std::uint64_t seed,
                             std::vector<TestKind> tests = {TestKind::stwj}) {
    ExperimentConfig cfg;
    cfg.scenario = id;
    cfg.n = n;
    cfg.replications = 200;
    cfg.k = 100;
    cfg.n_sims = 2000;
    cfg.levels = {0.05, 0.01};
    cfg.master_seed = seed;
    cfg.tests = std::move(tests);
    return cfg;
}

double stwj_rate(Artifacts& art, CaseId id, std::size_t n, std::uint64_t seed) {
    art.reports.push_back(run_rejection_experiment(desk_config(id, n, seed)));
    return art.reports.back().rate(TestKind::stwj, 0.05);
}

Outcome rate_at_most(Artifacts& art, CaseId id, std::size_t n, std::uint64_t seed, double bound) {
    const double r = stwj_rate(art, id, n, seed);
    return {r <= bound, std::string(to_string(id)) + " n=" + std::to_string(n) + " rate " + fmt(r) +
                            " (need <= " + fmt(bound) + ")"};
}

Outcome rate_at_least(Artifacts& art, CaseId id, std::size_t n, std::uint64_t seed, double bound) {
    const double r = stwj_rate(art, id, n, seed);
    return {r >= bound, std::string(to_string(id)) + " n=" + std::to_string(n) + " rate " + fmt(r) +
                            " (need >= " + fmt(bound) + ")"};
}

std::vector<DiscreteBivariate> oracle_instances() {
    std::mt19937_64 gen(9);
    std::vector<DiscreteBivariate> out;
    for (int i = 0; i < 100; ++i) out.push_back(testkit::random_discrete(gen, i % 3 == 0));
    return out;
}

Outcome oracle_equivalence() {
    int disagreements = 0, ordered = 0;
    for (const auto& d : oracle_instances()) {
        const bool exact = check_st_wj_discrete(d).holds;
        ordered += exact ? 1 : 0;
        if (exact != testkit::dense_scan_st_wj(d)) ++disagreements;
    }
    return {disagreements == 0, std::to_string(disagreements) + " disagreements over 100 instances (" +
                                    std::to_string(ordered) + " ordered)"};
}

Outcome implication_chain() {
    int violations = 0, ordered = 0;
    for (const auto& d : oracle_instances()) {
        if (!check_st_wj_discrete(d).holds) continue;
        ++ordered;
        const auto pr = check_precedence(d);
        if (d.mean_x() > d.mean_y() + kProbabilityTolerance) ++violations;
        if (pr.p_x_greater > pr.p_y_greater + kProbabilityTolerance) ++violations;
    }
    return {violations == 0 && ordered > 0,
            std::to_string(violations) + " violations over " + std::to_string(ordered) + " ordered instances"};
}

Outcome normal_analytic() {
    std::mt19937_64 gen(11);
    int agree = 0;
    for (int i = 0; i < 20; ++i) {
        const auto p = testkit::random_normal_params(gen);
        const bool analytic = analytic_st_wj_bivariate_normal(p);
        const bool discrete = check_st_wj_discrete(discretize_bivariate_normal(p, 200)).holds;
        agree += analytic == discrete ? 1 : 0;
    }
    BivariateNormalParams cx;
    cx.mu = {0.0, 1.0};
    cx.sigma = {{{4.0, 0.5}, {0.5, 1.0}}};
    const auto d = discretize_bivariate_normal(cx, 200);
    const bool cx_order = analytic_st_wj_bivariate_normal(cx) && check_st_wj_discrete(d).holds;
    const auto marginals = check_st_marginals_discrete(d);
    return {agree == 20 && cx_order && marginals == MarginalOrder::incomparable,
            std::to_string(agree) + "/20 agree; counterexample st:wj " + (cx_order ? "true" : "false") +
                ", marginals " + to_string(marginals)};
}

Outcome covariance_formula(Artifacts& art) {
    const auto& spec = scenario(CaseId::C1);
    const auto plug_in = generate_scenario(spec, 100000, 1201);
    const auto fresh = generate_scenario(spec, 100000, 1202);
    const Grid grid({0.0, 0.25, 0.5, 1.0, 2.0});
    const auto cov = build_covariance(grid, plug_in);

    const auto t = grid.points();
    const std::size_t m = t.size(), n = fresh.size();
    std::vector<double> mean(m, 0.0), prod(m * m, 0.0);
    std::vector<double> l(m);
    for (std::size_t r = 0; r < n; ++r) {
        const double d = fresh.x()[r] - fresh.y()[r];
        for (std::size_t i = 0; i < m; ++i) l[i] = (d > t[i] ? 1.0 : 0.0) - (-d > t[i] ? 1.0 : 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            mean[i] += l[i];
            for (std::size_t j = 0; j < m; ++j) prod[i * m + j] += l[i] * l[j];
        }
    }
    double worst = 0.0;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double mc = prod[i * m + j] / n - (mean[i] / n) * (mean[j] / n);
            worst = std::max(worst, std::abs(mc - cov.matrix(i, j)));
            rows.push_back({{"i", i}, {"j", j}, {"formula", cov.matrix(i, j)}, {"monte_carlo", mc}});
        }
    }
    art.extra["covariance_check"] = rows;
    return {worst <= 0.02, "max |formula - monte carlo| = " + fmt(worst) + " (need <= 0.02)"};
}

Outcome calibration(Artifacts& art) {
    const Eigen::MatrixXd unit = Eigen::MatrixXd::Identity(1, 1);
    const auto p = pvalue_bounds(unit, 1.645, 1000000, 13);
    art.extra["calibration"] = {{"p1", p.p1}, {"p2", p.p2}};
    return {std::abs(p.p1 - 0.05) <= 0.002, "p1 = " + fmt(p.p1) + " (need 0.05 +- 0.002)"};
}

Outcome portfolio_closure() {
    std::mt19937_64 gen(14);
    const auto w = testkit::dyadic_weights();
    int violations = 0, checks = 0;
    for (int rep = 0; rep < 50; ++rep) {
        const auto t = testkit::random_ordered_triple(gen, 30);
        const std::size_t n = t.x.size();
        for (double alpha : w) {
            std::vector<double> p1(n), p2(n);
            for (std::size_t i = 0; i < n; ++i) {
                p1[i] = (1 - alpha) * t.x[i] + alpha * t.z[i];
                p2[i] = (1 - alpha) * t.y[i] + alpha * t.z[i];
            }
            ++checks;
            if (!check_st_wj_discrete(empirical_law(PairedSample(p1, p2))).holds) ++violations;
        }
        for (std::size_t a = 0; a < w.size(); ++a) {
            for (std::size_t b = a + 1; b < w.size(); ++b) {
                std::vector<double> p1(n), p2(n);
                for (std::size_t i = 0; i < n; ++i) {
                    p1[i] = (1 - w[a]) * t.x[i] + w[a] * t.y[i];
                    p2[i] = (1 - w[b]) * t.x[i] + w[b] * t.y[i];
                }
                ++checks;
                if (!check_st_wj_discrete(empirical_law(PairedSample(p1, p2))).holds) ++violations;
            }
        }
    }
    return {violations == 0, std::to_string(violations) + " violations in " + std::to_string(checks) +
                                 " portfolio comparisons over 50 samples"};
}

struct Files {
    std::string csv, json, extra;
};

Files render(const Artifacts& art) {
    std::ostringstream csv;
    io::write_rejection_csv(csv, art.reports);
    return {csv.str(), io::to_json(art.reports).dump(2) + "\n", art.extra.dump(2) + "\n"};
}

/// Replays every stochastic run (with a different thread count) and compares
/// the rendered report files byte for byte.
Outcome determinism(const Artifacts& first) {
    Artifacts again;
    for (const auto& r : first.reports) {
        auto cfg = r.config;
        cfg.threads = 2;
        auto rep = run_rejection_experiment(cfg);
        rep.config.threads = r.config.threads;
        again.reports.push_back(std::move(rep));
    }
    if (first.extra.contains("covariance_check")) covariance_formula(again);
    if (first.extra.contains("calibration")) calibration(again);
    const auto a = render(first), b = render(again);
    const bool same = a.csv == b.csv && a.json == b.json && a.extra == b.extra;
    return {same && !first.reports.empty(),
            std::to_string(first.reports.size()) + " rejection experiments and " +
                std::to_string(first.extra.size()) + " auxiliary runs replayed; files " +
                (same ? "byte-identical" : "DIFFER")};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance checks"};
    std::string artifacts = "acceptance_artifacts";
    std::vector<int> only;
    app.add_option("--artifacts", artifacts, "Directory for report files")->capture_default_str();
    app.add_option("--only", only, "Run only these criterion numbers")->delimiter(',');
    CLI11_PARSE(app, argc, argv);

    Artifacts art;
    std::vector<Criterion> criteria{
        {1, "Case 1 st:wj rate, n=100", [&] { return rate_at_most(art, CaseId::C1, 100, 1, 0.01); }},
        {2, "Case 2 st:wj rate, n=50", [&] { return rate_at_least(art, CaseId::C2, 50, 2, 0.99); }},
        {3, "Case 4 st:wj rate, n=200", [&] { return rate_at_most(art, CaseId::C4, 200, 3, 0.02); }},
        {4, "Case 5 st:wj rate, n=50", [&] { return rate_at_least(art, CaseId::C5, 50, 4, 0.98); }},
        {5, "Case 6 st:wj rate, n=50", [&] { return rate_at_least(art, CaseId::C6, 50, 5, 0.98); }},
        {6, "Case 7 st:wj rate n=100, t rate n=200",
         [&] {
             const auto st = rate_at_least(art, CaseId::C7, 100, 6, 0.97);
             art.reports.push_back(run_rejection_experiment(desk_config(CaseId::C7, 200, 6, {TestKind::t})));
             const double t = art.reports.back().rate(TestKind::t, 0.05);
             return Outcome{st.pass && t <= 0.01,
                            st.detail + "; t-test n=200 rate " + fmt(t) + " (need <= 0.01)"};
         }},
        {7, "Case 8 st:wj rate, n=100", [&] { return rate_at_least(art, CaseId::C8, 100, 7, 0.97); }},
        {8, "Case 3 st:wj rate, n=500 vs n=50",
         [&] {
             const double r50 = stwj_rate(art, CaseId::C3, 50, 8);
             const double r500 = stwj_rate(art, CaseId::C3, 500, 8);
             return Outcome{r500 >= 0.02 && r500 <= 0.18 && r500 < r50,
                            "rate n=500 " + fmt(r500) + " (need in [0.02, 0.18]), rate n=50 " + fmt(r50) +
                                " (need n=500 rate strictly below)"};
         }},
        {9, "Oracle agrees with dense scan", oracle_equivalence},
        {10, "Implication chain", implication_chain},
        {11, "Normal analytic criterion", normal_analytic},
        {12, "Covariance formula vs Monte Carlo", [&] { return covariance_formula(art); }},
        {13, "Gaussian bound calibration", [&] { return calibration(art); }},
        {14, "Portfolio closure", portfolio_closure},
        {15, "Determinism of report files", [&] { return determinism(art); }},
    };

    const std::set<int> selected(only.begin(), only.end());
    int failures = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += o.pass ? 0 : 1;
        std::ostringstream time;
        time.precision(3);
        time << secs;
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << o.detail << " ("
                  << time.str() << " s)" << std::endl;
    }

    std::filesystem::create_directories(artifacts);
    const auto files = render(art);
    io::write_text_file(std::filesystem::path(artifacts) / "rejection_rates.csv", files.csv);
    io::write_text_file(std::filesystem::path(artifacts) / "rejection_rates.json", files.json);
    io::write_text_file(std::filesystem::path(artifacts) / "auxiliary.json", files.extra);
    std::cout << failures << " criteria failed; artifacts in " << artifacts << std::endl;
    return failures == 0 ? 0 : 1;
}
