#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "stwj/errors.hpp"
#include "stwj/io.hpp"
#include "stwj/montecarlo.hpp"

using namespace stwj;

namespace {

double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

TEST(Scenario, NamesRoundTrip) {
    for (CaseId id : kAllCases) {
        ASSERT_TRUE(parse_case(to_string(id)).has_value());
        EXPECT_EQ(*parse_case(to_string(id)), id);
        EXPECT_EQ(scenario(id).id, id);
    }
    EXPECT_FALSE(parse_case("C9").has_value());
    EXPECT_EQ(*parse_test_kind("wilcoxon"), TestKind::wilcoxon);
    EXPECT_FALSE(parse_test_kind("ks").has_value());
}

TEST(Scenario, FixedParameters) {
    const auto& c3 = std::get<BivariateNormalParams>(scenario(CaseId::C3).model);
    EXPECT_EQ(c3.mu[0], 2.0);
    EXPECT_EQ(c3.mu[1], 2.01);
    EXPECT_EQ(c3.sigma[0][1], 1.5);
    const auto& c7 = std::get<ClaytonScenario>(scenario(CaseId::C7).model);
    EXPECT_EQ(c7.copula.theta, 0.5);
    EXPECT_EQ(std::get<Weibull>(c7.x).shape, 0.75);
    EXPECT_EQ(std::get<Weibull>(c7.x).scale, 4.0);
    EXPECT_EQ(std::get<Weibull>(c7.y).shape, 0.25);
    const auto& c5 = std::get<ClaytonScenario>(scenario(CaseId::C5).model);
    EXPECT_EQ(std::get<Pareto>(c5.x).shape, 5.0);
    EXPECT_EQ(std::get<Pareto>(c5.x).scale, 4.0);
}

TEST(Scenario, CaseOneMeans) {
    const auto s = generate_scenario(scenario(CaseId::C1), 100000, 11);
    EXPECT_NEAR(mean_of(s.x()), 2.0, 0.05);
    EXPECT_NEAR(mean_of(s.y()), 4.0, 0.05);
}

TEST(Scenario, CaseFourParetoMean) {
    const auto s = generate_scenario(scenario(CaseId::C4), 100000, 12);
    EXPECT_NEAR(mean_of(s.x()), 2.0, 0.1);
}

TEST(Scenario, CaseSixWeibullMean) {
    const auto s = generate_scenario(scenario(CaseId::C6), 100000, 13);
    EXPECT_NEAR(mean_of(s.x()), 2.0 * std::tgamma(1.0 + 1.0 / 6.0), 0.02);
}

TEST(Scenario, DeterministicPerSeed) {
    for (CaseId id : kAllCases) {
        const auto a = generate_scenario(scenario(id), 50, 99);
        const auto b = generate_scenario(scenario(id), 50, 99);
        const auto c = generate_scenario(scenario(id), 50, 100);
        EXPECT_TRUE(std::equal(a.x().begin(), a.x().end(), b.x().begin()));
        EXPECT_TRUE(std::equal(a.y().begin(), a.y().end(), b.y().begin()));
        EXPECT_FALSE(std::equal(a.x().begin(), a.x().end(), c.x().begin()));
    }
}

TEST(Experiment, Validation) {
    ExperimentConfig cfg;
    cfg.replications = 0;
    EXPECT_THROW(validate(cfg), ParameterError);
    cfg = {};
    cfg.levels = {0.05, 1.0};
    EXPECT_THROW(validate(cfg), ParameterError);
    cfg = {};
    cfg.tests.clear();
    EXPECT_THROW(validate(cfg), ParameterError);
    cfg = {};
    cfg.n = 1;
    EXPECT_THROW(validate(cfg), ParameterError);
    EXPECT_NO_THROW(validate(ExperimentConfig{}));
}

TEST(Experiment, SingleReplicationRateIsZeroOrOne) {
    ExperimentConfig cfg;
    cfg.scenario = CaseId::C3;
    cfg.n = 50;
    cfg.replications = 1;
    cfg.n_sims = 500;
    cfg.tests = {TestKind::stwj, TestKind::t, TestKind::wilcoxon};
    const auto rep = run_rejection_experiment(cfg);
    ASSERT_EQ(rep.entries.size(), 6u);
    for (const auto& e : rep.entries) {
        EXPECT_TRUE(e.rate == 0.0 || e.rate == 1.0);
        EXPECT_EQ(e.rate, static_cast<double>(e.rejections));
    }
    EXPECT_THROW(rep.rate(TestKind::stwj, 0.10), ParameterError);
}

TEST(Experiment, ReproducibleAcrossThreadCounts) {
    ExperimentConfig cfg;
    cfg.scenario = CaseId::C8;
    cfg.n = 40;
    cfg.replications = 24;
    cfg.n_sims = 400;
    cfg.master_seed = 5;
    cfg.tests = {TestKind::stwj, TestKind::t, TestKind::wilcoxon};
    const auto a = run_rejection_experiment(cfg);
    cfg.threads = 4;
    const auto b = run_rejection_experiment(cfg);
    ASSERT_EQ(a.entries.size(), b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        EXPECT_EQ(a.entries[i].rejections, b.entries[i].rejections);
        EXPECT_EQ(a.entries[i].failures, b.entries[i].failures);
    }
    std::ostringstream ca, cb;
    io::write_rejection_csv(ca, {a});
    io::write_rejection_csv(cb, {b});
    EXPECT_EQ(ca.str(), cb.str());
    auto ja = io::to_json(a);
    auto jb = io::to_json(b);
    EXPECT_EQ(ja.dump(), jb.dump());
}

TEST(Experiment, ConservativeUnderCaseOne) {
    ExperimentConfig cfg;
    cfg.scenario = CaseId::C1;
    cfg.n = 200;
    cfg.replications = 500;
    cfg.master_seed = 2024;
    const auto rep = run_rejection_experiment(cfg);
    EXPECT_LE(rep.rate(TestKind::stwj, 0.05), 0.07);
}

TEST(Experiment, ConsistentUnderCaseTwo) {
    ExperimentConfig cfg;
    cfg.scenario = CaseId::C2;
    cfg.replications = 200;
    cfg.master_seed = 77;
    double previous = -1.0;
    for (std::size_t n : {20u, 50u, 100u}) {
        cfg.n = n;
        const double rate = run_rejection_experiment(cfg).rate(TestKind::stwj, 0.05);
        EXPECT_GE(rate, previous) << "n=" << n;
        if (n >= 50) EXPECT_GE(rate, 0.99) << "n=" << n;
        previous = rate;
    }
}

TEST(Experiment, CsvLayout) {
    ExperimentConfig cfg;
    cfg.scenario = CaseId::C2;
    cfg.n = 30;
    cfg.replications = 3;
    cfg.n_sims = 200;
    cfg.tests = {TestKind::t};
    cfg.levels = {0.05};
    const auto rep = run_rejection_experiment(cfg);
    std::ostringstream out;
    io::write_rejection_csv(out, {rep});
    std::istringstream in(out.str());
    std::string header, row, extra;
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_EQ(header, "case,n,test,level,rate,failures");
    EXPECT_EQ(row.rfind("C2,30,t,0.05,", 0), 0u) << row;
    EXPECT_FALSE(std::getline(in, extra));
    const auto j = io::to_json(rep);
    EXPECT_FALSE(j.contains("wall_seconds"));
}
