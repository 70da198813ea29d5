#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "stwj/distributions.hpp"
#include "stwj/empirical.hpp"

namespace stwj {

enum class CaseId { C1, C2, C3, C4, C5, C6, C7, C8 };

inline constexpr CaseId kAllCases[] = {CaseId::C1, CaseId::C2, CaseId::C3, CaseId::C4,
                                       CaseId::C5, CaseId::C6, CaseId::C7, CaseId::C8};

const char* to_string(CaseId id);
std::optional<CaseId> parse_case(std::string_view text);

struct ClaytonScenario {
    ClaytonParams copula;
    MarginalDist x;
    MarginalDist y;
};

/// Fixed generator of one benchmark case.
struct ScenarioSpec {
    CaseId id;
    std::variant<BivariateNormalParams, ClaytonScenario> model;
};

/// C1-C3: bivariate normal with covariance [[2, 1.5], [1.5, 1.5]] and means
/// (2, 4), (3, 1), (2, 2.01). C4-C8: Clayton(0.5) with Pareto or Weibull
/// marginals.
const ScenarioSpec& scenario(CaseId id);

PairedSample generate_scenario(const ScenarioSpec& spec, std::size_t n, std::uint64_t seed);

enum class TestKind { stwj, t, wilcoxon };

const char* to_string(TestKind kind);
std::optional<TestKind> parse_test_kind(std::string_view text);

struct ExperimentConfig {
    CaseId scenario = CaseId::C1;
    std::size_t n = 100;
    std::size_t replications = 200;
    std::size_t k = 100;
    std::size_t n_sims = 2000;
    std::vector<double> levels{0.05, 0.01};
    std::uint64_t master_seed = 0;
    std::vector<TestKind> tests{TestKind::stwj};
    /// Worker threads; never affects the report contents.
    std::size_t threads = 1;
};

void validate(const ExperimentConfig& cfg);

struct RateEntry {
    TestKind test = TestKind::stwj;
    double level = 0.05;
    std::size_t rejections = 0;
    double rate = 0.0;
    /// Replications where the test raised a data error (counted as retained).
    std::size_t failures = 0;
};

struct RejectionReport {
    ExperimentConfig config;
    std::vector<RateEntry> entries;
    double wall_seconds = 0.0;

    /// Rate for (test, level); ParameterError when not part of the run.
    double rate(TestKind test, double level) const;
};

/// Replication r draws its sample and simulation streams from
/// derive_seed(master_seed, r), so the report is independent of scheduling.
RejectionReport run_rejection_experiment(const ExperimentConfig& cfg);

}  // namespace stwj
