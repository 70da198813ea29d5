#include "stwj/montecarlo.hpp"

#include <chrono>
#include <string>

#include "stwj/baselines.hpp"
#include "stwj/errors.hpp"
#include "stwj/gptest.hpp"
#include "stwj/parallel.hpp"
#include "stwj/random.hpp"

namespace stwj {

namespace {

ScenarioSpec make_normal(CaseId id, double mx, double my) {
    BivariateNormalParams p;
    p.mu = {mx, my};
    p.sigma = {{{2.0, 1.5}, {1.5, 1.5}}};
    return {id, p};
}

ScenarioSpec make_clayton(CaseId id, MarginalDist x, MarginalDist y) {
    return {id, ClaytonScenario{ClaytonParams{0.5}, x, y}};
}

const ScenarioSpec kScenarios[] = {
    make_normal(CaseId::C1, 2.0, 4.0),
    make_normal(CaseId::C2, 3.0, 1.0),
    make_normal(CaseId::C3, 2.0, 2.01),
    make_clayton(CaseId::C4, Pareto{2.0, 1.0}, Pareto{1.5, 1.0}),
    make_clayton(CaseId::C5, Pareto{5.0, 4.0}, Pareto{1.5, 1.0}),
    make_clayton(CaseId::C6, Weibull{6.0, 2.0}, Weibull{1.5, 1.5}),
    make_clayton(CaseId::C7, Weibull{0.75, 4.0}, Weibull{0.25, 1.5}),
    make_clayton(CaseId::C8, Weibull{0.5, 2.0}, Weibull{0.9, 1.5}),
};

struct ReplicationOutcome {
    // [test][level]
    std::vector<std::vector<bool>> reject;
    std::vector<bool> failed;
};

}  // namespace

const char* to_string(CaseId id) {
    static const char* const names[] = {"C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8"};
    return names[static_cast<int>(id)];
}

std::optional<CaseId> parse_case(std::string_view text) {
    for (CaseId id : kAllCases) {
        if (text == to_string(id)) return id;
    }
    return std::nullopt;
}

const ScenarioSpec& scenario(CaseId id) { return kScenarios[static_cast<int>(id)]; }

PairedSample generate_scenario(const ScenarioSpec& spec, std::size_t n, std::uint64_t seed) {
    if (const auto* normal = std::get_if<BivariateNormalParams>(&spec.model)) {
        return sample_bivariate_normal(*normal, n, seed);
    }
    const auto& c = std::get<ClaytonScenario>(spec.model);
    return sample_clayton_bivariate(c.copula, c.x, c.y, n, seed);
}

const char* to_string(TestKind kind) {
    switch (kind) {
        case TestKind::stwj: return "stwj";
        case TestKind::t: return "t";
        case TestKind::wilcoxon: return "wilcoxon";
    }
    return "unknown";
}

std::optional<TestKind> parse_test_kind(std::string_view text) {
    for (TestKind k : {TestKind::stwj, TestKind::t, TestKind::wilcoxon}) {
        if (text == to_string(k)) return k;
    }
    return std::nullopt;
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.replications < 1) throw ParameterError("replications must be at least 1");
    if (cfg.n < 2) throw ParameterError("sample size must be at least 2");
    if (cfg.k < 1) throw ParameterError("grid size k must be at least 1");
    if (cfg.n_sims < 100) throw ParameterError("at least 100 simulations are required");
    if (cfg.tests.empty()) throw ParameterError("no tests selected");
    if (cfg.levels.empty()) throw ParameterError("no significance levels");
    for (double a : cfg.levels) {
        if (!(a > 0.0 && a < 1.0)) throw ParameterError("significance levels must lie in (0, 1)");
    }
}

double RejectionReport::rate(TestKind test, double level) const {
    for (const auto& e : entries) {
        if (e.test == test && e.level == level) return e.rate;
    }
    throw ParameterError(std::string("no rate recorded for ") + to_string(test) + " at level " +
                         std::to_string(level));
}

RejectionReport run_rejection_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    const ScenarioSpec& spec = scenario(cfg.scenario);
    const std::size_t nt = cfg.tests.size();
    const std::size_t nl = cfg.levels.size();

    std::vector<ReplicationOutcome> outcomes(cfg.replications);
    parallel_for(cfg.replications, cfg.threads, [&](std::size_t r) {
        const std::uint64_t rep_seed = derive_seed(cfg.master_seed, r);
        const PairedSample sample = generate_scenario(spec, cfg.n, derive_seed(rep_seed, 0));
        ReplicationOutcome out{std::vector<std::vector<bool>>(nt, std::vector<bool>(nl, false)),
                               std::vector<bool>(nt, false)};
        for (std::size_t ti = 0; ti < nt; ++ti) {
            try {
                double p = 1.0;
                switch (cfg.tests[ti]) {
                    case TestKind::stwj:
                        p = test_st_wj(sample, cfg.k, cfg.n_sims, derive_seed(rep_seed, 1)).min_p();
                        break;
                    case TestKind::t: p = paired_t_test(sample).p_value; break;
                    case TestKind::wilcoxon: p = wilcoxon_signed_rank(sample).p_value; break;
                }
                for (std::size_t li = 0; li < nl; ++li) out.reject[ti][li] = p < cfg.levels[li];
            } catch (const Error&) {
                out.failed[ti] = true;
            }
        }
        outcomes[r] = std::move(out);
    });

    RejectionReport report;
    report.config = cfg;
    for (std::size_t ti = 0; ti < nt; ++ti) {
        std::size_t failures = 0;
        for (const auto& o : outcomes) failures += o.failed[ti] ? 1 : 0;
        for (std::size_t li = 0; li < nl; ++li) {
            RateEntry e;
            e.test = cfg.tests[ti];
            e.level = cfg.levels[li];
            for (const auto& o : outcomes) e.rejections += o.reject[ti][li] ? 1 : 0;
            e.rate = static_cast<double>(e.rejections) / static_cast<double>(cfg.replications);
            e.failures = failures;
            report.entries.push_back(e);
        }
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace stwj
