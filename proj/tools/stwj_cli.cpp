#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "stwj/errors.hpp"
#include "stwj/finance.hpp"
#include "stwj/gptest.hpp"
#include "stwj/io.hpp"
#include "stwj/montecarlo.hpp"
#include "stwj/oracle.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

/// Raised for flag combinations CLI11 cannot express.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
    } else {
        stwj::io::write_text_file(path, text);
    }
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

struct TestOpts {
    std::string input, output;
    std::uint64_t seed = 0;
    std::size_t k = stwj::kDefaultGridSize;
    std::size_t n_sims = stwj::kDefaultSimulations;
    std::size_t threads = 1;
    bool discrete = false;
};

int run_test(const TestOpts& o) {
    const auto s = stwj::io::read_paired_csv(std::filesystem::path(o.input));
    const auto r = o.discrete ? stwj::test_st_wj_discrete_support(s, o.n_sims, o.seed, o.threads)
                              : stwj::test_st_wj(s, o.k, o.n_sims, o.seed, o.threads);
    emit(o.output, dump(stwj::io::to_json(r)));
    std::cerr << "statistic " << r.statistic << ", min p " << r.min_p() << ", "
              << (r.reject_at(0.05) ? "reject" : "retain") << " X <=st:wj Y at 0.05\n";
    return kExitOk;
}

struct McOpts {
    std::string case_id, out_csv, out_json;
    std::vector<std::size_t> n{100};
    std::size_t replications = 200, k = stwj::kDefaultGridSize, n_sims = 2000, threads = 1;
    std::vector<std::string> tests{"stwj"};
    std::vector<double> levels{0.05, 0.01};
    std::uint64_t seed = 0;
};

int run_mc(const McOpts& o) {
    const auto id = stwj::parse_case(o.case_id);
    if (!id) throw UsageError("unknown case `" + o.case_id + "` (expected C1..C8)");
    std::vector<stwj::TestKind> kinds;
    for (const auto& t : o.tests) {
        const auto kind = stwj::parse_test_kind(t);
        if (!kind) throw UsageError("unknown test `" + t + "` (expected stwj, t or wilcoxon)");
        kinds.push_back(*kind);
    }
    std::vector<stwj::RejectionReport> reports;
    for (std::size_t n : o.n) {
        stwj::ExperimentConfig cfg;
        cfg.scenario = *id;
        cfg.n = n;
        cfg.replications = o.replications;
        cfg.k = o.k;
        cfg.n_sims = o.n_sims;
        cfg.levels = o.levels;
        cfg.master_seed = o.seed;
        cfg.tests = kinds;
        cfg.threads = o.threads;
        reports.push_back(stwj::run_rejection_experiment(cfg));
        for (const auto& e : reports.back().entries) {
            std::cerr << o.case_id << " n=" << n << ' ' << stwj::to_string(e.test) << " @" << e.level
                      << ": rate " << e.rate << " (failures " << e.failures << ")\n";
        }
        std::cerr << "  " << reports.back().wall_seconds << " s\n";
    }
    std::ostringstream csv;
    stwj::io::write_rejection_csv(csv, reports);
    if (o.out_csv.empty() && o.out_json.empty()) {
        emit("", csv.str());
    } else {
        if (!o.out_csv.empty()) emit(o.out_csv, csv.str());
        if (!o.out_json.empty()) emit(o.out_json, dump(stwj::io::to_json(reports)));
    }
    return kExitOk;
}

struct PortfolioOpts {
    std::string x, y, z, output, qq_out;
    std::optional<double> alpha;
    std::uint64_t seed = 0;
    std::size_t k = stwj::kDefaultGridSize, n_sims = stwj::kDefaultSimulations, threads = 1;
    double level = 0.05;
};

int run_portfolio(const PortfolioOpts& o) {
    if (o.z.empty() != !o.alpha.has_value()) throw UsageError("--z and --alpha must be given together");
    auto rx = stwj::weekly_returns(stwj::io::read_price_csv(std::filesystem::path(o.x)));
    auto ry = stwj::weekly_returns(stwj::io::read_price_csv(std::filesystem::path(o.y)));
    if (!o.z.empty()) {
        const auto rz = stwj::weekly_returns(stwj::io::read_price_csv(std::filesystem::path(o.z)));
        rx = stwj::portfolio_returns(*o.alpha, rx, rz);
        ry = stwj::portfolio_returns(*o.alpha, ry, rz);
    }
    const auto aligned = stwj::align(rx, ry);
    const auto r = stwj::analyze_pair(aligned.sample, o.k, o.n_sims, o.seed, o.level, o.threads);
    emit(o.output, dump(stwj::io::to_json(r)));
    if (!o.qq_out.empty()) {
        std::ostringstream qq;
        stwj::io::write_qq_csv(qq, stwj::qq_export(aligned.sample, stwj::QQMode::differences));
        emit(o.qq_out, qq.str());
    }
    std::cerr << aligned.sample.size() << " aligned weeks from " << stwj::format_date(aligned.dates.front())
              << " to " << stwj::format_date(aligned.dates.back()) << "\n"
              << "forward min p " << r.stwj_forward.min_p() << ", reverse min p " << r.stwj_reverse.min_p()
              << ", t one-sided p " << r.t_test.p_value << "\nverdict: " << stwj::to_string(r.verdict)
              << "\n";
    return kExitOk;
}

struct QqOpts {
    std::string input, output, mode = "differences";
};

int run_qq(const QqOpts& o) {
    const auto mode = o.mode == "marginals" ? stwj::QQMode::marginals : stwj::QQMode::differences;
    const auto s = stwj::io::read_paired_csv(std::filesystem::path(o.input));
    std::ostringstream out;
    stwj::io::write_qq_csv(out, stwj::qq_export(s, mode));
    emit(o.output, out.str());
    return kExitOk;
}

struct SimulateOpts {
    std::string case_id, output;
    std::size_t n = 100;
    std::uint64_t seed = 0;
};

int run_simulate(const SimulateOpts& o) {
    const auto id = stwj::parse_case(o.case_id);
    if (!id) throw UsageError("unknown case `" + o.case_id + "` (expected C1..C8)");
    const auto s = stwj::generate_scenario(stwj::scenario(*id), o.n, o.seed);
    std::ostringstream out;
    stwj::io::write_paired_csv(out, s);
    emit(o.output, out.str());
    return kExitOk;
}

nlohmann::ordered_json verdict_json(const stwj::OrderVerdict& v) {
    nlohmann::ordered_json j;
    j["holds"] = v.holds;
    j["witness_t"] = v.witness_t ? nlohmann::ordered_json(*v.witness_t) : nlohmann::ordered_json(nullptr);
    return j;
}

struct OracleOpts {
    std::string input, output;
};

int run_oracle(const OracleOpts& o) {
    const auto d = stwj::io::read_discrete_csv(std::filesystem::path(o.input));
    const auto forward = stwj::check_st_wj_discrete(d);
    const auto reverse = stwj::check_st_wj_discrete(d.swapped());
    const auto pr = stwj::check_precedence(d);
    const double gap = pr.p_x_greater - pr.p_y_greater;
    const char* relation = gap > stwj::kProbabilityTolerance    ? "y_le_x"
                           : gap < -stwj::kProbabilityTolerance ? "x_le_y"
                                                                : "tied";
    nlohmann::ordered_json j;
    j["atoms"] = d.atoms().size();
    j["st_wj_x_le_y"] = verdict_json(forward);
    j["st_wj_y_le_x"] = verdict_json(reverse);
    j["precedence"] = {{"p_x_greater", pr.p_x_greater}, {"p_y_greater", pr.p_y_greater}, {"relation", relation}};
    j["marginals"] = stwj::to_string(stwj::check_st_marginals_discrete(d));
    j["mean_x"] = d.mean_x();
    j["mean_y"] = d.mean_y();
    emit(o.output, dump(j));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weak joint stochastic dominance tests for paired samples"};
    app.require_subcommand(1);

    TestOpts test;
    auto* c_test = app.add_subcommand("test", "Test X <=st:wj Y on a paired CSV (header x,y)");
    c_test->add_option("--input", test.input, "Paired sample CSV")->required()->check(CLI::ExistingFile);
    c_test->add_option("--seed", test.seed, "Simulation seed")->required();
    c_test->add_option("--k", test.k, "Grid intervals")->capture_default_str()->check(CLI::PositiveNumber);
    c_test->add_option("--n-sims", test.n_sims, "Gaussian process draws")->capture_default_str();
    c_test->add_option("--threads", test.threads, "Worker threads")->capture_default_str();
    c_test->add_flag("--discrete", test.discrete, "Use the realized difference support as the grid");
    c_test->add_option("--output", test.output, "JSON output path (default stdout)");

    McOpts mc;
    auto* c_mc = app.add_subcommand("mc", "Rejection-rate experiment on a benchmark case");
    c_mc->add_option("--case", mc.case_id, "Case C1..C8")->required();
    c_mc->add_option("--n", mc.n, "Sample size (repeatable)")->capture_default_str();
    c_mc->add_option("--replications", mc.replications, "Replications")->capture_default_str();
    c_mc->add_option("--k", mc.k, "Grid intervals")->capture_default_str();
    c_mc->add_option("--n-sims", mc.n_sims, "Gaussian process draws")->capture_default_str();
    c_mc->add_option("--tests", mc.tests, "Subset of stwj,t,wilcoxon")->delimiter(',')->capture_default_str();
    c_mc->add_option("--levels", mc.levels, "Significance levels")->delimiter(',')->capture_default_str();
    c_mc->add_option("--seed", mc.seed, "Master seed")->required();
    c_mc->add_option("--threads", mc.threads, "Worker threads")->capture_default_str();
    c_mc->add_option("--out-csv", mc.out_csv, "CSV report path");
    c_mc->add_option("--out-json", mc.out_json, "JSON report path");

    PortfolioOpts pf;
    auto* c_pf = app.add_subcommand("portfolio", "Analyze two assets (or portfolios) from weekly close CSVs");
    c_pf->add_option("--x", pf.x, "Price CSV of X (header date,close)")->required()->check(CLI::ExistingFile);
    c_pf->add_option("--y", pf.y, "Price CSV of Y")->required()->check(CLI::ExistingFile);
    c_pf->add_option("--z", pf.z, "Price CSV of the common asset Z")->check(CLI::ExistingFile);
    c_pf->add_option("--alpha", pf.alpha, "Weight on Z")->check(CLI::Range(0.0, 1.0));
    c_pf->add_option("--seed", pf.seed, "Simulation seed")->required();
    c_pf->add_option("--k", pf.k, "Grid intervals")->capture_default_str();
    c_pf->add_option("--n-sims", pf.n_sims, "Gaussian process draws")->capture_default_str();
    c_pf->add_option("--level", pf.level, "Significance level")->capture_default_str();
    c_pf->add_option("--threads", pf.threads, "Worker threads")->capture_default_str();
    c_pf->add_option("--output", pf.output, "JSON output path (default stdout)");
    c_pf->add_option("--qq-out", pf.qq_out, "Also write the difference Q-Q CSV here");

    QqOpts qq;
    auto* c_qq = app.add_subcommand("qq", "Q-Q plot data from a paired CSV");
    c_qq->add_option("--input", qq.input, "Paired sample CSV")->required()->check(CLI::ExistingFile);
    c_qq->add_option("--mode", qq.mode, "marginals or differences")
        ->check(CLI::IsMember({"marginals", "differences"}))
        ->capture_default_str();
    c_qq->add_option("--output", qq.output, "CSV output path (default stdout)");

    SimulateOpts sim;
    auto* c_sim = app.add_subcommand("simulate", "Draw a benchmark-case sample as CSV");
    c_sim->add_option("--case", sim.case_id, "Case C1..C8")->required();
    c_sim->add_option("--n", sim.n, "Sample size")->capture_default_str();
    c_sim->add_option("--seed", sim.seed, "Sampling seed")->required();
    c_sim->add_option("--output", sim.output, "CSV output path (default stdout)");

    OracleOpts orc;
    auto* c_or = app.add_subcommand("oracle", "Exact order verdicts for a discrete law (header x,y,p)");
    c_or->add_option("--input", orc.input, "Discrete law CSV")->required()->check(CLI::ExistingFile);
    c_or->add_option("--output", orc.output, "JSON output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (c_test->parsed()) return run_test(test);
        if (c_mc->parsed()) return run_mc(mc);
        if (c_pf->parsed()) return run_portfolio(pf);
        if (c_qq->parsed()) return run_qq(qq);
        if (c_sim->parsed()) return run_simulate(sim);
        if (c_or->parsed()) return run_oracle(orc);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const stwj::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
