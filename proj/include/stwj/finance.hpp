#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stwj/baselines.hpp"
#include "stwj/empirical.hpp"
#include "stwj/gptest.hpp"

namespace stwj {

using Date = std::chrono::year_month_day;

/// Strict ISO-8601 calendar date, YYYY-MM-DD.
std::optional<Date> parse_date(std::string_view text);
std::string format_date(Date d);

struct PricePoint {
    Date date;
    double close = 0.0;
};

/// Closing prices with strictly increasing dates and positive closes.
class PriceSeries {
public:
    explicit PriceSeries(std::vector<PricePoint> entries);
    std::span<const PricePoint> entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }

private:
    std::vector<PricePoint> entries_;
};

struct ReturnPoint {
    Date date;
    double value = 0.0;
};

class ReturnSeries {
public:
    explicit ReturnSeries(std::vector<ReturnPoint> entries);
    std::span<const ReturnPoint> entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }

private:
    std::vector<ReturnPoint> entries_;
};

/// Simple returns (c_t - c_{t-1}) / c_{t-1}, dated at t.
ReturnSeries weekly_returns(const PriceSeries& prices);

struct AlignedSample {
    std::vector<Date> dates;
    PairedSample sample;
};

/// Inner join on date, ordered by date. AlignmentError if no date is shared.
AlignedSample align(const ReturnSeries& a, const ReturnSeries& b);

/// (1 - alpha) * base + alpha * other on the shared dates.
ReturnSeries portfolio_returns(double alpha, const ReturnSeries& base, const ReturnSeries& other);

enum class QQMode { marginals, differences };

struct QQData {
    std::vector<std::pair<double, double>> pairs;
};

/// marginals: sorted x against sorted y. differences: sorted x - y against
/// sorted y - x.
QQData qq_export(const PairedSample& s, QQMode mode);

enum class Verdict {
    x_le_y_strict,    ///< X <=st:wj Y retained and the means differ
    x_le_y,           ///< X <=st:wj Y retained, Y <=st:wj X rejected, means not separated
    possibly_equal,   ///< neither direction rejected and means not separated
    x_le_y_rejected,  ///< evidence against X <=st:wj Y
};

const char* to_string(Verdict v);

struct AnalysisReport {
    TestResult stwj_forward;
    TestResult stwj_reverse;
    BaselineResult t_test;
    double level = 0.05;
    /// Two-sided p-value of the paired t statistic, used for strictness.
    double t_two_sided_p = 1.0;
    bool evidence_against_forward = false;
    bool evidence_against_reverse = false;
    bool possibly_equal = false;
    bool strict = false;
    Verdict verdict = Verdict::x_le_y;
};

/// Tests X <=st:wj Y and Y <=st:wj X, then uses the paired t test to tell a
/// strict order from equality of the difference laws (the order with equal
/// means forces X - Y =st Y - X).
AnalysisReport analyze_pair(const PairedSample& s, std::size_t k, std::size_t n_sims,
                            std::uint64_t seed, double level = 0.05, std::size_t threads = 1);

}  // namespace stwj
