#include "stwj/finance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "stwj/errors.hpp"

namespace stwj {

namespace {

bool parse_fixed_int(std::string_view text, int& out) {
    if (text.empty()) return false;
    for (char c : text) {
        if (c < '0' || c > '9') return false;
    }
    const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    return res.ec == std::errc{};
}

}  // namespace

std::optional<Date> parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    int y = 0, m = 0, d = 0;
    if (!parse_fixed_int(text.substr(0, 4), y) || !parse_fixed_int(text.substr(5, 2), m) ||
        !parse_fixed_int(text.substr(8, 2), d)) {
        return std::nullopt;
    }
    const Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                    std::chrono::day{static_cast<unsigned>(d)}};
    if (!date.ok()) return std::nullopt;
    return date;
}

std::string format_date(Date d) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

PriceSeries::PriceSeries(std::vector<PricePoint> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (!(entries_[i].close > 0.0) || !std::isfinite(entries_[i].close)) {
            throw ParameterError("price series: nonpositive close on " + format_date(entries_[i].date));
        }
        if (i > 0 && !(entries_[i - 1].date < entries_[i].date)) {
            throw ParameterError("price series: dates not strictly increasing at " +
                                 format_date(entries_[i].date));
        }
    }
}

ReturnSeries::ReturnSeries(std::vector<ReturnPoint> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 1; i < entries_.size(); ++i) {
        if (!(entries_[i - 1].date < entries_[i].date)) {
            throw ParameterError("return series: dates not strictly increasing at " +
                                 format_date(entries_[i].date));
        }
    }
}

ReturnSeries weekly_returns(const PriceSeries& prices) {
    const auto e = prices.entries();
    if (e.size() < 2) throw InsufficientDataError("need at least 2 closes to form a return");
    std::vector<ReturnPoint> out;
    out.reserve(e.size() - 1);
    for (std::size_t i = 1; i < e.size(); ++i) {
        out.push_back({e[i].date, (e[i].close - e[i - 1].close) / e[i - 1].close});
    }
    return ReturnSeries(std::move(out));
}

AlignedSample align(const ReturnSeries& a, const ReturnSeries& b) {
    if (a.size() == 0 || b.size() == 0) throw AlignmentError("cannot align an empty return series");
    std::vector<Date> dates;
    std::vector<double> x, y;
    const auto ea = a.entries();
    const auto eb = b.entries();
    std::size_t i = 0, j = 0;
    while (i < ea.size() && j < eb.size()) {
        if (ea[i].date < eb[j].date) {
            ++i;
        } else if (eb[j].date < ea[i].date) {
            ++j;
        } else {
            dates.push_back(ea[i].date);
            x.push_back(ea[i].value);
            y.push_back(eb[j].value);
            ++i;
            ++j;
        }
    }
    if (dates.empty()) throw AlignmentError("return series share no dates");
    return {std::move(dates), PairedSample(std::move(x), std::move(y))};
}

ReturnSeries portfolio_returns(double alpha, const ReturnSeries& base, const ReturnSeries& other) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParameterError("portfolio weight must lie in [0, 1]");
    const auto aligned = align(base, other);
    std::vector<ReturnPoint> out(aligned.dates.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = {aligned.dates[i],
                  (1.0 - alpha) * aligned.sample.x()[i] + alpha * aligned.sample.y()[i]};
    }
    return ReturnSeries(std::move(out));
}

QQData qq_export(const PairedSample& s, QQMode mode) {
    std::vector<double> a, b;
    if (mode == QQMode::marginals) {
        a.assign(s.x().begin(), s.x().end());
        b.assign(s.y().begin(), s.y().end());
    } else {
        auto d = differences(s);
        a = std::move(d.x_minus_y);
        b = std::move(d.y_minus_x);
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    QQData q;
    q.pairs.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) q.pairs.emplace_back(a[i], b[i]);
    return q;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::x_le_y_strict: return "x_le_y_strict";
        case Verdict::x_le_y: return "x_le_y";
        case Verdict::possibly_equal: return "possibly_equal";
        case Verdict::x_le_y_rejected: return "x_le_y_rejected";
    }
    return "unknown";
}

AnalysisReport analyze_pair(const PairedSample& s, std::size_t k, std::size_t n_sims,
                            std::uint64_t seed, double level, std::size_t threads) {
    if (!(level > 0.0 && level < 1.0)) throw ParameterError("significance level must lie in (0, 1)");
    AnalysisReport r;
    r.level = level;
    r.stwj_forward = test_st_wj(s, k, n_sims, seed, threads);
    r.stwj_reverse = test_st_wj(s.swapped(), k, n_sims, seed, threads);
    r.t_test = paired_t_test(s);
    r.t_two_sided_p = std::min(1.0, 2.0 * std::min(r.t_test.p_value, 1.0 - r.t_test.p_value));

    r.evidence_against_forward = r.stwj_forward.reject_at(level);
    r.evidence_against_reverse = r.stwj_reverse.reject_at(level);
    const bool means_differ = r.t_two_sided_p < level;
    r.strict = !r.evidence_against_forward && means_differ && r.t_test.statistic > 0.0;
    r.possibly_equal = !r.evidence_against_forward && !r.evidence_against_reverse && !means_differ;

    if (r.evidence_against_forward) {
        r.verdict = Verdict::x_le_y_rejected;
    } else if (r.strict) {
        r.verdict = Verdict::x_le_y_strict;
    } else if (r.possibly_equal) {
        r.verdict = Verdict::possibly_equal;
    } else {
        r.verdict = Verdict::x_le_y;
    }
    return r;
}

}  // namespace stwj
