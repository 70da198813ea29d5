#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "stwj/baselines.hpp"
#include "stwj/empirical.hpp"
#include "stwj/finance.hpp"
#include "stwj/gptest.hpp"
#include "stwj/montecarlo.hpp"
#include "stwj/oracle.hpp"

namespace stwj::io {

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

// CSV formats (header line first, LF newlines). Readers raise ParseError
// carrying the 1-based line number of the offending row.

/// Header `x,y`.
PairedSample read_paired_csv(std::istream& in);
void write_paired_csv(std::ostream& out, const PairedSample& s);

/// Header `x,y,p`.
DiscreteBivariate read_discrete_csv(std::istream& in);
void write_discrete_csv(std::ostream& out, const DiscreteBivariate& d);

/// Header `date,close`, ISO-8601 dates.
PriceSeries read_price_csv(std::istream& in);
void write_price_csv(std::ostream& out, const PriceSeries& p);

/// Header `qa,qb`.
void write_qq_csv(std::ostream& out, const QQData& q);

/// Columns case,n,test,level,rate,failures; one row per (report, test, level).
void write_rejection_csv(std::ostream& out, const std::vector<RejectionReport>& reports);

nlohmann::ordered_json to_json(const TestResult& r);
nlohmann::ordered_json to_json(const BaselineResult& r);
nlohmann::ordered_json to_json(const AnalysisReport& r);
nlohmann::ordered_json to_json(const RejectionReport& r);
nlohmann::ordered_json to_json(const std::vector<RejectionReport>& reports);

PairedSample read_paired_csv(const std::filesystem::path& path);
DiscreteBivariate read_discrete_csv(const std::filesystem::path& path);
PriceSeries read_price_csv(const std::filesystem::path& path);

/// Writes text to path, replacing any existing file.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace stwj::io
