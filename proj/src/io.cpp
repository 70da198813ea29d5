#include "stwj/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "stwj/errors.hpp"

namespace stwj::io {

namespace {

/// Line-oriented CSV reader for the flat numeric formats above: no quoting,
/// comma separators, exact header match, blank lines ignored.
class CsvReader {
public:
    CsvReader(std::istream& in, std::string_view header) : in_(in) {
        std::string line;
        if (!next_line(line)) throw ParseError(1, "missing header `" + std::string(header) + "`");
        if (line != header) {
            throw ParseError(line_no_, "expected header `" + std::string(header) + "`, got `" + line + "`");
        }
    }

    /// Fills fields with the next nonblank row; false at end of input.
    bool next_row(std::vector<std::string_view>& fields, std::size_t expected) {
        while (next_line(current_)) {
            if (current_.empty()) continue;
            fields.clear();
            std::string_view rest = current_;
            for (;;) {
                const auto comma = rest.find(',');
                fields.push_back(rest.substr(0, comma));
                if (comma == std::string_view::npos) break;
                rest.remove_prefix(comma + 1);
            }
            if (fields.size() != expected) {
                throw ParseError(line_no_, "expected " + std::to_string(expected) + " fields, got " +
                                               std::to_string(fields.size()));
            }
            return true;
        }
        return false;
    }

    double number(std::string_view field) const {
        double v = 0.0;
        const auto* end = field.data() + field.size();
        const auto res = std::from_chars(field.data(), end, v);
        if (field.empty() || res.ec != std::errc{} || res.ptr != end) {
            throw ParseError(line_no_, "not a number: `" + std::string(field) + "`");
        }
        if (!std::isfinite(v)) throw ParseError(line_no_, "non-finite value: `" + std::string(field) + "`");
        return v;
    }

    std::size_t line() const { return line_no_; }

private:
    bool next_line(std::string& line) {
        if (!std::getline(in_, line)) return false;
        ++line_no_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    }

    std::istream& in_;
    std::string current_;
    std::size_t line_no_ = 0;
};

template <class T, class Reader>
T read_file(const std::filesystem::path& path, Reader&& reader) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    return reader(in);
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

PairedSample read_paired_csv(std::istream& in) {
    CsvReader csv(in, "x,y");
    std::vector<std::string_view> f;
    std::vector<double> x, y;
    while (csv.next_row(f, 2)) {
        x.push_back(csv.number(f[0]));
        y.push_back(csv.number(f[1]));
    }
    if (x.empty()) throw ParseError(csv.line(), "no data rows");
    return PairedSample(std::move(x), std::move(y));
}

void write_paired_csv(std::ostream& out, const PairedSample& s) {
    out << "x,y\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out << format_double(s.x()[i]) << ',' << format_double(s.y()[i]) << '\n';
    }
}

DiscreteBivariate read_discrete_csv(std::istream& in) {
    CsvReader csv(in, "x,y,p");
    std::vector<std::string_view> f;
    std::vector<Atom> atoms;
    while (csv.next_row(f, 3)) {
        atoms.push_back({csv.number(f[0]), csv.number(f[1]), csv.number(f[2])});
    }
    if (atoms.empty()) throw ParseError(csv.line(), "no atoms");
    try {
        return DiscreteBivariate(std::move(atoms));
    } catch (const ParameterError& e) {
        throw ParseError(csv.line(), e.what());
    }
}

void write_discrete_csv(std::ostream& out, const DiscreteBivariate& d) {
    out << "x,y,p\n";
    for (const auto& a : d.atoms()) {
        out << format_double(a.x) << ',' << format_double(a.y) << ',' << format_double(a.p) << '\n';
    }
}

PriceSeries read_price_csv(std::istream& in) {
    CsvReader csv(in, "date,close");
    std::vector<std::string_view> f;
    std::vector<PricePoint> entries;
    while (csv.next_row(f, 2)) {
        const auto date = parse_date(f[0]);
        if (!date) throw ParseError(csv.line(), "not an ISO-8601 date: `" + std::string(f[0]) + "`");
        const double close = csv.number(f[1]);
        if (!(close > 0.0)) throw ParseError(csv.line(), "close must be positive");
        if (!entries.empty() && !(entries.back().date < *date)) {
            throw ParseError(csv.line(), "dates must be strictly increasing");
        }
        entries.push_back({*date, close});
    }
    return PriceSeries(std::move(entries));
}

void write_price_csv(std::ostream& out, const PriceSeries& p) {
    out << "date,close\n";
    for (const auto& e : p.entries()) out << format_date(e.date) << ',' << format_double(e.close) << '\n';
}

void write_qq_csv(std::ostream& out, const QQData& q) {
    out << "qa,qb\n";
    for (const auto& [a, b] : q.pairs) out << format_double(a) << ',' << format_double(b) << '\n';
}

void write_rejection_csv(std::ostream& out, const std::vector<RejectionReport>& reports) {
    out << "case,n,test,level,rate,failures\n";
    for (const auto& r : reports) {
        for (const auto& e : r.entries) {
            out << to_string(r.config.scenario) << ',' << r.config.n << ',' << to_string(e.test) << ','
                << format_double(e.level) << ',' << format_double(e.rate) << ',' << e.failures << '\n';
        }
    }
}

nlohmann::ordered_json to_json(const TestResult& r) {
    nlohmann::ordered_json j;
    j["statistic"] = r.statistic;
    j["p1"] = r.p1 ? nlohmann::ordered_json(*r.p1) : nlohmann::ordered_json(nullptr);
    j["p2"] = r.p2 ? nlohmann::ordered_json(*r.p2) : nlohmann::ordered_json(nullptr);
    j["n"] = r.n;
    j["k"] = r.k;
    j["n_sims"] = r.n_sims;
    j["seed"] = r.seed;
    j["jitter"] = r.jitter;
    j["reject_at_0_05"] = r.reject_at(0.05);
    j["reject_at_0_01"] = r.reject_at(0.01);
    return j;
}

nlohmann::ordered_json to_json(const BaselineResult& r) {
    nlohmann::ordered_json j;
    j["method"] = to_string(r.method);
    j["statistic"] = r.statistic;
    j["p_value"] = r.p_value;
    j["n_effective"] = r.n_effective;
    return j;
}

nlohmann::ordered_json to_json(const AnalysisReport& r) {
    nlohmann::ordered_json j;
    j["stwj_forward"] = to_json(r.stwj_forward);
    j["stwj_reverse"] = to_json(r.stwj_reverse);
    j["t_test"] = to_json(r.t_test);
    j["verdict"] = to_string(r.verdict);
    j["level"] = r.level;
    j["t_two_sided_p"] = r.t_two_sided_p;
    j["evidence_against_forward"] = r.evidence_against_forward;
    j["evidence_against_reverse"] = r.evidence_against_reverse;
    j["possibly_equal"] = r.possibly_equal;
    j["strict"] = r.strict;
    return j;
}

nlohmann::ordered_json to_json(const RejectionReport& r) {
    nlohmann::ordered_json j;
    const auto& c = r.config;
    j["case"] = to_string(c.scenario);
    j["n"] = c.n;
    j["replications"] = c.replications;
    j["k"] = c.k;
    j["n_sims"] = c.n_sims;
    j["master_seed"] = c.master_seed;
    j["levels"] = c.levels;
    auto tests = nlohmann::ordered_json::array();
    for (auto t : c.tests) tests.push_back(to_string(t));
    j["tests"] = tests;
    auto rates = nlohmann::ordered_json::array();
    for (const auto& e : r.entries) {
        nlohmann::ordered_json row;
        row["test"] = to_string(e.test);
        row["level"] = e.level;
        row["rejections"] = e.rejections;
        row["rate"] = e.rate;
        row["failures"] = e.failures;
        rates.push_back(row);
    }
    j["rates"] = rates;
    return j;
}

nlohmann::ordered_json to_json(const std::vector<RejectionReport>& reports) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    return arr;
}

PairedSample read_paired_csv(const std::filesystem::path& path) {
    return read_file<PairedSample>(path, [](std::istream& in) { return read_paired_csv(in); });
}

DiscreteBivariate read_discrete_csv(const std::filesystem::path& path) {
    return read_file<DiscreteBivariate>(path, [](std::istream& in) { return read_discrete_csv(in); });
}

PriceSeries read_price_csv(const std::filesystem::path& path) {
    return read_file<PriceSeries>(path, [](std::istream& in) { return read_price_csv(in); });
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("failed writing " + path.string());
}

}  // namespace stwj::io
