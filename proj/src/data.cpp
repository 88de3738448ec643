#include "betalike/data.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "betalike/errors.hpp"

namespace betalike {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& tok, std::size_t line, const char* what) {
    const std::string t = trim(tok);
    if (t.empty()) throw ParseError(std::string("empty ") + what, line);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size())
        throw ParseError(std::string("non-numeric ") + what + " '" + t + "'", line);
    if (!std::isfinite(v)) throw ParseError(std::string(what) + " is not finite", line);
    return v;
}

long long parse_count(const std::string& tok, std::size_t line) {
    const std::string t = trim(tok);
    if (t.empty()) throw ParseError("empty count", line);
    char* end = nullptr;
    const long long v = std::strtoll(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size()) throw ParseError("non-integer count '" + t + "'", line);
    return v;
}

struct Row {
    std::size_t line;
    std::vector<std::string> fields;
};

// Splits CSV text into rows of comma-separated fields, skipping blank lines
// and '#' comments. The first row is the header.
std::vector<Row> split_rows(const std::string& text) {
    std::vector<Row> rows;
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        Row row{lineno, {}};
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                row.fields.push_back(trim(line.substr(start)));
                break;
            }
            row.fields.push_back(trim(line.substr(start, comma - start)));
            start = comma + 1;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void require_positive_time(double v, std::size_t line, const char* what) {
    if (!(v > 0.0)) throw ValidationError(std::string(what) + " must be > 0 (line " +
                                          std::to_string(line) + ")");
}

}  // namespace

void validate(const ReliabilityData& d) {
    for (double x : d.failures)
        if (!(x > 0.0) || !std::isfinite(x))
            throw ValidationError("failure times must be positive and finite");
    for (double y : d.survivals)
        if (!(y > 0.0) || !std::isfinite(y))
            throw ValidationError("survival times must be positive and finite");
    if (d.failures.empty() && d.survivals.empty()) throw ValidationError("no observations");
    if (d.prior_guess_t && !(*d.prior_guess_t > 0.0 && std::isfinite(*d.prior_guess_t)))
        throw ValidationError("prior_guess_t must be positive and finite");
}

void validate(const BinaryOutcomeData& d) {
    if (d.success_predictors.empty() && d.failure_predictors.empty())
        throw ValidationError("no observations");
    for (double x : d.success_predictors)
        if (!std::isfinite(x)) throw ValidationError("predictor values must be finite");
    for (double y : d.failure_predictors)
        if (!std::isfinite(y)) throw ValidationError("predictor values must be finite");
}

void validate(const CountData& d) {
    if (d.counts.empty()) throw ValidationError("no observations");
    for (long long c : d.counts)
        if (c < 0) throw ValidationError("counts must be nonnegative");
    if (d.predictors) {
        if (d.predictors->size() != d.counts.size())
            throw ValidationError("predictor column length does not match counts");
        for (double x : *d.predictors)
            if (!std::isfinite(x)) throw ValidationError("predictor values must be finite");
    }
    if (!(d.window_tau > 0.0) || !std::isfinite(d.window_tau))
        throw ValidationError("window_tau must be > 0");
    if (d.total_time_T && !(*d.total_time_T > 0.0 && std::isfinite(*d.total_time_T)))
        throw ValidationError("total_time_T must be > 0");
    if (d.prior_guess_t && !(*d.prior_guess_t > 0.0 && std::isfinite(*d.prior_guess_t)))
        throw ValidationError("prior_guess_t must be > 0");
}

void validate(const QueryTarget& q) {
    if (!(q.tau > 0.0) || !std::isfinite(q.tau)) throw ValidationError("tau must be > 0");
    if (q.m < 0) throw ValidationError("m must be >= 0");
    if (q.z && !std::isfinite(*q.z)) throw ValidationError("z must be finite");
}

ReliabilityData parse_reliability_csv(const std::string& text) {
    const auto rows = split_rows(text);
    if (rows.empty()) throw ValidationError("no observations");
    const auto& header = rows.front().fields;
    if (header.size() != 2 || header[0] != "kind" || header[1] != "time")
        throw ParseError("expected header 'kind,time'", rows.front().line);

    ReliabilityData d;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.fields.size() != 2) throw ParseError("expected 2 fields", row.line);
        const std::string& kind = row.fields[0];
        const double t = parse_double(row.fields[1], row.line, "time");
        if (kind == "failure") {
            require_positive_time(t, row.line, "failure time");
            d.failures.push_back(t);
        } else if (kind == "survival") {
            require_positive_time(t, row.line, "survival time");
            d.survivals.push_back(t);
        } else if (kind == "prior_guess") {
            if (d.prior_guess_t)
                throw ValidationError("duplicate prior_guess row (line " +
                                      std::to_string(row.line) + ")");
            require_positive_time(t, row.line, "prior_guess time");
            d.prior_guess_t = t;
        } else {
            throw ParseError("unknown kind '" + kind + "'", row.line);
        }
    }
    validate(d);
    return d;
}

BinaryOutcomeData parse_binary_csv(const std::string& text) {
    const auto rows = split_rows(text);
    if (rows.empty()) throw ValidationError("no observations");
    const auto& header = rows.front().fields;
    if (header.size() != 2 || header[0] != "outcome" || header[1] != "predictor")
        throw ParseError("expected header 'outcome,predictor'", rows.front().line);

    BinaryOutcomeData d;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.fields.size() != 2) throw ParseError("expected 2 fields", row.line);
        const double x = parse_double(row.fields[1], row.line, "predictor");
        if (row.fields[0] == "success")
            d.success_predictors.push_back(x);
        else if (row.fields[0] == "failure")
            d.failure_predictors.push_back(x);
        else
            throw ParseError("unknown outcome '" + row.fields[0] + "'", row.line);
    }
    validate(d);
    return d;
}

CountData parse_count_csv(const std::string& text, double tau,
                          std::optional<double> total_time_T) {
    const auto rows = split_rows(text);
    if (rows.empty()) throw ValidationError("no observations");
    const auto& header = rows.front().fields;
    const bool with_predictor = header.size() == 2 && header[1] == "predictor";
    if (!(header.size() == 1 && header[0] == "count") &&
        !(with_predictor && header[0] == "count"))
        throw ParseError("expected header 'count' or 'count,predictor'", rows.front().line);

    CountData d;
    d.window_tau = tau;
    d.total_time_T = total_time_T;
    if (with_predictor) d.predictors.emplace();
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.fields.size() != header.size())
            throw ParseError("expected " + std::to_string(header.size()) + " fields", row.line);
        const long long c = parse_count(row.fields[0], row.line);
        if (c < 0)
            throw ValidationError("counts must be nonnegative (line " + std::to_string(row.line) +
                                  ")");
        d.counts.push_back(c);
        if (with_predictor)
            d.predictors->push_back(parse_double(row.fields[1], row.line, "predictor"));
    }
    validate(d);
    return d;
}

ReliabilityData load_reliability_csv(const std::string& path) {
    return parse_reliability_csv(read_file(path));
}

BinaryOutcomeData load_binary_csv(const std::string& path) {
    return parse_binary_csv(read_file(path));
}

CountData load_count_csv(const std::string& path, double tau, std::optional<double> total_time_T) {
    return parse_count_csv(read_file(path), tau, total_time_T);
}

std::string serialize(const ReliabilityData& d) {
    std::ostringstream out;
    out << "kind,time\n";
    for (double x : d.failures) out << "failure," << fmt17(x) << "\n";
    for (double y : d.survivals) out << "survival," << fmt17(y) << "\n";
    if (d.prior_guess_t) out << "prior_guess," << fmt17(*d.prior_guess_t) << "\n";
    return out.str();
}

std::string serialize(const BinaryOutcomeData& d) {
    std::ostringstream out;
    out << "outcome,predictor\n";
    for (double x : d.success_predictors) out << "success," << fmt17(x) << "\n";
    for (double y : d.failure_predictors) out << "failure," << fmt17(y) << "\n";
    return out.str();
}

std::string serialize(const CountData& d) {
    std::ostringstream out;
    if (d.predictors) {
        out << "count,predictor\n";
        for (std::size_t i = 0; i < d.counts.size(); ++i)
            out << d.counts[i] << "," << fmt17((*d.predictors)[i]) << "\n";
    } else {
        out << "count\n";
        for (long long c : d.counts) out << c << "\n";
    }
    return out.str();
}

}  // namespace betalike
