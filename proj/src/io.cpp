#include "pastent/io.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

#include "pastent/errors.hpp"

namespace pastent {

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

double parse_field(std::string_view text, std::size_t line,
                   const char* column) {
    double out = 0.0;
    const auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        std::ostringstream msg;
        msg << "CSV line " << line << ": invalid " << column << " value '"
            << text << "'";
        throw domain_error(msg.str());
    }
    return out;
}

// Splits one CSV record into exactly `count` comma-separated fields.
std::vector<std::string_view> split_fields(std::string_view record,
                                           std::size_t count,
                                           std::size_t line) {
    std::vector<std::string_view> fields;
    while (true) {
        const auto comma = record.find(',');
        fields.push_back(record.substr(0, comma));
        if (comma == std::string_view::npos) break;
        record.remove_prefix(comma + 1);
    }
    if (fields.size() != count) {
        std::ostringstream msg;
        msg << "CSV line " << line << ": expected " << count
            << " fields, got " << fields.size();
        throw domain_error(msg.str());
    }
    return fields;
}

std::string read_record(std::istream& in) {
    std::string s;
    std::getline(in, s);
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

}  // namespace

void write_curve_csv(std::ostream& out, const MeasureCurve& curve) {
    out << "t,value\n";
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        out << format_full(curve.grid[i]) << ','
            << format_full(curve.values[i]) << '\n';
    }
}

MeasureCurve read_curve_csv(std::istream& in, MeasureKind kind) {
    MeasureCurve curve;
    curve.kind = kind;
    std::string header = read_record(in);
    if (header != "t,value") {
        throw domain_error("curve CSV: expected header 't,value', got '" +
                           header + "'");
    }
    std::size_t line = 1;
    while (in) {
        const std::string record = read_record(in);
        if (record.empty()) {
            if (in.eof()) break;
            continue;
        }
        ++line;
        const auto fields = split_fields(record, 2, line);
        curve.grid.push_back(parse_field(fields[0], line, "t"));
        curve.values.push_back(parse_field(fields[1], line, "value"));
    }
    curve.validate();
    return curve;
}

void write_reconstruction_csv(std::ostream& out,
                              const ReconstructionResult& result) {
    out << "t,phi,cdf\n";
    for (std::size_t i = 0; i < result.grid.size(); ++i) {
        out << format_full(result.grid[i]) << ',' << format_full(result.phi[i])
            << ',' << format_full(result.cdf[i]) << '\n';
    }
}

void write_sample_csv(std::ostream& out, const Sample& sample) {
    out << "x\n";
    for (double v : sample.values) {
        out << format_full(v) << '\n';
    }
}

Sample read_sample_csv(std::istream& in) {
    Sample sample;
    std::string header = read_record(in);
    if (header != "x") {
        throw domain_error("sample CSV: expected header 'x', got '" + header +
                           "'");
    }
    std::size_t line = 1;
    while (in) {
        const std::string record = read_record(in);
        if (record.empty()) {
            if (in.eof()) break;
            continue;
        }
        ++line;
        sample.values.push_back(parse_field(record, line, "x"));
    }
    sample.validate();
    return sample;
}

}  // namespace pastent
