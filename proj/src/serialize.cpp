#include "qtt/serialize.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace qtt {

namespace {

constexpr const char* kCsvHeader =
    "axis_value,E,V0,V1,a,k,xi,mu,T,R,absorption,phi_unwrapped,"
    "tau_analytic,tau_numeric,tau_asy,v_limit,flags";

double parse_double(const std::string& token) {
    if (token == "inf") return std::numeric_limits<double>::infinity();
    if (token == "-inf") return -std::numeric_limits<double>::infinity();
    if (token == "nan") return std::numeric_limits<double>::quiet_NaN();
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw domain_error("malformed numeric CSV field: '" + token + "'");
    return value;
}

RecordFlags parse_flags(const std::string& token) {
    RecordFlags flags;
    std::size_t pos = 0;
    while (pos < token.size()) {
        std::size_t bar = token.find('|', pos);
        if (bar == std::string::npos) bar = token.size();
        const std::string name = token.substr(pos, bar - pos);
        if (name == "degenerate")
            flags.degenerate = true;
        else if (name == "fd-nonconverged")
            flags.fd_nonconverged = true;
        else if (name == "near-resonance")
            flags.near_resonance = true;
        else if (!name.empty())
            throw domain_error("unknown flag in CSV: '" + name + "'");
        pos = bar + 1;
    }
    return flags;
}

nlohmann::json number_or_null(double value) {
    if (std::isnan(value)) return nullptr;
    return value;
}

nlohmann::json record_to_json(const SweepRecord& rec) {
    nlohmann::json j;
    j["axis_value"] = number_or_null(rec.axis_value);
    j["E"] = number_or_null(rec.energy);
    j["V0"] = number_or_null(rec.v0);
    j["V1"] = number_or_null(rec.v1);
    j["a"] = number_or_null(rec.width);
    j["k"] = number_or_null(rec.k);
    j["xi"] = number_or_null(rec.xi);
    j["mu"] = number_or_null(rec.mu);
    j["T"] = number_or_null(rec.t_prob);
    j["R"] = number_or_null(rec.r_prob);
    j["absorption"] = number_or_null(rec.absorption);
    j["phi_unwrapped"] = number_or_null(rec.phi_unwrapped);
    j["tau_analytic"] = number_or_null(rec.tau_analytic);
    j["tau_numeric"] = number_or_null(rec.tau_numeric);
    j["tau_asy"] = number_or_null(rec.tau_asy);
    if (std::isinf(rec.v_limit)) {
        j["v_limit"] = nullptr;
        j["v_limit_unbounded"] = true;
    } else {
        j["v_limit"] = number_or_null(rec.v_limit);
    }
    nlohmann::json flags = nlohmann::json::array();
    if (rec.flags.degenerate) flags.push_back("degenerate");
    if (rec.flags.fd_nonconverged) flags.push_back("fd-nonconverged");
    if (rec.flags.near_resonance) flags.push_back("near-resonance");
    j["flags"] = flags;
    return j;
}

} // namespace

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    const auto [ptr, ec] =
        std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    return std::string(buf, ptr);
}

void write_csv(std::ostream& out, std::span<const SweepRecord> records) {
    out << kCsvHeader << '\n';
    for (const SweepRecord& rec : records) {
        out << format_double(rec.axis_value) << ',' << format_double(rec.energy) << ','
            << format_double(rec.v0) << ',' << format_double(rec.v1) << ','
            << format_double(rec.width) << ',' << format_double(rec.k) << ','
            << format_double(rec.xi) << ',' << format_double(rec.mu) << ','
            << format_double(rec.t_prob) << ',' << format_double(rec.r_prob) << ','
            << format_double(rec.absorption) << ',' << format_double(rec.phi_unwrapped) << ','
            << format_double(rec.tau_analytic) << ',' << format_double(rec.tau_numeric) << ','
            << format_double(rec.tau_asy) << ',' << format_double(rec.v_limit) << ','
            << rec.flags.to_string() << '\n';
    }
}

std::vector<SweepRecord> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw domain_error("CSV header does not match the sweep table format");

    std::vector<SweepRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (true) {
            const std::size_t comma = line.find(',', pos);
            if (comma == std::string::npos) {
                fields.push_back(line.substr(pos));
                break;
            }
            fields.push_back(line.substr(pos, comma - pos));
            pos = comma + 1;
        }
        if (fields.size() != 17)
            throw domain_error("CSV row has wrong field count");

        SweepRecord rec;
        rec.axis_value = parse_double(fields[0]);
        rec.energy = parse_double(fields[1]);
        rec.v0 = parse_double(fields[2]);
        rec.v1 = parse_double(fields[3]);
        rec.width = parse_double(fields[4]);
        rec.k = parse_double(fields[5]);
        rec.xi = parse_double(fields[6]);
        rec.mu = parse_double(fields[7]);
        rec.t_prob = parse_double(fields[8]);
        rec.r_prob = parse_double(fields[9]);
        rec.absorption = parse_double(fields[10]);
        rec.phi_unwrapped = parse_double(fields[11]);
        rec.tau_analytic = parse_double(fields[12]);
        rec.tau_numeric = parse_double(fields[13]);
        rec.tau_asy = parse_double(fields[14]);
        rec.v_limit = parse_double(fields[15]);
        rec.flags = parse_flags(fields[16]);
        records.push_back(rec);
    }
    return records;
}

std::string to_json(std::span<const SweepRecord> records, int indent) {
    nlohmann::json arr = nlohmann::json::array();
    for (const SweepRecord& rec : records) arr.push_back(record_to_json(rec));
    return arr.dump(indent);
}

std::string to_json(const SweepRecord& record, int indent) {
    return record_to_json(record).dump(indent);
}

std::string to_json(const HartmanReport& report, int indent) {
    nlohmann::json j;
    j["regime"] = to_string(report.regime);
    j["predicted_slope"] = report.predicted_slope;
    if (report.saturation_value) j["saturation_value"] = *report.saturation_value;
    if (report.fitted_slope) j["fitted_slope"] = *report.fitted_slope;
    if (report.slope_rel_error) j["slope_rel_error"] = *report.slope_rel_error;
    j["opacity_range"] = {report.opacity_min, report.opacity_max};
    if (!report.note.empty()) j["note"] = report.note;
    return j.dump(indent);
}

} // namespace qtt
