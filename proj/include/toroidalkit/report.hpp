#pragma once

#include "toroidalkit/suites.hpp"

#include <iomanip>
#include <sstream>

namespace toroidalkit {

inline constexpr int kReportSchemaVersion = 1;

struct ReportMeta {
    std::string command;
    std::uint64_t seed = 0;
    int samples = 0;
    int lo = 0, hi = 0;
    bool timing = true;  // false drops wall-time fields so reports diff byte for byte
};

inline bool all_pass(const std::vector<Record>& rs) {
    return std::all_of(rs.begin(), rs.end(), [](const Record& r) { return r.pass; });
}

inline Json report_json(const ReportMeta& m, const std::vector<Record>& records) {
    Json doc;
    doc["schema_version"] = kReportSchemaVersion;
    doc["command"] = m.command;
    doc["seed"] = m.seed;
    doc["samples"] = m.samples;
    doc["window"] = std::to_string(m.lo) + ".." + std::to_string(m.hi);
    doc["verdict"] = all_pass(records) ? "PASS" : "FAIL";
    Json rs = Json::array();
    for (const auto& r : records) {
        Json j;
        j["name"] = r.name;
        j["anchor"] = r.anchor;
        j["inputs_digest"] = r.inputs_digest;
        j["verdict"] = r.pass ? "PASS" : "FAIL";
        j["checked"] = r.checked;
        j["counterexample"] = r.counterexample;
        j["details"] = r.details;
        if (m.timing) j["wall_ms"] = std::round(r.wall_ms * 1000) / 1000;
        rs.push_back(std::move(j));
    }
    doc["records"] = std::move(rs);
    return doc;
}

namespace detail {

inline std::string scalar_text(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

inline void render_details(std::ostringstream& out, const Json& d, const std::string& indent) {
    for (const auto& [k, v] : d.items()) {
        if (v.is_array() && !v.empty() && v.front().is_object()) {
            out << indent << k << ":\n";
            std::vector<std::string> cols;
            for (const auto& [ck, cv] : v.front().items()) cols.push_back(ck);
            std::vector<std::size_t> width(cols.size());
            for (std::size_t c = 0; c < cols.size(); ++c) width[c] = cols[c].size();
            for (const auto& row : v)
                for (std::size_t c = 0; c < cols.size(); ++c)
                    width[c] = std::max(width[c], scalar_text(row.value(cols[c], Json())).size());
            auto line = [&](auto&& cell) {
                out << indent << "  ";
                for (std::size_t c = 0; c < cols.size(); ++c)
                    out << std::left << std::setw(static_cast<int>(width[c]) + 2) << cell(c);
                out << "\n";
            };
            line([&](std::size_t c) { return cols[c]; });
            for (const auto& row : v) line([&](std::size_t c) { return scalar_text(row.value(cols[c], Json())); });
        } else {
            out << indent << k << ": " << scalar_text(v) << "\n";
        }
    }
}

}  // namespace detail

// Aligned text rendering of the same records.
inline std::string report_table(const ReportMeta& m, const std::vector<Record>& records) {
    std::ostringstream out;
    out << "toroidalkit report (schema " << kReportSchemaVersion << ")  command=" << m.command << "  seed=" << m.seed
        << "  samples=" << m.samples << "  window=" << m.lo << ".." << m.hi << "\n";
    std::size_t w = 4;
    for (const auto& r : records) w = std::max(w, r.name.size());
    out << std::left << std::setw(static_cast<int>(w) + 2) << "NAME" << std::setw(9) << "VERDICT" << std::setw(12)
        << "CHECKED";
    if (m.timing) out << "WALL_MS";
    out << "\n";
    for (const auto& r : records) {
        out << std::left << std::setw(static_cast<int>(w) + 2) << r.name << std::setw(9) << (r.pass ? "PASS" : "FAIL")
            << std::setw(12) << r.checked;
        if (m.timing) out << std::fixed << std::setprecision(1) << r.wall_ms;
        out << "\n";
        out << "    anchor: " << r.anchor << "\n";
        if (!r.counterexample.is_null()) detail::render_details(out, Json{{"counterexample", r.counterexample}}, "    ");
        if (!r.details.empty()) detail::render_details(out, r.details, "    ");
    }
    out << "verdict: " << (all_pass(records) ? "PASS" : "FAIL") << "\n";
    return out.str();
}

}  // namespace toroidalkit
