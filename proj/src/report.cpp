#include "lexis/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "lexis/errors.hpp"

namespace lexis {

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

namespace {

std::string histogram_field(const std::map<std::uint64_t, std::uint64_t>& histogram) {
    std::string out;
    for (const auto& [count, sources] : histogram) {
        if (!out.empty()) out.push_back(';');
        out += std::to_string(count) + ":" + std::to_string(sources);
    }
    return out;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

std::string metrics_csv_header() {
    return "label,targets_added,targets_skipped,targets_removed,sources_added,"
           "cost_flat,cost_after_stage1,cost_after_stage2,"
           "normalized_cost,normalized_cost_stage1,avg_depth,avg_node_length,"
           "core_size,flat_core_size,core_feasible,h_score,diversity,"
           "core_stability_vs_prev,source_similarity_vs_prev,source_reuse_histogram";
}

std::string metrics_csv(const std::vector<TimelineRecord>& records) {
    std::string out = metrics_csv_header() + "\n";
    for (const TimelineRecord& r : records) {
        const StepReport& s = r.report;
        const MetricRecord& m = r.metrics;
        std::vector<std::string> fields = {
            m.label,
            std::to_string(s.targets_added),
            std::to_string(s.targets_skipped),
            std::to_string(s.targets_removed),
            std::to_string(s.sources_added),
            std::to_string(s.cost_flat),
            std::to_string(s.cost_after_stage1),
            std::to_string(s.cost_after_stage2),
            format_double(m.normalized_cost),
            format_double(m.normalized_cost_stage1),
            format_double(m.avg_depth),
            format_double(m.avg_node_length),
            std::to_string(m.core_size),
            std::to_string(m.flat_core_size),
            m.core_feasible ? "1" : "0",
            format_double(m.h_score),
            format_double(m.diversity),
            m.core_stability_vs_prev ? format_double(*m.core_stability_vs_prev) : "",
            m.source_similarity_vs_prev ? format_double(*m.source_similarity_vs_prev) : "",
            histogram_field(m.source_reuse_histogram),
        };
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i > 0) out.push_back(',');
            out += csv_escape(fields[i]);
        }
        out.push_back('\n');
    }
    return out;
}

nlohmann::json metrics_json(const std::vector<TimelineRecord>& records) {
    nlohmann::json rows = nlohmann::json::array();
    for (const TimelineRecord& r : records) {
        const StepReport& s = r.report;
        const MetricRecord& m = r.metrics;
        nlohmann::json row;
        row["label"] = m.label;
        row["targets_added"] = s.targets_added;
        row["targets_skipped"] = s.targets_skipped;
        row["targets_removed"] = s.targets_removed;
        row["sources_added"] = s.sources_added;
        row["cost_flat"] = s.cost_flat;
        row["cost_after_stage1"] = s.cost_after_stage1;
        row["cost_after_stage2"] = s.cost_after_stage2;
        row["normalized_cost"] = m.normalized_cost;
        row["normalized_cost_stage1"] = m.normalized_cost_stage1;
        row["avg_depth"] = m.avg_depth;
        row["avg_node_length"] = m.avg_node_length;
        row["core_size"] = m.core_size;
        row["flat_core_size"] = m.flat_core_size;
        row["core_feasible"] = m.core_feasible;
        row["h_score"] = m.h_score;
        row["diversity"] = m.diversity;
        row["core_stability_vs_prev"] =
            m.core_stability_vs_prev ? nlohmann::json(*m.core_stability_vs_prev)
                                     : nlohmann::json();
        row["source_similarity_vs_prev"] =
            m.source_similarity_vs_prev ? nlohmann::json(*m.source_similarity_vs_prev)
                                        : nlohmann::json();
        nlohmann::json histogram = nlohmann::json::array();
        for (const auto& [count, sources] : m.source_reuse_histogram)
            histogram.push_back({count, sources});
        row["source_reuse_histogram"] = std::move(histogram);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            row.push_back(std::move(field));
            field.clear();
            rows.push_back(std::move(row));
            row.clear();
        } else {
            field.push_back(c);
        }
    }
    if (!field.empty() || !row.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw InputError("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string checksum_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::uint64_t h = 1469598103934665603ull;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
        if (in.eof()) break;
    }
    char hex[32];
    std::snprintf(hex, sizeof(hex), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return hex;
}

}  // namespace lexis
