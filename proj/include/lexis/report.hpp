#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "lexis/evolve.hpp"
#include "lexis/token.hpp"

namespace lexis {

// Numbers are exported with 12 significant digits; the CSV parses back into
// equal values at that precision.
std::string format_double(double value);

// CSV column order is fixed; see metrics_csv_header().
std::string metrics_csv_header();
std::string metrics_csv(const std::vector<TimelineRecord>& records);
nlohmann::json metrics_json(const std::vector<TimelineRecord>& records);

// Minimal CSV reader for round-trip checks (quotes only around fields
// containing separators).
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

// Writes via a temp file and rename so readers never observe partial output.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

// FNV-1a 64 over the raw file bytes, as "fnv1a64:<hex>".
std::string checksum_file(const std::filesystem::path& path);

}  // namespace lexis
