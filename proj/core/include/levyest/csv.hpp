#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace levyest {

/// Formats a double with enough digits to round-trip exactly.
std::string fmt_double(double v);

/// Writes lines to a file, appending '\n' to each. Throws IOError.
void write_lines(const std::string& file, const std::vector<std::string>& lines);

std::vector<std::string> read_lines(const std::string& file);

/// Key=value sidecar records (one pair per line, '#' comments allowed).
void write_kv(const std::string& file, const std::vector<std::pair<std::string, std::string>>& kv);
std::map<std::string, std::string> read_kv(const std::string& file);

/// Splits a CSV row on commas (no quoting; the formats here never need it).
std::vector<std::string> split_csv_row(const std::string& row);

/// FNV-1a hash of a string, for config provenance stamps.
std::uint64_t fnv1a(const std::string& s);

}  // namespace levyest
