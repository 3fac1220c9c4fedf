#pragma once

#include <string>
#include <vector>

namespace c3::csv {

/// Round-trip formatting for doubles (%.17g); NaN prints as "nan".
std::string fmt(double v);

double parse_double(const std::string& field, const std::string& context);

/// Writes content to path via a temp file + rename so readers never observe
/// a partially written file.
void write_file_atomic(const std::string& path, const std::string& content);

std::vector<std::vector<std::string>> read_rows(const std::string& path);

std::string join_row(const std::vector<std::string>& fields);

}  // namespace c3::csv
