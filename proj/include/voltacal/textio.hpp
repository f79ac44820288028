#pragma once

#include <optional>
#include <string>
#include <vector>

namespace voltacal {

// Shortest decimal form that parses back to exactly the same double.
std::string format_full(double x);

// Fixed-point rendering with the given number of decimals (reporting only).
std::string format_fixed(double x, int decimals);

// Splits one CSV line on commas; no quoting support, none of our files
// need it. A trailing '\r' is stripped first.
std::vector<std::string> split_csv(const std::string& line);

// Whole-string double parse; empty result on any trailing garbage.
std::optional<double> parse_double(const std::string& s);

// Reads a whole file; throws voltacal::EmptyFile on missing/unreadable path.
std::string read_text_file(const std::string& path);

// Writes content to path, replacing anything there; throws
// voltacal::EmptyFile when the path cannot be opened.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace voltacal
