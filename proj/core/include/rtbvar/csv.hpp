#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace rtbvar {

// Minimal CSV support for the plain numeric/text tables this project reads and
// writes. No quoting or escaping: none of our formats need it, and keeping the
// reader strict means malformed files fail loudly instead of half-parsing.

// Splits one line on ','. Empty fields are preserved ("a,,b" -> {"a","","b"}).
std::vector<std::string> split_csv_line(const std::string& line);

// Reads all non-empty lines of a CSV file, split into fields.
// Throws std::runtime_error naming the path if the file cannot be opened.
std::vector<std::vector<std::string>> read_csv(const std::string& path);

// Parses a double field; empty string -> NaN (our missing-value convention).
// Throws std::runtime_error with the offending text on garbage.
double parse_double_field(const std::string& field);

// Full-precision formatting ("%.17g"): values survive a write/read round trip
// bit-exactly, which the determinism tests rely on.
std::string format_double(double v);

// Writes a matrix as bare CSV rows (no header).
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(const std::string& path);

// Writes `text` to `path`, creating parent directories as needed.
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace rtbvar
