#include "rtbvar/csv.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rtbvar {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open CSV file: " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    // Skip blank lines (common as trailing newline artifacts).
    bool blank = true;
    for (char c : line)
      if (c != ' ' && c != '\t' && c != '\r') {
        blank = false;
        break;
      }
    if (blank) continue;
    rows.push_back(split_csv_line(line));
  }
  return rows;
}

double parse_double_field(const std::string& field) {
  // Trim surrounding spaces.
  size_t b = field.find_first_not_of(" \t");
  if (b == std::string::npos) return std::numeric_limits<double>::quiet_NaN();
  size_t e = field.find_last_not_of(" \t");
  std::string s = field.substr(b, e - b + 1);
  if (s.empty() || s == "NA" || s == "NaN" || s == "nan")
    return std::numeric_limits<double>::quiet_NaN();
  size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("cannot parse numeric field: '" + field + "'");
  }
  if (pos != s.size()) throw std::runtime_error("cannot parse numeric field: '" + field + "'");
  return v;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  write_text_file(path, out.str());
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  auto rows = read_csv(path);
  if (rows.empty()) return Eigen::MatrixXd(0, 0);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows[0].size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size())
      throw std::runtime_error("ragged CSV matrix in " + path + " at row " + std::to_string(i));
    for (size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          parse_double_field(rows[i][j]);
  }
  return m;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace rtbvar
