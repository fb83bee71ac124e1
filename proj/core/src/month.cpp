#include "rtbvar/month.hpp"

#include <cstdio>
#include <stdexcept>

namespace rtbvar {

Month::Month(int year, int month) {
  if (month < 1 || month > 12)
    throw std::runtime_error("Month: month out of range: " + std::to_string(month));
  idx_ = year * 12 + month - 1;
}

Month Month::parse(std::string_view text) {
  // Accept exactly "YYYY-MM" (4 digits, dash, 2 digits).
  if (text.size() != 7 || text[4] != '-')
    throw std::runtime_error("Month: expected YYYY-MM, got '" + std::string(text) + "'");
  for (int i : {0, 1, 2, 3, 5, 6})
    if (text[i] < '0' || text[i] > '9')
      throw std::runtime_error("Month: expected YYYY-MM, got '" + std::string(text) + "'");
  int year = (text[0] - '0') * 1000 + (text[1] - '0') * 100 + (text[2] - '0') * 10 + (text[3] - '0');
  int month = (text[5] - '0') * 10 + (text[6] - '0');
  if (month < 1 || month > 12)
    throw std::runtime_error("Month: month out of range in '" + std::string(text) + "'");
  return Month(year, month);
}

std::string Month::str() const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d", year(), month());
  return buf;
}

}  // namespace rtbvar
