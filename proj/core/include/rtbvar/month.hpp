#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace rtbvar {

// Calendar month, stored as a single integer index (year * 12 + month - 1).
// All panel/vintage timestamps in this library are monthly; arithmetic on
// Month is plain integer arithmetic, so month differences and shifts are exact.
class Month {
 public:
  Month() = default;
  Month(int year, int month);

  // Parses "YYYY-MM". Throws std::runtime_error naming the bad token.
  static Month parse(std::string_view text);

  int year() const { return idx_ >= 0 ? idx_ / 12 : -((-idx_ + 11) / 12); }
  int month() const { return idx_ - year() * 12 + 1; }
  int index() const { return idx_; }
  static Month from_index(int idx) {
    Month m;
    m.idx_ = idx;
    return m;
  }

  std::string str() const;  // "YYYY-MM"

  Month operator+(int months) const { return from_index(idx_ + months); }
  Month operator-(int months) const { return from_index(idx_ - months); }
  int operator-(Month other) const { return idx_ - other.idx_; }
  Month& operator+=(int months) {
    idx_ += months;
    return *this;
  }
  Month& operator++() {
    ++idx_;
    return *this;
  }
  auto operator<=>(const Month&) const = default;

 private:
  int idx_ = 0;
};

}  // namespace rtbvar
