#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <string>

namespace turtleglyph {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Exact non-negative rational, kept in lowest terms after every operation.
///
/// Probabilities live in [0,1]; values above 1 are representable so that
/// validate() can report an out-of-range edge weight instead of refusing to
/// build the tree. Negative values are rejected outright (the model grammar
/// cannot produce them). Floating point enters only through to_double(),
/// which callers use at render time.
class Prob {
 public:
  Prob() : value_(0) {}
  Prob(std::int64_t numerator, std::int64_t denominator);
  explicit Prob(const BigRational& value);

  static Prob zero() { return Prob(); }
  static Prob one() { return Prob(1, 1); }

  BigInt numerator() const { return boost::multiprecision::numerator(value_); }
  BigInt denominator() const { return boost::multiprecision::denominator(value_); }
  const BigRational& rational() const { return value_; }

  bool is_zero() const { return value_.is_zero(); }
  bool is_one() const { return value_ == 1; }
  bool in_unit_interval() const { return value_ >= 0 && value_ <= 1; }

  Prob operator+(const Prob& other) const { return Prob(BigRational(value_ + other.value_)); }
  Prob operator*(const Prob& other) const { return Prob(BigRational(value_ * other.value_)); }
  Prob operator-(const Prob& other) const;  // throws DomainError if the result is negative
  Prob operator/(const Prob& other) const;  // throws DomainError on zero divisor

  Prob& operator+=(const Prob& other) { return *this = *this + other; }
  Prob& operator*=(const Prob& other) { return *this = *this * other; }

  bool operator==(const Prob& other) const { return value_ == other.value_; }
  std::strong_ordering operator<=>(const Prob& other) const {
    if (value_ < other.value_) return std::strong_ordering::less;
    if (value_ > other.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  double to_double() const { return value_.convert_to<double>(); }

  /// "23/117"; integral values print without the denominator ("0", "1").
  std::string fraction_str() const;

  /// Exact canonical "num/den" form, denominator always shown ("1/1").
  std::string canonical_fraction_str() const;

  /// Decimal expansion rounded to the given number of significant digits,
  /// trailing zeros trimmed ("0.0552", "0.196581196581", "1").
  std::string decimal_str(int significant_digits) const;

  /// value*100 as a decimal percentage, at most `significant_digits`
  /// significant digits ("5.52%", "92%", "33.33%").
  std::string percent_str(int significant_digits = 4) const;

 private:
  BigRational value_;
};

/// |a - b| without the non-negativity guard kicking in.
Prob abs_difference(const Prob& a, const Prob& b);

}  // namespace turtleglyph
