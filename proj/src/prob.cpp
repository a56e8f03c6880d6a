#include "turtleglyph/prob.hpp"

#include <utility>

#include "turtleglyph/errors.hpp"

namespace turtleglyph {

Prob::Prob(std::int64_t numerator, std::int64_t denominator) {
  if (denominator <= 0) throw DomainError("probability denominator must be positive");
  if (numerator < 0) throw DomainError("probability numerator must be non-negative");
  value_ = BigRational(BigInt(numerator), BigInt(denominator));
}

Prob::Prob(const BigRational& value) : value_(value) {
  if (value_ < 0) throw DomainError("probability cannot be negative");
}

Prob Prob::operator-(const Prob& other) const {
  if (other.value_ > value_) throw DomainError("probability difference would be negative");
  return Prob(BigRational(value_ - other.value_));
}

Prob Prob::operator/(const Prob& other) const {
  if (other.is_zero()) throw DomainError("division of probabilities by zero");
  return Prob(BigRational(value_ / other.value_));
}

std::string Prob::fraction_str() const {
  BigInt den = denominator();
  if (den == 1) return numerator().str();
  return numerator().str() + "/" + den.str();
}

std::string Prob::canonical_fraction_str() const {
  return numerator().str() + "/" + denominator().str();
}

std::string Prob::decimal_str(int significant_digits) const {
  if (significant_digits < 1) significant_digits = 1;
  BigInt num = numerator();
  BigInt den = denominator();
  if (num == 0) return "0";

  // Long division, collecting `significant_digits` digits starting at the
  // first non-zero one, then rounding half away from zero on the remainder.
  BigInt integer_part = num / den;
  BigInt remainder = num % den;

  std::string int_digits = integer_part.str();
  std::string frac_digits;
  int significant_seen = (integer_part == 0) ? 0 : static_cast<int>(int_digits.size());

  while (significant_seen < significant_digits && remainder != 0) {
    remainder *= 10;
    BigInt digit = remainder / den;
    remainder %= den;
    frac_digits += static_cast<char>('0' + digit.convert_to<int>());
    if (significant_seen != 0 || digit != 0) ++significant_seen;
  }

  // Round on what is left over.
  if (remainder * 2 >= den) {
    bool carry = true;
    for (int i = static_cast<int>(frac_digits.size()) - 1; carry && i >= 0; --i) {
      if (frac_digits[i] == '9') {
        frac_digits[i] = '0';
      } else {
        ++frac_digits[i];
        carry = false;
      }
    }
    if (carry) {
      integer_part += 1;
      int_digits = integer_part.str();
    }
  }

  while (!frac_digits.empty() && frac_digits.back() == '0') frac_digits.pop_back();
  if (frac_digits.empty()) return int_digits;
  return int_digits + "." + frac_digits;
}

std::string Prob::percent_str(int significant_digits) const {
  Prob scaled(BigRational(value_ * 100));
  return scaled.decimal_str(significant_digits) + "%";
}

Prob abs_difference(const Prob& a, const Prob& b) {
  return (a >= b) ? a - b : b - a;
}

}  // namespace turtleglyph
