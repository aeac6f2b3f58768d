// Copyright 2026 The Claims Validation Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CLAIMS_RATIONAL_H_
#define CLAIMS_RATIONAL_H_

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace claims {

// Exact rational number with 64-bit numerator and denominator, always in
// lowest terms with a positive denominator. Arithmetic that would overflow
// throws std::overflow_error.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(int64_t n);  // NOLINT: implicit from integers is intended
  Rational(int64_t n, int64_t d);

  int64_t num() const { return num_; }
  int64_t den() const { return den_; }

  // Parses "3", "-2", "1.25", "3/5".
  static Rational Parse(std::string_view text);
  // Shortest decimal that round-trips the double, read exactly.
  static Rational FromDouble(double value);

  Rational operator+(const Rational &o) const;
  Rational operator-(const Rational &o) const;
  Rational operator*(const Rational &o) const;
  Rational operator/(const Rational &o) const;
  Rational operator-() const { return Rational(-num_, den_); }
  Rational &operator+=(const Rational &o) { return *this = *this + o; }
  Rational &operator-=(const Rational &o) { return *this = *this - o; }

  bool operator==(const Rational &o) const = default;
  std::strong_ordering operator<=>(const Rational &o) const;

  // Nearest integer, halves rounded away from zero.
  int64_t RoundHalfUp() const;
  bool is_integer() const { return den_ == 1; }

  // "n" or "n/d".
  std::string ToString() const;
  // Decimal form when the denominator is a product of 2s and 5s, otherwise
  // ToString().
  std::string ToDecimalString() const;
  double ToDouble() const { return static_cast<double>(num_) / static_cast<double>(den_); }

 private:
  int64_t num_ = 0;
  int64_t den_ = 1;
};

}  // namespace claims

#endif  // CLAIMS_RATIONAL_H_
