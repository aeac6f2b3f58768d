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

#include "claims/rational.h"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace claims {
namespace {

using Wide = __int128;

int64_t Narrow(Wide v) {
  if (v > std::numeric_limits<int64_t>::max() || v < std::numeric_limits<int64_t>::min()) {
    throw std::overflow_error("rational overflow");
  }
  return static_cast<int64_t>(v);
}

Wide Gcd(Wide a, Wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Rational Make(Wide n, Wide d) {
  if (d == 0) throw std::domain_error("division by zero");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  Wide g = Gcd(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  return Rational(Narrow(n), Narrow(d));
}

}  // namespace

Rational::Rational(int64_t n) : num_(n), den_(1) {}

Rational::Rational(int64_t n, int64_t d) {
  if (d == 0) throw std::domain_error("division by zero");
  Wide wn = n;
  Wide wd = d;
  if (wd < 0) {
    wn = -wn;
    wd = -wd;
  }
  Wide g = Gcd(wn, wd);
  if (g > 1) {
    wn /= g;
    wd /= g;
  }
  num_ = Narrow(wn);
  den_ = Narrow(wd);
}

Rational Rational::Parse(std::string_view text) {
  auto fail = [&] { return std::invalid_argument("bad number '" + std::string(text) + "'"); };
  if (text.empty()) throw fail();
  size_t slash = text.find('/');
  if (slash != std::string_view::npos) {
    int64_t n = 0;
    int64_t d = 0;
    auto r1 = std::from_chars(text.data(), text.data() + slash, n);
    auto r2 = std::from_chars(text.data() + slash + 1, text.data() + text.size(), d);
    if (r1.ec != std::errc() || r1.ptr != text.data() + slash || r2.ec != std::errc() ||
        r2.ptr != text.data() + text.size()) {
      throw fail();
    }
    return Rational(n, d);
  }
  bool negative = text[0] == '-';
  std::string_view body = negative ? text.substr(1) : text;
  size_t dot = body.find('.');
  std::string_view int_part = body.substr(0, dot);
  std::string_view frac_part =
      dot == std::string_view::npos ? std::string_view() : body.substr(dot + 1);
  if (int_part.empty() && frac_part.empty()) throw fail();
  Wide n = 0;
  Wide d = 1;
  for (std::string_view part : {int_part, frac_part}) {
    for (char c : part) {
      if (c < '0' || c > '9') throw fail();
      n = n * 10 + (c - '0');
      if (n > std::numeric_limits<int64_t>::max()) throw std::overflow_error("rational overflow");
    }
  }
  for (size_t i = 0; i < frac_part.size(); ++i) {
    d *= 10;
    if (d > std::numeric_limits<int64_t>::max()) throw std::overflow_error("rational overflow");
  }
  return Make(negative ? -n : n, d);
}

Rational Rational::FromDouble(double value) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed);
  if (r.ec != std::errc()) throw std::invalid_argument("unrepresentable number");
  return Parse(std::string_view(buf, r.ptr - buf));
}

Rational Rational::operator+(const Rational &o) const {
  return Make(Wide(num_) * o.den_ + Wide(o.num_) * den_, Wide(den_) * o.den_);
}

Rational Rational::operator-(const Rational &o) const {
  return Make(Wide(num_) * o.den_ - Wide(o.num_) * den_, Wide(den_) * o.den_);
}

Rational Rational::operator*(const Rational &o) const {
  return Make(Wide(num_) * o.num_, Wide(den_) * o.den_);
}

Rational Rational::operator/(const Rational &o) const {
  return Make(Wide(num_) * o.den_, Wide(den_) * o.num_);
}

std::strong_ordering Rational::operator<=>(const Rational &o) const {
  Wide l = Wide(num_) * o.den_;
  Wide r = Wide(o.num_) * den_;
  if (l < r) return std::strong_ordering::less;
  if (l > r) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

int64_t Rational::RoundHalfUp() const {
  Wide n = num_;
  Wide d = den_;
  Wide twice = 2 * (n < 0 ? -n : n) + d;
  Wide q = twice / (2 * d);
  return Narrow(n < 0 ? -q : q);
}

std::string Rational::ToString() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string Rational::ToDecimalString() const {
  int64_t d = den_;
  int twos = 0;
  int fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  if (d != 1) return ToString();
  int digits = std::max(twos, fives);
  Wide scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  Wide scaled = Wide(num_) * (scale / den_);
  bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string s = std::to_string(static_cast<int64_t>(scaled / scale));
  if (digits > 0) {
    std::string frac = std::to_string(static_cast<int64_t>(scaled % scale));
    s += "." + std::string(digits - frac.size(), '0') + frac;
  }
  return negative ? "-" + s : s;
}

}  // namespace claims
