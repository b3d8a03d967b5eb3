#pragma once

// Numeric and string conversion primitives shared by the concrete and
// abstract interpreters. These follow the third-edition ECMAScript rules
// for number formatting, string-to-number parsing, and the integer
// conversions; the expression test battery pins them against a production
// engine.

#include <cmath>
#include <cstdint>
#include <charconv>
#include <string>
#include <string_view>

namespace njs::ecma {

// ToString for numbers: shortest decimal digits, laid out per the spec's
// positional rules ("0.000001" but "1e-7", "1e+21" past 21 digits).
inline std::string num_to_string(double v) {
  if (std::isnan(v)) return "NaN";
  if (v == 0) return "0";
  if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
  if (v < 0) return "-" + num_to_string(-v);

  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v,
                                 std::chars_format::scientific);
  (void)ec;
  std::string_view sci(buf, static_cast<size_t>(ptr - buf));

  // sci looks like "d.dddde±xx" or "de±xx"; split digits and exponent.
  std::string digits;
  size_t i = 0;
  while (i < sci.size() && sci[i] != 'e') {
    if (sci[i] != '.') digits.push_back(sci[i]);
    ++i;
  }
  int exp10 = 0;
  {
    size_t j = i + 1;  // past 'e'
    bool neg = false;
    if (j < sci.size() && (sci[j] == '+' || sci[j] == '-')) {
      neg = sci[j] == '-';
      ++j;
    }
    for (; j < sci.size(); ++j) exp10 = exp10 * 10 + (sci[j] - '0');
    if (neg) exp10 = -exp10;
  }
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();

  int k = static_cast<int>(digits.size());
  int n = exp10 + 1;  // value == 0.digits * 10^n

  std::string out;
  if (k <= n && n <= 21) {
    out = digits;
    out.append(static_cast<size_t>(n - k), '0');
  } else if (0 < n && n <= 21) {
    out = digits.substr(0, static_cast<size_t>(n)) + "." +
          digits.substr(static_cast<size_t>(n));
  } else if (-6 < n && n <= 0) {
    out = "0.";
    out.append(static_cast<size_t>(-n), '0');
    out += digits;
  } else {
    out = digits.substr(0, 1);
    if (k > 1) out += "." + digits.substr(1);
    out += "e";
    out += (n - 1 >= 0) ? "+" : "-";
    out += std::to_string(n - 1 >= 0 ? n - 1 : -(n - 1));
  }
  return out;
}

inline bool is_ws(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// ToNumber for strings: trimmed decimal/hex literal or Infinity, empty
// string is 0, anything else NaN. ASCII whitespace only; program strings
// are byte strings here.
inline double string_to_num(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && is_ws(s[b])) ++b;
  while (e > b && is_ws(s[e - 1])) --e;
  s = s.substr(b, e - b);
  if (s.empty()) return 0.0;

  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    double v = 0;
    for (size_t i = 2; i < s.size(); ++i) {
      char c = s[i];
      int d;
      if (c >= '0' && c <= '9') d = c - '0';
      else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
      else return __builtin_nan("");
      v = v * 16 + d;
    }
    return v;
  }

  bool neg = false;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    s = s.substr(1);
    if (s.empty()) return __builtin_nan("");
  }
  if (s == "Infinity") return neg ? -__builtin_inf() : __builtin_inf();

  // Decimal literal: digits [. digits] [e [sign] digits] | . digits ...
  size_t i = 0;
  size_t int_digits = 0, frac_digits = 0;
  while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i, ++int_digits;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i, ++frac_digits;
  }
  if (int_digits == 0 && frac_digits == 0) return __builtin_nan("");
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    size_t exp_digits = 0;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i, ++exp_digits;
    if (exp_digits == 0) return __builtin_nan("");
  }
  if (i != s.size()) return __builtin_nan("");

  std::string norm(s);
  if (norm[0] == '.') norm.insert(norm.begin(), '0');
  double v = 0;
  auto [ptr, ec] = std::from_chars(norm.data(), norm.data() + norm.size(), v);
  (void)ptr;
  if (ec == std::errc::result_out_of_range) {
    // from_chars leaves v unmodified on range errors; decide overflow vs
    // underflow from the literal's decimal exponent.
    size_t epos = norm.find_first_of("eE");
    std::string mant =
        epos == std::string::npos ? norm : norm.substr(0, epos);
    long long ex = 0;
    if (epos != std::string::npos) {
      size_t j = epos + 1;
      bool exn = false;
      if (norm[j] == '+' || norm[j] == '-') exn = norm[j++] == '-';
      for (; j < norm.size() && ex < 100000000; ++j)
        ex = ex * 10 + (norm[j] - '0');
      if (exn) ex = -ex;
    }
    size_t dot = mant.find('.');
    long long point =
        dot == std::string::npos ? static_cast<long long>(mant.size())
                                 : static_cast<long long>(dot);
    std::string digits =
        dot == std::string::npos ? mant
                                 : mant.substr(0, dot) + mant.substr(dot + 1);
    size_t fs = digits.find_first_not_of('0');
    if (fs == std::string::npos) {
      v = 0.0;
    } else {
      long long log10_est = point - static_cast<long long>(fs) - 1 + ex;
      v = log10_est > 0 ? __builtin_inf() : 0.0;
    }
  } else if (ec != std::errc()) {
    return __builtin_nan("");
  }
  return neg ? -v : v;
}

inline std::uint32_t to_uint32(double v) {
  if (std::isnan(v) || std::isinf(v)) return 0;
  double t = std::trunc(v);
  double m = std::fmod(t, 4294967296.0);
  if (m < 0) m += 4294967296.0;
  return static_cast<std::uint32_t>(m);
}

inline std::int32_t to_int32(double v) {
  std::uint32_t u = to_uint32(v);
  return static_cast<std::int32_t>(u);
}

// True when s is the canonical ToString image of some number. This is what
// the string lattice calls a numeric string: "0", "3.5", "-7", "NaN",
// "Infinity", canonical array indexes, exponent forms.
inline bool is_canonical_numeric(std::string_view s) {
  if (s == "NaN") return true;
  double v = string_to_num(s);
  if (std::isnan(v)) return false;
  // string_to_num trims and accepts non-canonical spellings; require the
  // round trip to reproduce the exact input.
  return num_to_string(v) == s;
}

// Canonical array index below 2^32-1, per the array length coupling.
inline bool is_array_index(std::string_view s, std::uint32_t* out = nullptr) {
  if (s.empty() || s.size() > 10) return false;
  if (s[0] == '0' && s.size() > 1) return false;
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  if (v >= 0xFFFFFFFFull) return false;
  if (out) *out = static_cast<std::uint32_t>(v);
  return true;
}

}  // namespace njs::ecma
