// Copyright 2026 The ltkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "ltkit/answer.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace ltkit::answer {
namespace {

constexpr std::string_view kBoxed = "\\boxed{";
constexpr int kMaxFractionDigits = 12;   // longer decimals compare as literals
constexpr int kMaxIntegerDigits = 18;    // keeps everything inside int64

bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

bool strip_prefix(std::string_view& s, std::string_view p) {
  if (s.substr(0, p.size()) == p) {
    s.remove_prefix(p.size());
    return true;
  }
  return false;
}

bool strip_suffix(std::string_view& s, std::string_view p) {
  if (s.size() >= p.size() && s.substr(s.size() - p.size()) == p) {
    s.remove_suffix(p.size());
    return true;
  }
  return false;
}

// Surrounding whitespace, "$", "\(" / "\)" and trailing periods, as the
// literal normalization rules demand. Applied before the numeric attempt so
// "$42.$" and "42" agree. Stripping runs to a fixed point; that keeps
// canonicalize idempotent ("x.." and "x." normalize alike).
std::string_view strip_wrappers(std::string_view s) {
  bool changed = true;
  while (changed) {
    changed = false;
    s = trim(s);
    changed |= strip_prefix(s, "$");
    changed |= strip_prefix(s, "\\(");
    changed |= strip_suffix(s, "$");
    changed |= strip_suffix(s, "\\)");
    if (!s.empty() && s.back() == '.') {
      s.remove_suffix(1);
      changed = true;
    }
  }
  if (s.size() >= std::string_view("\\left(").size()) {
    std::string_view inner = s;
    if (strip_prefix(inner, "\\left(") && strip_suffix(inner, "\\right)")) {
      s = trim(inner);
    }
  }
  return s;
}

struct Cursor {
  std::string_view s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() &&
           std::isspace(static_cast<unsigned char>(s[pos]))) {
      ++pos;
    }
  }
  bool eat(char c) {
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool eat(std::string_view word) {
    if (s.substr(pos, word.size()) == word) {
      pos += word.size();
      return true;
    }
    return false;
  }
  bool done() const { return pos == s.size(); }
};

// Digits with optional thousands separators: either "1234" or "1,234,567".
// Returns the digit string with commas removed, empty on failure.
std::string parse_comma_digits(Cursor& c) {
  std::size_t start = c.pos;
  std::string digits;
  while (c.pos < c.s.size() && is_digit(c.s[c.pos])) {
    digits.push_back(c.s[c.pos]);
    ++c.pos;
  }
  if (digits.empty()) return {};
  if (c.pos < c.s.size() && c.s[c.pos] == ',') {
    if (digits.size() > 3) {
      c.pos = start;
      return {};
    }
    while (c.pos < c.s.size() && c.s[c.pos] == ',') {
      ++c.pos;
      std::string group;
      while (c.pos < c.s.size() && is_digit(c.s[c.pos])) {
        group.push_back(c.s[c.pos]);
        ++c.pos;
      }
      if (group.size() != 3) {
        c.pos = start;
        return {};
      }
      digits += group;
    }
  }
  return digits;
}

int parse_sign(Cursor& c) {
  if (c.eat('-')) return -1;
  c.eat('+');
  return 1;
}

bool digits_to_i64(const std::string& digits, std::int64_t& out) {
  if (digits.empty() || digits.size() > static_cast<std::size_t>(kMaxIntegerDigits)) {
    return false;
  }
  unsigned long long v = 0;
  for (char d : digits) v = v * 10 + static_cast<unsigned>(d - '0');
  if (v > static_cast<unsigned long long>(INT64_MAX)) return false;
  out = static_cast<std::int64_t>(v);
  return true;
}

CanonicalAnswer make_rational(std::int64_t num, std::int64_t den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  CanonicalAnswer c;
  c.kind = AnswerKind::rational;
  c.num = num;
  c.den = den;
  return c;
}

// Signed integer with optional thousands separators.
bool parse_signed_int(Cursor& c, std::int64_t& out) {
  c.skip_ws();
  int sign = parse_sign(c);
  std::string digits = parse_comma_digits(c);
  std::int64_t mag = 0;
  if (!digits_to_i64(digits, mag)) return false;
  out = sign * mag;
  return true;
}

// One \frac argument: "{" signed integer "}".
bool parse_frac_arg(Cursor& c, std::int64_t& out) {
  c.skip_ws();
  if (!c.eat('{')) return false;
  if (!parse_signed_int(c, out)) return false;
  c.skip_ws();
  return c.eat('}');
}

std::optional<CanonicalAnswer> parse_rational(std::string_view s) {
  Cursor c{s};
  c.skip_ws();
  int sign = parse_sign(c);  // leading sign of the whole expression
  c.skip_ws();

  if (c.eat(std::string_view("\\frac"))) {
    std::int64_t a = 0, b = 0;
    if (!parse_frac_arg(c, a) || !parse_frac_arg(c, b)) return std::nullopt;
    c.skip_ws();
    if (!c.done() || b == 0) return std::nullopt;
    return make_rational(sign * a, b);
  }

  std::string int_digits = parse_comma_digits(c);
  std::string frac_digits;
  bool has_dot = false;
  if (c.pos < c.s.size() && c.s[c.pos] == '.') {
    has_dot = true;
    ++c.pos;
    while (c.pos < c.s.size() && is_digit(c.s[c.pos])) {
      frac_digits.push_back(c.s[c.pos]);
      ++c.pos;
    }
  }
  if (int_digits.empty() && frac_digits.empty()) return std::nullopt;

  if (has_dot) {
    if (frac_digits.empty()) return std::nullopt;
    c.skip_ws();
    if (!c.done()) return std::nullopt;
    if (frac_digits.size() > static_cast<std::size_t>(kMaxFractionDigits)) {
      return std::nullopt;
    }
    std::int64_t ipart = 0, fpart = 0;
    if (!int_digits.empty() && !digits_to_i64(int_digits, ipart)) {
      return std::nullopt;
    }
    if (!digits_to_i64(frac_digits, fpart)) return std::nullopt;
    __int128 den = 1;
    for (std::size_t i = 0; i < frac_digits.size(); ++i) den *= 10;
    __int128 num = static_cast<__int128>(ipart) * den + fpart;
    if (num > INT64_MAX) return std::nullopt;
    return make_rational(sign * static_cast<std::int64_t>(num),
                         static_cast<std::int64_t>(den));
  }

  std::int64_t numerator = 0;
  if (!digits_to_i64(int_digits, numerator)) return std::nullopt;
  numerator *= sign;

  c.skip_ws();
  if (c.eat('/')) {
    std::int64_t denominator = 0;
    if (!parse_signed_int(c, denominator)) return std::nullopt;
    c.skip_ws();
    if (!c.done() || denominator == 0) return std::nullopt;
    return make_rational(numerator, denominator);
  }
  if (!c.done()) return std::nullopt;
  return make_rational(numerator, 1);
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char ch) {
    return static_cast<char>(std::tolower(ch));
  });
  return out;
}

}  // namespace

std::optional<std::string> extract_boxed(std::string_view text) {
  std::size_t last = text.rfind(kBoxed);
  if (last == std::string_view::npos) return std::nullopt;
  std::size_t start = last + kBoxed.size();
  int depth = 1;
  for (std::size_t i = start; i < text.size(); ++i) {
    if (text[i] == '{') {
      ++depth;
    } else if (text[i] == '}') {
      --depth;
      if (depth == 0) {
        return std::string(text.substr(start, i - start));
      }
    }
  }
  return std::nullopt;  // opener never balanced
}

CanonicalAnswer canonicalize(std::string_view raw) {
  std::string_view stripped = strip_wrappers(raw);
  if (auto rational = parse_rational(stripped)) {
    return *rational;
  }
  CanonicalAnswer c;
  c.kind = AnswerKind::literal;
  c.literal = to_lower(stripped);
  return c;
}

bool equivalent(std::string_view a, std::string_view b) {
  return canonicalize(a) == canonicalize(b);
}

bool validate_aime_range(std::string_view a) {
  CanonicalAnswer c = canonicalize(a);
  return c.kind == AnswerKind::rational && c.den == 1 && c.num >= 0 &&
         c.num <= 999;
}

std::string render(const CanonicalAnswer& c) {
  if (c.kind == AnswerKind::literal) return c.literal;
  if (c.den == 1) return std::to_string(c.num);
  return std::to_string(c.num) + "/" + std::to_string(c.den);
}

}  // namespace ltkit::answer
