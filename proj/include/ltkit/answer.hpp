// Copyright 2026 The ltkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Final-answer extraction and equivalence. The accepted grammar is documented
// in GRAMMAR.md; the short version: integers, terminating decimals, a/b and
// \frac{a}{b} canonicalize to reduced rationals and compare exactly,
// everything else compares as a normalized literal string.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ltkit::answer {

enum class AnswerKind { rational, literal };

struct CanonicalAnswer {
  AnswerKind kind = AnswerKind::literal;
  // kind == rational: value num/den in lowest terms, den > 0, sign on num.
  std::int64_t num = 0;
  std::int64_t den = 1;
  // kind == literal: lowercase, wrapper characters stripped.
  std::string literal;

  bool operator==(const CanonicalAnswer&) const = default;
};

// Content of the LAST \boxed{...} in text, with braces balanced by raw
// '{'/'}' depth counting. Absent when there is no \boxed{ or the braces
// after the last opener never balance.
std::optional<std::string> extract_boxed(std::string_view text);

// Total function: never throws, anything outside the numeric grammar
// falls back to a normalized literal.
CanonicalAnswer canonicalize(std::string_view raw);

// True iff both sides canonicalize to the same rational or the same literal.
bool equivalent(std::string_view a, std::string_view b);

// True iff the canonical form is an integer in [0, 999].
bool validate_aime_range(std::string_view a);

// Renders a canonical answer back to a parseable string ("-3/4", "42",
// or the literal text). canonicalize(render(c)) == c.
std::string render(const CanonicalAnswer& c);

}  // namespace ltkit::answer
