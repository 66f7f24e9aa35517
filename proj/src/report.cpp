// Copyright 2026 The ltkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "ltkit/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ltkit/errors.hpp"

namespace ltkit::report {
namespace {

std::string printf_str(const char* fmt, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, value);
  return buf;
}

std::string format_budget(double budget) {
  if (budget == std::floor(budget) && std::abs(budget) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.0f", budget);
    return buf;
  }
  return printf_str("%.6g", budget);
}

}  // namespace

std::string format_accuracy(const RunSummary& s) {
  if (s.style == metrics::AccuracyStyle::fraction) {
    auto solved = static_cast<long long>(
        std::llround(s.accuracy * static_cast<double>(s.problem_count)));
    return std::to_string(solved) + "/" + std::to_string(s.problem_count);
  }
  return printf_str("%.1f", s.accuracy * 100.0);
}

std::string format_avg_tokens(double avg) { return printf_str("%.0f", avg); }

std::string render_table(const std::vector<RunSummary>& summaries) {
  // Preserve first-appearance order for both axes.
  std::vector<std::string> models;
  std::vector<std::string> benchmarks;
  for (const auto& s : summaries) {
    if (std::find(models.begin(), models.end(), s.model_id) == models.end()) {
      models.push_back(s.model_id);
    }
    if (std::find(benchmarks.begin(), benchmarks.end(),
                  s.benchmark_display) == benchmarks.end()) {
      benchmarks.push_back(s.benchmark_display);
    }
  }
  auto cell = [&](const std::string& model,
                  const std::string& bench) -> const RunSummary& {
    for (const auto& s : summaries) {
      if (s.model_id == model && s.benchmark_display == bench) return s;
    }
    throw ValidationError("report table is missing the (" + model + ", " +
                          bench + ") cell");
  };

  std::string out = "| Model |";
  for (const auto& b : benchmarks) {
    out += " " + b + " Accuracy | " + b + " # Average Token |";
  }
  out += "\n|---|";
  for (std::size_t i = 0; i < benchmarks.size(); ++i) out += "---|---|";
  out += "\n";
  bool any_approx = false;
  for (const auto& model : models) {
    out += "| " + model + " |";
    for (const auto& bench : benchmarks) {
      const RunSummary& s = cell(model, bench);
      out += " " + format_accuracy(s) + " | " + format_avg_tokens(s.avg_tokens) +
             " |";
      any_approx |= s.tokens_approximate;
    }
    out += "\n";
  }
  if (any_approx) {
    out += "\nNote: some token counts were estimated from byte length, not "
           "provider-reported.\n";
  }
  return out;
}

std::string render_curve_csv(const std::vector<metrics::BudgetPoint>& curve) {
  std::string out = "budget,k,accuracy\n";
  for (const auto& point : curve) {
    out += format_budget(point.budget) + "," + std::to_string(point.k) + "," +
           printf_str("%.6f", point.accuracy) + "\n";
  }
  return out;
}

}  // namespace ltkit::report
