// Copyright 2026 The ltkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Rendering of evaluation results: a Markdown table with one accuracy and
// one average-token column per benchmark, and budget,k,accuracy CSV curves.
// Output is byte-deterministic; golden-file tests depend on that.

#pragma once

#include <string>
#include <vector>

#include "ltkit/metrics.hpp"

namespace ltkit::report {

struct RunSummary {
  std::string model_id;
  std::string benchmark_display;
  metrics::AccuracyStyle style = metrics::AccuracyStyle::percent;
  double accuracy = 0.0;
  std::size_t problem_count = 0;
  double avg_tokens = 0.0;
  bool tokens_approximate = false;
};

// "12/30" for fraction-style benchmarks, "85.5" for percent style.
std::string format_accuracy(const RunSummary& s);

// Rounded to the nearest integer token.
std::string format_avg_tokens(double avg);

// Rows are models in first-appearance order, column groups are benchmarks
// in the given order. Every (model, benchmark) pair must be present.
std::string render_table(const std::vector<RunSummary>& summaries);

std::string render_curve_csv(const std::vector<metrics::BudgetPoint>& curve);

}  // namespace ltkit::report
