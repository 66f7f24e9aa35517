// Copyright 2026 The ltkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Pass@k, Maj@k, average-token accounting and the budget-constrained
// accuracy metric. All computations are pure; bootstrap draws use a stream
// derived from (seed, problem_id) so serial and parallel evaluation agree
// bit for bit.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ltkit/answer.hpp"
#include "ltkit/jsonl.hpp"

namespace ltkit::metrics {

struct Sample {
  std::string problem_id;
  std::string model_id;
  std::string text;
  std::int64_t token_count = 0;
  bool token_count_estimated = false;  // input had no count; ceil(bytes/4)
  std::optional<std::string> extracted;
  bool correct = false;  // extracted present and equivalent to gold
};

enum class AccuracyStyle { percent, fraction };

struct Benchmark {
  std::string benchmark_id;
  std::string display_name;
  AccuracyStyle accuracy_style = AccuracyStyle::percent;
  bool aime_answer_range = false;  // golds must be integers in [0, 999]
  std::vector<std::string> problem_order;
  std::map<std::string, std::string> gold;  // problem_id -> gold answer
};

struct EvalRun {
  std::string model_id;
  std::string benchmark_id;
  std::map<std::string, std::vector<Sample>> samples;  // per problem, ordered
  int n = 0;  // samples per problem, uniform
  std::map<std::string, std::string> gold;
  bool any_token_estimated = false;

  std::size_t problem_count() const { return samples.size(); }
};

struct BudgetPoint {
  double budget = 0.0;
  int k = 1;  // odd
  double accuracy = 0.0;
};

struct AvgTokens {
  double value = 0.0;
  bool approximate = false;  // some counts were estimated, not reported
};

// Unbiased estimator 1 - C(n-c,k)/C(n,k), evaluated as a product so large
// n never overflows.
double pass_at_k(int n, int c, int k);

struct MajMode {
  enum class Kind { first_k, exhaustive, bootstrap } kind = Kind::exhaustive;
  std::uint64_t seed = 42;
  int bootstrap_samples = 1000;

  static MajMode first_k() { return {Kind::first_k, 0, 0}; }
  static MajMode exhaustive() { return {Kind::exhaustive, 0, 0}; }
  static MajMode bootstrap(std::uint64_t seed, int b) {
    return {Kind::bootstrap, seed, b};
  }
};

// Majority vote correctness. Votes are canonical answers; samples without
// an extracted answer abstain and can never win; ties go to the candidate
// occurring earliest in sample order.
//   first_k:    0/1 over the first k samples
//   exhaustive: mean over all C(n,k) subsets
//   bootstrap:  mean over B uniform subsets from the (seed, problem) stream
double maj_at_k(const std::vector<Sample>& samples, const std::string& gold,
                int k, const MajMode& mode,
                const std::string& stream_label = {});

AvgTokens avg_token_count(const EvalRun& run);

// Plain accuracy: mean over problems of per-problem correct fraction.
double plain_accuracy(const EvalRun& run);

// Largest odd k >= 1 with k * avg <= budget (1 when even that overshoots).
int budget_k(double avg_tokens, double budget);

struct BudgetPolicy {
  std::uint64_t bootstrap_seed = 42;
  int bootstrap_samples = 1000;
  double exhaustive_limit = 10000;  // switch to bootstrap above this C(n,k)
};

// k from budget_k clamped to the run's n (largest odd <= n); accuracy is the
// mean over problems of maj@k, exhaustive while C(n,k) stays under the
// limit, seeded bootstrap beyond it.
BudgetPoint budgeted_accuracy(const EvalRun& run, double budget,
                              const BudgetPolicy& policy = {});

// One point per budget; budgets must be strictly ascending, and the
// resulting k values never decrease.
std::vector<BudgetPoint> scaling_curve(const EvalRun& run,
                                       const std::vector<double>& budgets,
                                       const BudgetPolicy& policy = {});

// C(n,k) as a double; saturates at +inf for huge inputs, which is fine for
// the exhaustive-vs-bootstrap threshold check.
double binomial(int n, int k);

// ---------------------------------------------------------------------------
// Loading

// benchmark manifest: {"benchmark_id", "display_name", "accuracy_style":
// "percent"|"fraction", "aime_answer_range": bool?, "problems_file": path
// relative to the manifest}.
Benchmark load_benchmark(const std::filesystem::path& manifest_path);

struct RawSample {
  std::string problem_id;
  std::string model_id;
  std::string text;
  std::optional<std::int64_t> token_count;
};

// samples.jsonl: {"problem_id", "model_id", "text", "token_count": int|null}
std::vector<RawSample> load_samples(const std::filesystem::path& path);

// Groups one model's samples against a benchmark. Enforces the run shape:
// every benchmark problem present with the same number of samples, no
// samples for unknown problems.
EvalRun build_eval_run(const std::vector<RawSample>& raw,
                       const std::string& model_id, const Benchmark& bench);

// model ids in first-appearance order.
std::vector<std::string> model_ids(const std::vector<RawSample>& raw);

}  // namespace ltkit::metrics
