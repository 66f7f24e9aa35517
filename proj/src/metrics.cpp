// Copyright 2026 The ltkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "ltkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "ltkit/corpus.hpp"
#include "ltkit/digest.hpp"
#include "ltkit/errors.hpp"

namespace ltkit::metrics {
namespace {

// Stable vote key for a canonical answer; rationals and literals can never
// collide.
std::string vote_key(const answer::CanonicalAnswer& c) {
  return (c.kind == answer::AnswerKind::rational ? "r:" : "l:") +
         answer::render(c);
}

std::vector<std::optional<std::string>> vote_keys(
    const std::vector<Sample>& samples) {
  std::vector<std::optional<std::string>> keys;
  keys.reserve(samples.size());
  for (const auto& s : samples) {
    if (s.extracted.has_value()) {
      keys.push_back(vote_key(answer::canonicalize(*s.extracted)));
    } else {
      keys.push_back(std::nullopt);  // abstain
    }
  }
  return keys;
}

// Majority over the subset (indices in ascending sample order). Abstains are
// skipped; ties break toward the candidate seen earliest.
bool majority_correct(const std::vector<int>& subset,
                      const std::vector<std::optional<std::string>>& keys,
                      const std::string& gold_key) {
  std::map<std::string, int> counts;
  std::map<std::string, int> first_seen;
  int order = 0;
  for (int idx : subset) {
    const auto& key = keys[static_cast<std::size_t>(idx)];
    ++order;
    if (!key.has_value()) continue;
    if (first_seen.emplace(*key, order).second) {
      counts[*key] = 1;
    } else {
      ++counts[*key];
    }
  }
  if (counts.empty()) return false;  // everyone abstained
  const std::string* winner = nullptr;
  int best_count = 0;
  int best_order = 0;
  for (const auto& [key, count] : counts) {
    int seen = first_seen[key];
    if (count > best_count || (count == best_count && seen < best_order)) {
      winner = &key;
      best_count = count;
      best_order = seen;
    }
  }
  return *winner == gold_key;
}

template <typename Fn>
void for_each_combination(int n, int k, Fn&& fn) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

// Deterministic bounded draw; mt19937_64 output is pinned by the standard,
// so streams agree across platforms.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  return rng() % n;
}

}  // namespace

double binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double result = 1.0;
  for (int i = 0; i < k; ++i) {
    result *= static_cast<double>(n - i) / static_cast<double>(i + 1);
    if (std::isinf(result)) return result;
  }
  return result;
}

double pass_at_k(int n, int c, int k) {
  if (c < 0 || c > n) {
    throw std::invalid_argument("pass_at_k: c must be in [0, n]");
  }
  if (k < 1 || k > n) {
    throw std::invalid_argument("pass_at_k: k must be in [1, n]");
  }
  if (n - c < k) return 1.0;  // every size-k subset hits a correct sample
  double miss = 1.0;
  for (int i = 0; i < k; ++i) {
    miss *= static_cast<double>(n - c - i) / static_cast<double>(n - i);
  }
  return 1.0 - miss;
}

double maj_at_k(const std::vector<Sample>& samples, const std::string& gold,
                int k, const MajMode& mode, const std::string& stream_label) {
  const int n = static_cast<int>(samples.size());
  if (n == 0) throw std::invalid_argument("maj_at_k: samples are empty");
  if (k < 1 || k > n) {
    throw std::invalid_argument("maj_at_k: k must be in [1, n]");
  }
  const auto keys = vote_keys(samples);
  const std::string gold_key = vote_key(answer::canonicalize(gold));

  switch (mode.kind) {
    case MajMode::Kind::first_k: {
      std::vector<int> subset(static_cast<std::size_t>(k));
      std::iota(subset.begin(), subset.end(), 0);
      return majority_correct(subset, keys, gold_key) ? 1.0 : 0.0;
    }
    case MajMode::Kind::exhaustive: {
      std::int64_t hits = 0;
      std::int64_t total = 0;
      for_each_combination(n, k, [&](const std::vector<int>& subset) {
        if (majority_correct(subset, keys, gold_key)) ++hits;
        ++total;
      });
      return static_cast<double>(hits) / static_cast<double>(total);
    }
    case MajMode::Kind::bootstrap: {
      if (mode.bootstrap_samples <= 0) {
        throw std::invalid_argument("maj_at_k: bootstrap sample count must be positive");
      }
      std::uint64_t stream = mode.seed;
      if (!stream_label.empty()) stream ^= fnv1a64(stream_label);
      std::mt19937_64 rng(splitmix64(stream));
      std::vector<int> pool(static_cast<std::size_t>(n));
      std::int64_t hits = 0;
      for (int b = 0; b < mode.bootstrap_samples; ++b) {
        std::iota(pool.begin(), pool.end(), 0);
        for (int j = 0; j < k; ++j) {
          auto swap_with =
              static_cast<std::size_t>(j) +
              static_cast<std::size_t>(bounded(rng, static_cast<std::uint64_t>(n - j)));
          std::swap(pool[static_cast<std::size_t>(j)], pool[swap_with]);
        }
        std::vector<int> subset(pool.begin(), pool.begin() + k);
        std::sort(subset.begin(), subset.end());
        if (majority_correct(subset, keys, gold_key)) ++hits;
      }
      return static_cast<double>(hits) /
             static_cast<double>(mode.bootstrap_samples);
    }
  }
  throw std::logic_error("maj_at_k: unknown mode");
}

AvgTokens avg_token_count(const EvalRun& run) {
  std::int64_t total = 0;
  std::int64_t count = 0;
  bool approximate = false;
  for (const auto& [problem_id, samples] : run.samples) {
    for (const auto& s : samples) {
      total += s.token_count;
      approximate |= s.token_count_estimated;
      ++count;
    }
  }
  if (count == 0) throw std::invalid_argument("avg_token_count: empty run");
  return {static_cast<double>(total) / static_cast<double>(count), approximate};
}

double plain_accuracy(const EvalRun& run) {
  if (run.samples.empty()) {
    throw std::invalid_argument("plain_accuracy: empty run");
  }
  double sum = 0.0;
  for (const auto& [problem_id, samples] : run.samples) {
    int correct = 0;
    for (const auto& s : samples) correct += s.correct ? 1 : 0;
    sum += static_cast<double>(correct) / static_cast<double>(samples.size());
  }
  return sum / static_cast<double>(run.samples.size());
}

int budget_k(double avg_tokens, double budget) {
  if (avg_tokens <= 0.0) return 1;
  auto k = static_cast<std::int64_t>(std::floor(budget / avg_tokens));
  while (static_cast<double>(k + 1) * avg_tokens <= budget) ++k;
  while (k > 1 && static_cast<double>(k) * avg_tokens > budget) --k;
  if (k < 1) k = 1;
  if (k % 2 == 0) --k;
  k = std::min<std::int64_t>(k, std::numeric_limits<int>::max());
  return static_cast<int>(k);
}

BudgetPoint budgeted_accuracy(const EvalRun& run, double budget,
                              const BudgetPolicy& policy) {
  if (budget <= 0.0) {
    throw std::invalid_argument("budgeted_accuracy: budget must be positive");
  }
  const double avg = avg_token_count(run).value;
  int k = budget_k(avg, budget);
  if (k > run.n) {
    // The budget affords more votes than the run holds samples; use the
    // largest odd k the run supports.
    k = (run.n % 2 == 1) ? run.n : run.n - 1;
    if (k < 1) k = 1;
  }
  MajMode mode = binomial(run.n, k) <= policy.exhaustive_limit
                     ? MajMode::exhaustive()
                     : MajMode::bootstrap(policy.bootstrap_seed,
                                          policy.bootstrap_samples);
  double sum = 0.0;
  for (const auto& [problem_id, samples] : run.samples) {
    sum += maj_at_k(samples, run.gold.at(problem_id), k, mode, problem_id);
  }
  BudgetPoint point;
  point.budget = budget;
  point.k = k;
  point.accuracy = sum / static_cast<double>(run.samples.size());
  return point;
}

std::vector<BudgetPoint> scaling_curve(const EvalRun& run,
                                       const std::vector<double>& budgets,
                                       const BudgetPolicy& policy) {
  for (std::size_t i = 1; i < budgets.size(); ++i) {
    if (budgets[i] <= budgets[i - 1]) {
      throw std::invalid_argument("scaling_curve: budgets must be strictly ascending");
    }
  }
  std::vector<BudgetPoint> curve;
  curve.reserve(budgets.size());
  for (double budget : budgets) {
    curve.push_back(budgeted_accuracy(run, budget, policy));
  }
  return curve;
}

// ---------------------------------------------------------------------------
// Loading

Benchmark load_benchmark(const std::filesystem::path& manifest_path) {
  io::Json root;
  try {
    root = io::Json::parse(io::read_file(manifest_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("benchmark manifest " + manifest_path.string() + ": " +
                      e.what());
  }
  Benchmark bench;
  bench.benchmark_id = root.value("benchmark_id", std::string());
  if (bench.benchmark_id.empty()) {
    throw ConfigError("benchmark manifest " + manifest_path.string() +
                      ": missing benchmark_id");
  }
  bench.display_name = root.value("display_name", bench.benchmark_id);
  std::string style = root.value("accuracy_style", std::string("percent"));
  if (style == "percent") {
    bench.accuracy_style = AccuracyStyle::percent;
  } else if (style == "fraction") {
    bench.accuracy_style = AccuracyStyle::fraction;
  } else {
    throw ConfigError("benchmark manifest: unknown accuracy_style \"" + style +
                      "\"");
  }
  bench.aime_answer_range = root.value("aime_answer_range", false);
  if (!root.contains("problems_file") || !root["problems_file"].is_string()) {
    throw ConfigError("benchmark manifest: missing problems_file");
  }
  std::filesystem::path problems_path =
      manifest_path.parent_path() / root["problems_file"].get<std::string>();
  corpus::ProblemSet ps = corpus::load_problems(problems_path);
  for (const auto& p : ps.problems) {
    if (!p.gold_answer.has_value() || p.gold_answer->empty()) {
      throw ValidationError("benchmark " + bench.benchmark_id + ": problem " +
                            p.id + " has no gold answer");
    }
    if (bench.aime_answer_range &&
        !answer::validate_aime_range(*p.gold_answer)) {
      throw ValidationError("benchmark " + bench.benchmark_id + ": problem " +
                            p.id + " gold answer \"" + *p.gold_answer +
                            "\" is outside the AIME 0-999 integer range");
    }
    bench.problem_order.push_back(p.id);
    bench.gold[p.id] = *p.gold_answer;
  }
  return bench;
}

std::vector<RawSample> load_samples(const std::filesystem::path& path) {
  std::vector<RawSample> out;
  std::string label = path.filename().string();
  io::for_each_jsonl(path, [&](std::size_t line_no, const io::Json& obj) {
    auto fail = [&](const std::string& what) -> ValidationError {
      return ValidationError(label + ":" + std::to_string(line_no) + ": " +
                             what);
    };
    if (!obj.is_object()) throw fail("record is not a JSON object");
    RawSample s;
    if (!obj.contains("problem_id") || !obj["problem_id"].is_string()) {
      throw fail("missing \"problem_id\"");
    }
    if (!obj.contains("model_id") || !obj["model_id"].is_string()) {
      throw fail("missing \"model_id\"");
    }
    if (!obj.contains("text") || !obj["text"].is_string()) {
      throw fail("missing \"text\"");
    }
    s.problem_id = obj["problem_id"].get<std::string>();
    s.model_id = obj["model_id"].get<std::string>();
    s.text = obj["text"].get<std::string>();
    if (obj.contains("token_count") && !obj["token_count"].is_null()) {
      if (!obj["token_count"].is_number_integer()) {
        throw fail("\"token_count\" must be an integer or null");
      }
      auto tc = obj["token_count"].get<std::int64_t>();
      if (tc < 0) throw fail("\"token_count\" must be non-negative");
      s.token_count = tc;
    }
    out.push_back(std::move(s));
  });
  return out;
}

EvalRun build_eval_run(const std::vector<RawSample>& raw,
                       const std::string& model_id, const Benchmark& bench) {
  EvalRun run;
  run.model_id = model_id;
  run.benchmark_id = bench.benchmark_id;
  run.gold = bench.gold;
  for (const auto& rs : raw) {
    if (rs.model_id != model_id) continue;
    auto gold_it = bench.gold.find(rs.problem_id);
    if (gold_it == bench.gold.end()) {
      throw ValidationError("sample references unknown problem \"" +
                            rs.problem_id + "\" (benchmark " +
                            bench.benchmark_id + ")");
    }
    Sample s;
    s.problem_id = rs.problem_id;
    s.model_id = rs.model_id;
    s.text = rs.text;
    if (rs.token_count.has_value()) {
      s.token_count = *rs.token_count;
    } else {
      s.token_count = static_cast<std::int64_t>((rs.text.size() + 3) / 4);
      s.token_count_estimated = true;
      run.any_token_estimated = true;
    }
    s.extracted = answer::extract_boxed(rs.text);
    s.correct = s.extracted.has_value() &&
                answer::equivalent(*s.extracted, gold_it->second);
    run.samples[rs.problem_id].push_back(std::move(s));
  }
  if (run.samples.empty()) {
    throw ValidationError("no samples for model \"" + model_id +
                          "\" on benchmark " + bench.benchmark_id);
  }
  int n = -1;
  for (const auto& problem_id : bench.problem_order) {
    auto it = run.samples.find(problem_id);
    if (it == run.samples.end()) {
      throw ValidationError("model \"" + model_id + "\" has no samples for problem \"" +
                            problem_id + "\"");
    }
    int count = static_cast<int>(it->second.size());
    if (n == -1) {
      n = count;
    } else if (count != n) {
      throw ValidationError("model \"" + model_id + "\": problem \"" + problem_id +
                            "\" has " + std::to_string(count) +
                            " samples, expected " + std::to_string(n));
    }
  }
  run.n = n;
  return run;
}

std::vector<std::string> model_ids(const std::vector<RawSample>& raw) {
  std::vector<std::string> ids;
  for (const auto& s : raw) {
    if (std::find(ids.begin(), ids.end(), s.model_id) == ids.end()) {
      ids.push_back(s.model_id);
    }
  }
  return ids;
}

}  // namespace ltkit::metrics
