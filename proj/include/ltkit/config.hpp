// Copyright 2026 The ltkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// One config file drives every command. Defaults are compiled in; a config
// file overrides only the fields it names. The default prompt templates are
// neutral placeholders, not a claim about any particular teacher's prompts.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ltkit/corpus.hpp"
#include "ltkit/distill.hpp"
#include "ltkit/teacher.hpp"

namespace ltkit::config {

struct ToolkitConfig {
  struct Paths {
    std::string cache_dir = "cache";
    std::string output_dir = "out";
  } paths;

  teacher::EndpointConfig endpoint;  // base_url empty: no live endpoint
  teacher::Sampling sampling;
  int max_inflight = 2;
  int requests_per_minute = 60;

  struct Prompts {
    std::string distill_system =
        "You are a careful competition mathematician. Reason in explicit "
        "numbered steps, double-check your work, and put the final answer "
        "in \\boxed{}.";
    std::string distill_user =
        "Solve the following problem. Show detailed step-by-step reasoning "
        "and give the final answer in \\boxed{}.\n\n{statement}";
    std::string reformat_system =
        "You rewrite terse mathematical solutions into detailed "
        "step-by-step derivations.";
    std::string reformat_user =
        "Rewrite the solution below as a detailed step-by-step derivation, "
        "at least as long as the original, ending with the final answer in "
        "\\boxed{}.\n\nProblem:\n{statement}\n\nSolution:\n{solution}";
  } prompts;

  corpus::CurationRules curation;
  distill::ValidationPolicy validation;

  struct Metrics {
    std::vector<double> budgets = {1000, 2000, 4000, 8000, 16000};
    std::uint64_t bootstrap_seed = 42;
    int bootstrap_samples = 1000;
    double exhaustive_limit = 10000;
  } metrics;

  std::string checklist_path = "data/checklist.json";

  // Recorded as provenance.validated_at; empty means wall clock. Pin it for
  // byte-identical exports across reruns.
  std::string provenance_timestamp;
};

ToolkitConfig default_config();

// Throws ConfigError on unparseable files or out-of-range values
// (non-positive seed/B, bad budgets).
ToolkitConfig load_config(const std::filesystem::path& path);

io::Json config_to_json(const ToolkitConfig& cfg);

}  // namespace ltkit::config
