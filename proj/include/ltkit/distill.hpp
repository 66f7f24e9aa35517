// Copyright 2026 The ltkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Long-thought generation, reformatting, rejection-sampling validation and
// SFT export. Rejection is a value here, not an error: wrong answers land in
// the rejection log and the run keeps going.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ltkit/corpus.hpp"
#include "ltkit/teacher.hpp"

namespace ltkit::distill {

enum class ThoughtStage { distilled, reformatted };

struct LongThought {
  std::string problem_id;
  std::string text;
  std::optional<std::string> final_answer;  // extract_boxed(text)
  std::int64_t token_count = 0;
  ThoughtStage stage = ThoughtStage::distilled;
  // Byte length of the raw solution a reformat started from; lets the
  // validator flag rewrites that came back shorter than the original.
  std::optional<std::size_t> reformatted_from_bytes;
};

struct ValidationPolicy {
  int min_steps = 3;
  // Teacher samples drawn per problem before giving up (rejection loop).
  int samples_per_problem = 1;
};

struct ValidationResult {
  bool accepted = false;
  std::vector<std::string> reasons;  // every failed check, not just the first
  std::vector<std::string> flags;    // informational, e.g. length_regression
};

struct Provenance {
  std::string teacher_model_id;
  std::string request_digest;
  std::string validated_at;
  std::string source;  // problem's dataset source, for manifest counts
};

struct TrainingRecord {
  std::string problem_id;
  std::string prompt;
  std::string response;
  Provenance provenance;

  // Set only by make_training_record after a passing validation; export
  // refuses records that did not come through the gate.
  bool validated = false;
};

struct ExportManifest {
  std::size_t count = 0;
  std::string sha256;
  std::map<std::string, std::size_t> per_source;

  io::Json to_json() const;
};

struct RejectionEntry {
  std::string problem_id;
  std::vector<std::string> reasons;
  int attempts = 0;
};

struct DistillOptions {
  std::string template_text;  // must contain {statement}
  std::string system_prompt;
  std::string model_id;
  teacher::Sampling sampling;
  ValidationPolicy policy;
  // ISO-8601 stamp recorded in provenance; empty means "now". Pin it to get
  // byte-identical exports across reruns.
  std::string timestamp;
  int workers = 1;
};

struct DistillResult {
  std::vector<TrainingRecord> records;      // ordered by problem id
  std::vector<RejectionEntry> rejections;   // ordered by problem id

  io::Json rejections_to_json() const;
};

// Substitutes every {statement} in the template. Missing placeholder is a
// ConfigError. request_tag = "distill".
teacher::CompletionRequest build_distill_prompt(
    const corpus::Problem& p, const std::string& template_text,
    const std::string& system_prompt = {}, const std::string& model_id = {},
    const teacher::Sampling& sampling = {});

// One teacher call; stage=distilled, final_answer from extraction.
LongThought generate_long_thought(teacher::TeacherClient& client,
                                  const corpus::Problem& p,
                                  const std::string& template_text,
                                  const std::string& system_prompt = {},
                                  const std::string& model_id = {},
                                  const teacher::Sampling& sampling = {});

// Rewrite template must contain {solution}; {statement} is optional.
// request_tag = "reformat", stage=reformatted.
LongThought reformat_solution(teacher::TeacherClient& client,
                              const corpus::Problem& p,
                              const std::string& raw_solution,
                              const std::string& template_text,
                              const std::string& system_prompt = {},
                              const std::string& model_id = {},
                              const teacher::Sampling& sampling = {});

// Step delimiters: lines starting with "Step", numbered-list lines, and
// blank-line-separated paragraphs of at least two sentences.
int count_steps(const std::string& text);

// accept iff boxed answer present, equivalent to gold, and enough steps.
// Requires p.gold_answer.
ValidationResult validate_record(const LongThought& lt,
                                 const corpus::Problem& p,
                                 const ValidationPolicy& policy);

// The validation gate: re-runs validate_record and throws ValidationError
// on rejection, so a TrainingRecord with validated=true always went through.
TrainingRecord make_training_record(const LongThought& lt,
                                    const corpus::Problem& p,
                                    const std::string& prompt,
                                    const Provenance& provenance,
                                    const ValidationPolicy& policy);

// Full campaign over a curated corpus: bounded worker pool, per-problem
// rejection loop, output re-ordered by problem id so completion order never
// shows up in the export.
DistillResult run_distill(const corpus::ProblemSet& ps,
                          teacher::TeacherClient& client,
                          const DistillOptions& options);

// All-or-nothing writer: records.jsonl plus manifest.json next to it.
// Any unvalidated record refuses the whole export.
ExportManifest export_sft_dataset(const std::vector<TrainingRecord>& records,
                                  const std::filesystem::path& records_path);

}  // namespace ltkit::distill
