// Copyright 2026 The ltkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Problem ingestion and curation. The marker lists below are a documented
// reconstruction (see README); they ship as defaults and are overridable
// from the toolkit config so the filtering stays auditable.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ltkit/jsonl.hpp"

namespace ltkit::corpus {

enum class AnswerKind { numeric, non_numeric, unknown };

struct Problem {
  std::string id;
  std::string source;
  std::string statement;
  std::optional<std::string> gold_answer;
  AnswerKind answer_kind = AnswerKind::unknown;
  std::map<std::string, std::string> metadata;
};

struct ProblemSet {
  std::vector<Problem> problems;  // input order preserved

  std::size_t size() const { return problems.size(); }
  bool empty() const { return problems.empty(); }
  const Problem* find(const std::string& id) const;
};

struct CurationRules {
  std::vector<std::string> image_markers = {
      "[asy]",
      "\\includegraphics",
      "figure below",
      "as shown in the figure",
  };
  std::vector<std::string> proof_markers = {
      "show that",
      "prove that",
      "justify your answer",
  };
  // Statements whose first word is one of these are proof-based even
  // without a marker phrase ("Prove the inequality ...").
  std::vector<std::string> proof_leading_words = {"prove"};
  // Attribution order for rejections; reordering moves attributions around
  // but can never change which problems are kept.
  std::vector<std::string> rule_order = {"image", "proof", "answer"};
};

struct RejectedProblem {
  std::string problem_id;
  std::string rule_id;          // "image", "proof" or "answer"
  std::string evidence_snippet;  // the marker hit or the offending answer
};

struct CurationReport {
  std::size_t kept_count = 0;
  std::vector<RejectedProblem> rejected;
  std::map<std::string, std::size_t> rule_stats;

  io::Json to_json() const;
};

struct CurationResult {
  ProblemSet kept;
  CurationReport report;
};

// Reads problems.jsonl: {"id", "source", "statement", "gold_answer",
// "metadata"} per line. answer_kind is assigned by attempting a numeric
// parse of gold_answer with the answer kernel. Throws ValidationError with
// the line number on schema violations and on duplicate ids.
ProblemSet load_problems(const std::filesystem::path& path);

Problem problem_from_json(const io::Json& obj, std::size_t line_no,
                          const std::string& file_label);
io::Json problem_to_json(const Problem& p);
void write_problems(const ProblemSet& ps, const std::filesystem::path& path);

// Individual rules. Matching is case-insensitive.
bool is_image_dependent(const Problem& p, const CurationRules& rules = {});
bool is_proof_based(const Problem& p, const CurationRules& rules = {});
bool has_labeled_numeric_answer(const Problem& p);

// Applies the rules in order image -> proof -> answer; the first matching
// rule is the one a rejection is attributed to. Rule order can only move
// attributions around, never change which problems are kept.
CurationResult curate(const ProblemSet& ps, const CurationRules& rules = {});

}  // namespace ltkit::corpus
