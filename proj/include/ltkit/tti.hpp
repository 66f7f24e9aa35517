// Copyright 2026 The ltkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Technical Transparency Index: a weighted binary checklist over four
// dimensions, per-work scoring, and leaderboard rendering. The shipped
// default checklist lives in data/checklist.json and sums to 100 points.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ltkit/jsonl.hpp"

namespace ltkit::tti {

enum class Dimension { Data, Methodology, Evaluation, OpenSource };

// "Data", "Methodology", "Evaluation", "OpenSource" in config files.
std::string dimension_key(Dimension d);
// "Open-Source" etc., as rendered in tables.
std::string dimension_label(Dimension d);
Dimension dimension_from_key(const std::string& key);

inline constexpr Dimension kDimensions[] = {
    Dimension::Data, Dimension::Methodology, Dimension::Evaluation,
    Dimension::OpenSource};

struct ChecklistItem {
  std::string item_id;
  Dimension dimension = Dimension::Data;
  std::string question;
  int points = 0;
};

struct Checklist {
  std::vector<ChecklistItem> items;
  std::map<Dimension, int> declared_dimension_totals;

  int total_points() const;
  const ChecklistItem* find(const std::string& item_id) const;
};

struct Submission {
  std::string work_name;
  std::map<std::string, bool> answers;                 // item_id -> yes/no
  std::map<std::string, std::string> evidence;         // optional notes

  io::Json to_json() const;
};

struct ScoreCard {
  std::string work_name;
  std::map<Dimension, int> dimension_scores;
  int total = 0;
};

struct ExplainRow {
  std::string item_id;
  Dimension dimension = Dimension::Data;
  std::string question;
  bool answer = false;
  int points_earned = 0;
  int points_possible = 0;
  std::string evidence;
};

// Parses and validates: unique item ids, positive points, per-dimension sums
// equal to the declared totals, grand total exactly 100. Violations raise
// ValidationError naming the discrepancy.
Checklist load_checklist(const std::filesystem::path& path);
Checklist checklist_from_json(const io::Json& root, const std::string& label);
io::Json checklist_to_json(const Checklist& cl);

Submission load_submission(const std::filesystem::path& path);
Submission submission_from_json(const io::Json& root, const std::string& label);

// Every checklist item must be answered exactly once; missing or unknown
// ids raise ValidationError naming the work and the item.
ScoreCard score(const Checklist& cl, const Submission& s);

std::vector<ExplainRow> explain(const Checklist& cl, const Submission& s);
std::string render_explain(const std::vector<ExplainRow>& rows,
                           const std::string& work_name);

// Sorted by total descending, ties by work name ascending. Duplicate work
// names raise ValidationError.
std::vector<ScoreCard> leaderboard(std::vector<ScoreCard> cards);

std::string render_leaderboard(const std::vector<ScoreCard>& cards,
                               const Checklist& cl);
std::string leaderboard_csv(const std::vector<ScoreCard>& cards);

}  // namespace ltkit::tti
