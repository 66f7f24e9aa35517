// Copyright 2026 The ltkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "ltkit/tti.hpp"

#include <algorithm>
#include <set>

#include "ltkit/errors.hpp"

namespace ltkit::tti {

std::string dimension_key(Dimension d) {
  switch (d) {
    case Dimension::Data:
      return "Data";
    case Dimension::Methodology:
      return "Methodology";
    case Dimension::Evaluation:
      return "Evaluation";
    case Dimension::OpenSource:
      return "OpenSource";
  }
  return "Data";
}

std::string dimension_label(Dimension d) {
  return d == Dimension::OpenSource ? "Open-Source" : dimension_key(d);
}

Dimension dimension_from_key(const std::string& key) {
  for (Dimension d : kDimensions) {
    if (dimension_key(d) == key) return d;
  }
  throw ValidationError("unknown dimension \"" + key + "\"");
}

int Checklist::total_points() const {
  int total = 0;
  for (const auto& item : items) total += item.points;
  return total;
}

const ChecklistItem* Checklist::find(const std::string& item_id) const {
  for (const auto& item : items) {
    if (item.item_id == item_id) return &item;
  }
  return nullptr;
}

Checklist checklist_from_json(const io::Json& root, const std::string& label) {
  if (!root.is_object() || !root.contains("items") ||
      !root["items"].is_array()) {
    throw ValidationError(label + ": expected {\"items\": [...]}");
  }
  Checklist cl;
  std::set<std::string> seen;
  for (const auto& entry : root["items"]) {
    ChecklistItem item;
    item.item_id = entry.value("item_id", std::string());
    if (item.item_id.empty()) {
      throw ValidationError(label + ": item with missing item_id");
    }
    if (!seen.insert(item.item_id).second) {
      throw ValidationError(label + ": duplicate item_id \"" + item.item_id +
                            "\"");
    }
    item.dimension = dimension_from_key(entry.value("dimension", std::string()));
    item.question = entry.value("question", std::string());
    if (!entry.contains("points") || !entry["points"].is_number_integer()) {
      throw ValidationError(label + ": item \"" + item.item_id +
                            "\" has no integer points");
    }
    item.points = entry["points"].get<int>();
    if (item.points <= 0) {
      throw ValidationError(label + ": item \"" + item.item_id +
                            "\" must have positive points");
    }
    cl.items.push_back(std::move(item));
  }

  if (root.contains("dimension_totals") && root["dimension_totals"].is_object()) {
    for (const auto& [key, value] : root["dimension_totals"].items()) {
      cl.declared_dimension_totals[dimension_from_key(key)] = value.get<int>();
    }
  } else {
    throw ValidationError(label + ": missing dimension_totals");
  }

  std::map<Dimension, int> sums;
  for (const auto& item : cl.items) sums[item.dimension] += item.points;
  for (Dimension d : kDimensions) {
    int declared = 0;
    if (auto it = cl.declared_dimension_totals.find(d);
        it != cl.declared_dimension_totals.end()) {
      declared = it->second;
    }
    int actual = sums.count(d) ? sums[d] : 0;
    if (declared != actual) {
      throw ValidationError(label + ": " + dimension_key(d) + " items sum to " +
                            std::to_string(actual) + ", declared total is " +
                            std::to_string(declared));
    }
  }
  int total = cl.total_points();
  if (total != 100) {
    throw ValidationError(label + ": total " + std::to_string(total) +
                          " != 100");
  }
  return cl;
}

io::Json checklist_to_json(const Checklist& cl) {
  io::Json root;
  root["dimension_totals"] = io::Json::object();
  for (Dimension d : kDimensions) {
    int declared = cl.declared_dimension_totals.count(d)
                       ? cl.declared_dimension_totals.at(d)
                       : 0;
    root["dimension_totals"][dimension_key(d)] = declared;
  }
  root["items"] = io::Json::array();
  for (const auto& item : cl.items) {
    root["items"].push_back({{"item_id", item.item_id},
                             {"dimension", dimension_key(item.dimension)},
                             {"question", item.question},
                             {"points", item.points}});
  }
  return root;
}

Checklist load_checklist(const std::filesystem::path& path) {
  io::Json root;
  try {
    root = io::Json::parse(io::read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("checklist " + path.string() + ": " + e.what());
  }
  return checklist_from_json(root, path.filename().string());
}

Submission submission_from_json(const io::Json& root,
                                const std::string& label) {
  if (!root.is_object() || !root.contains("work_name") ||
      !root["work_name"].is_string()) {
    throw ValidationError(label + ": missing work_name");
  }
  Submission s;
  s.work_name = root["work_name"].get<std::string>();
  if (!root.contains("answers") || !root["answers"].is_object()) {
    throw ValidationError(label + " (" + s.work_name + "): missing answers");
  }
  for (const auto& [item_id, value] : root["answers"].items()) {
    if (!value.is_boolean()) {
      throw ValidationError(label + " (" + s.work_name + "): answer for \"" +
                            item_id + "\" must be true or false");
    }
    s.answers[item_id] = value.get<bool>();
  }
  if (root.contains("evidence") && root["evidence"].is_object()) {
    for (const auto& [item_id, value] : root["evidence"].items()) {
      if (value.is_string()) s.evidence[item_id] = value.get<std::string>();
    }
  }
  return s;
}

Submission load_submission(const std::filesystem::path& path) {
  io::Json root;
  try {
    root = io::Json::parse(io::read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("submission " + path.string() + ": " + e.what());
  }
  return submission_from_json(root, path.filename().string());
}

io::Json Submission::to_json() const {
  io::Json obj;
  obj["work_name"] = work_name;
  obj["answers"] = io::Json::object();
  for (const auto& [item_id, yes] : answers) obj["answers"][item_id] = yes;
  if (!evidence.empty()) {
    obj["evidence"] = io::Json::object();
    for (const auto& [item_id, note] : evidence) obj["evidence"][item_id] = note;
  }
  return obj;
}

ScoreCard score(const Checklist& cl, const Submission& s) {
  // Silence is not scoreable: every item needs an explicit yes/no.
  for (const auto& item : cl.items) {
    if (!s.answers.count(item.item_id)) {
      throw ValidationError("submission \"" + s.work_name +
                            "\" is missing an answer for item \"" +
                            item.item_id + "\"");
    }
  }
  for (const auto& [item_id, yes] : s.answers) {
    if (cl.find(item_id) == nullptr) {
      throw ValidationError("submission \"" + s.work_name +
                            "\" answers unknown item \"" + item_id + "\"");
    }
  }
  ScoreCard card;
  card.work_name = s.work_name;
  for (Dimension d : kDimensions) card.dimension_scores[d] = 0;
  for (const auto& item : cl.items) {
    if (s.answers.at(item.item_id)) {
      card.dimension_scores[item.dimension] += item.points;
      card.total += item.points;
    }
  }
  return card;
}

std::vector<ExplainRow> explain(const Checklist& cl, const Submission& s) {
  ScoreCard card = score(cl, s);  // reuse coverage validation
  (void)card;
  std::vector<ExplainRow> rows;
  rows.reserve(cl.items.size());
  for (const auto& item : cl.items) {
    ExplainRow row;
    row.item_id = item.item_id;
    row.dimension = item.dimension;
    row.question = item.question;
    row.answer = s.answers.at(item.item_id);
    row.points_possible = item.points;
    row.points_earned = row.answer ? item.points : 0;
    if (auto it = s.evidence.find(item.item_id); it != s.evidence.end()) {
      row.evidence = it->second;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string render_explain(const std::vector<ExplainRow>& rows,
                           const std::string& work_name) {
  std::string out = "# " + work_name + "\n\n";
  out += "| Item | Dimension | Answer | Points | Evidence |\n";
  out += "|---|---|---|---|---|\n";
  int total = 0;
  for (const auto& row : rows) {
    out += "| " + row.item_id + " | " + dimension_label(row.dimension) +
           " | " + (row.answer ? "yes" : "no") + " | " +
           std::to_string(row.points_earned) + "/" +
           std::to_string(row.points_possible) + " | " + row.evidence +
           " |\n";
    total += row.points_earned;
  }
  out += "\nTotal: " + std::to_string(total) + "\n";
  return out;
}

std::vector<ScoreCard> leaderboard(std::vector<ScoreCard> cards) {
  std::set<std::string> names;
  for (const auto& card : cards) {
    if (!names.insert(card.work_name).second) {
      throw ValidationError("duplicate work name \"" + card.work_name + "\"");
    }
  }
  std::sort(cards.begin(), cards.end(),
            [](const ScoreCard& a, const ScoreCard& b) {
              if (a.total != b.total) return a.total > b.total;
              return a.work_name < b.work_name;
            });
  return cards;
}

std::string render_leaderboard(const std::vector<ScoreCard>& cards,
                               const Checklist& cl) {
  std::string out = "| Work |";
  for (Dimension d : kDimensions) {
    int declared = cl.declared_dimension_totals.count(d)
                       ? cl.declared_dimension_totals.at(d)
                       : 0;
    out += " " + dimension_label(d) + " (" + std::to_string(declared) + ") |";
  }
  out += " Total |\n|---|";
  for (std::size_t i = 0; i < std::size(kDimensions); ++i) out += "---|";
  out += "---|\n";
  for (const auto& card : cards) {
    out += "| " + card.work_name + " |";
    for (Dimension d : kDimensions) {
      int v = card.dimension_scores.count(d) ? card.dimension_scores.at(d) : 0;
      out += " " + std::to_string(v) + " |";
    }
    out += " " + std::to_string(card.total) + " |\n";
  }
  return out;
}

std::string leaderboard_csv(const std::vector<ScoreCard>& cards) {
  std::string out = "work,data,methodology,evaluation,open_source,total\n";
  for (const auto& card : cards) {
    out += "\"" + card.work_name + "\"";
    for (Dimension d : kDimensions) {
      int v = card.dimension_scores.count(d) ? card.dimension_scores.at(d) : 0;
      out += "," + std::to_string(v);
    }
    out += "," + std::to_string(card.total) + "\n";
  }
  return out;
}

}  // namespace ltkit::tti
