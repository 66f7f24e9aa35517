// Copyright 2026 The ltkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "ltkit/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "ltkit/answer.hpp"
#include "ltkit/errors.hpp"

namespace ltkit::corpus {
namespace {

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char ch) {
    return static_cast<char>(std::tolower(ch));
  });
  return out;
}

// Case-insensitive marker scan; returns the matched marker for the report.
std::optional<std::string> find_marker(const std::string& statement,
                                       const std::vector<std::string>& markers) {
  std::string lowered = to_lower(statement);
  for (const auto& marker : markers) {
    if (lowered.find(to_lower(marker)) != std::string::npos) {
      return marker;
    }
  }
  return std::nullopt;
}

std::string first_word(const std::string& statement) {
  std::size_t begin = 0;
  while (begin < statement.size() &&
         std::isspace(static_cast<unsigned char>(statement[begin]))) {
    ++begin;
  }
  std::size_t end = begin;
  while (end < statement.size() &&
         std::isalpha(static_cast<unsigned char>(statement[end]))) {
    ++end;
  }
  return to_lower(std::string_view(statement).substr(begin, end - begin));
}

AnswerKind classify_answer(const std::optional<std::string>& gold) {
  if (!gold.has_value()) return AnswerKind::unknown;
  auto canonical = answer::canonicalize(*gold);
  return canonical.kind == answer::AnswerKind::rational
             ? AnswerKind::numeric
             : AnswerKind::non_numeric;
}

std::string answer_kind_name(AnswerKind k) {
  switch (k) {
    case AnswerKind::numeric:
      return "numeric";
    case AnswerKind::non_numeric:
      return "non_numeric";
    case AnswerKind::unknown:
      return "unknown";
  }
  return "unknown";
}

}  // namespace

const Problem* ProblemSet::find(const std::string& id) const {
  for (const auto& p : problems) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

Problem problem_from_json(const io::Json& obj, std::size_t line_no,
                          const std::string& file_label) {
  auto fail = [&](const std::string& what) -> ValidationError {
    return ValidationError(file_label + ":" + std::to_string(line_no) + ": " +
                           what);
  };
  if (!obj.is_object()) throw fail("record is not a JSON object");
  if (!obj.contains("id") || !obj["id"].is_string() ||
      obj["id"].get<std::string>().empty()) {
    throw fail("missing or empty \"id\"");
  }
  if (!obj.contains("statement") || !obj["statement"].is_string()) {
    throw fail("missing \"statement\"");
  }
  Problem p;
  p.id = obj["id"].get<std::string>();
  p.statement = obj["statement"].get<std::string>();
  if (obj.contains("source") && obj["source"].is_string()) {
    p.source = obj["source"].get<std::string>();
  }
  if (obj.contains("gold_answer") && !obj["gold_answer"].is_null()) {
    if (!obj["gold_answer"].is_string()) {
      throw fail("\"gold_answer\" must be a string or null");
    }
    p.gold_answer = obj["gold_answer"].get<std::string>();
  }
  if (obj.contains("metadata") && obj["metadata"].is_object()) {
    for (const auto& [key, value] : obj["metadata"].items()) {
      if (!value.is_string()) throw fail("metadata values must be strings");
      p.metadata[key] = value.get<std::string>();
    }
  }
  p.answer_kind = classify_answer(p.gold_answer);
  return p;
}

io::Json problem_to_json(const Problem& p) {
  io::Json obj;
  obj["id"] = p.id;
  obj["source"] = p.source;
  obj["statement"] = p.statement;
  if (p.gold_answer.has_value()) {
    obj["gold_answer"] = *p.gold_answer;
  } else {
    obj["gold_answer"] = nullptr;
  }
  obj["metadata"] = io::Json::object();
  for (const auto& [key, value] : p.metadata) obj["metadata"][key] = value;
  return obj;
}

ProblemSet load_problems(const std::filesystem::path& path) {
  ProblemSet ps;
  std::unordered_set<std::string> seen;
  std::string label = path.filename().string();
  io::for_each_jsonl(path, [&](std::size_t line_no, const io::Json& obj) {
    Problem p = problem_from_json(obj, line_no, label);
    if (!seen.insert(p.id).second) {
      throw ValidationError(label + ":" + std::to_string(line_no) +
                            ": duplicate problem id \"" + p.id + "\"");
    }
    ps.problems.push_back(std::move(p));
  });
  return ps;
}

void write_problems(const ProblemSet& ps, const std::filesystem::path& path) {
  std::string out;
  for (const auto& p : ps.problems) {
    out += problem_to_json(p).dump();
    out += '\n';
  }
  io::atomic_write_file(path, out);
}

bool is_image_dependent(const Problem& p, const CurationRules& rules) {
  return find_marker(p.statement, rules.image_markers).has_value();
}

bool is_proof_based(const Problem& p, const CurationRules& rules) {
  if (find_marker(p.statement, rules.proof_markers)) return true;
  std::string lead = first_word(p.statement);
  return std::find(rules.proof_leading_words.begin(),
                   rules.proof_leading_words.end(),
                   lead) != rules.proof_leading_words.end();
}

bool has_labeled_numeric_answer(const Problem& p) {
  return p.gold_answer.has_value() && !p.gold_answer->empty() &&
         p.answer_kind == AnswerKind::numeric;
}

CurationResult curate(const ProblemSet& ps, const CurationRules& rules) {
  if (rules.rule_order.empty()) {
    throw ValidationError("curation rule order must not be empty");
  }
  for (const auto& rule : rules.rule_order) {
    if (rule != "image" && rule != "proof" && rule != "answer") {
      throw ValidationError("unknown curation rule \"" + rule + "\"");
    }
  }
  // First matching rule in rule_order wins attribution; membership of the
  // kept set only depends on which rules fire at all.
  auto match = [&](const std::string& rule,
                   const Problem& p) -> std::optional<std::string> {
    if (rule == "image") {
      return find_marker(p.statement, rules.image_markers);
    }
    if (rule == "proof") {
      if (!is_proof_based(p, rules)) return std::nullopt;
      auto marker = find_marker(p.statement, rules.proof_markers);
      return marker.value_or("leading \"prove\"");
    }
    if (has_labeled_numeric_answer(p)) return std::nullopt;
    return p.gold_answer.has_value()
               ? "gold_answer \"" + *p.gold_answer + "\" is " +
                     answer_kind_name(p.answer_kind)
               : "gold_answer missing";
  };

  CurationResult result;
  for (const auto& p : ps.problems) {
    bool rejected = false;
    for (const auto& rule : rules.rule_order) {
      if (auto evidence = match(rule, p)) {
        result.report.rejected.push_back({p.id, rule, *evidence});
        rejected = true;
        break;
      }
    }
    if (!rejected) result.kept.problems.push_back(p);
  }
  result.report.kept_count = result.kept.size();
  for (const auto& r : result.report.rejected) {
    ++result.report.rule_stats[r.rule_id];
  }
  return result;
}

io::Json CurationReport::to_json() const {
  io::Json obj;
  obj["kept_count"] = kept_count;
  obj["rejected"] = io::Json::array();
  for (const auto& r : rejected) {
    io::Json entry;
    entry["problem_id"] = r.problem_id;
    entry["rule_id"] = r.rule_id;
    entry["evidence_snippet"] = r.evidence_snippet;
    obj["rejected"].push_back(entry);
  }
  obj["rule_stats"] = io::Json::object();
  for (const auto& [rule, count] : rule_stats) obj["rule_stats"][rule] = count;
  return obj;
}

}  // namespace ltkit::corpus
